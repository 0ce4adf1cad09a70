#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "typlab/kacring.hpp"

using namespace typlab;
using namespace typlab::kac;

namespace {

KacState state_from_index(std::size_t n, std::uint64_t index) {
  KacState s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.set_spin(i, (index >> i) & 1u);
    s.set_scatterer(i, (index >> (n + i)) & 1u);
  }
  return s;
}

}  // namespace

TEST_CASE("microstate basics") {
  CHECK_THROWS_AS(KacState(4), Error);
  CHECK_THROWS_AS(KacState(1), Error);
  const std::vector<int> x{1, 0, 0, 1, 1}, y{0, 1, 0, 0, 1};
  const KacState s(x, y);
  const auto m = macro_of_micro(s);
  CHECK(m.m == doctest::Approx(0.6));
  CHECK(m.s == doctest::Approx(0.4));

  KacState up(7);
  for (std::size_t i = 0; i < 7; ++i) up.set_spin(i, true);
  CHECK(macro_of_micro(up).m == 1.0);
  CHECK(macro_of_micro(up).s == 0.0);
}

TEST_CASE("micro step") {
  const std::vector<int> x{1, 0, 0, 1, 1}, y{0, 1, 0, 0, 1};
  const KacState s(x, y);
  CHECK(micro_step(s).spins() == std::vector<int>{0, 1, 1, 0, 1});
  CHECK(micro_step(s).scatterer_field() == y);
  CHECK(inverse_step(micro_step(s)) == s);

  // Against the plain-array oracle, across word boundaries.
  RngStream rng(1, 1);
  for (std::size_t n : {3u, 63u, 65u, 127u, 129u, 1001u}) {
    KacState st = sample_microstate(0.5, 0.3, n, rng);
    auto xs = st.spins();
    const auto ys = st.scatterer_field();
    for (int t = 0; t < 5; ++t) {
      st = micro_step(st);
      xs = oracle::kac_step_naive(xs, ys);
      CHECK(st.spins() == xs);
    }
  }

  KacState free(9);
  free.set_spin(8, true);
  CHECK(micro_step(free).spins() == std::vector<int>{1, 0, 0, 0, 0, 0, 0, 0, 0});
  KacState full(5);
  for (std::size_t i = 0; i < 5; ++i) full.set_scatterer(i, true);
  full.set_spin(0, true);
  CHECK(micro_step(full).spins() == std::vector<int>{1, 0, 1, 1, 1});
}

TEST_CASE("macro dynamics") {
  CHECK(macro_step({0.3, 0.0}).m == doctest::Approx(0.3));
  CHECK(macro_step({0.9, 0.5}).m == doctest::Approx(0.5));
  for (std::size_t t = 0; t < 20; ++t)
    CHECK(macro_evolve({0.9, 0.2}, t).m == doctest::Approx(0.5 + 0.4 * std::pow(0.6, t)).epsilon(1e-14));
  CHECK(macro_evolve({0.7, 0.35}, 1).m == macro_step({0.7, 0.35}).m);
  CHECK_THROWS_AS(macro_step({1.2, 0.1}), Error);

  // Fixed points: m = 1/2 or s = 0.
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const Macrostate ms{i / 10.0, j / 10.0};
      const bool fixed = std::abs(macro_step(ms).m - ms.m) < 1e-15;
      CHECK(fixed == (i == 5 || j == 0));
    }
}

TEST_CASE("stosszahlansatz residual") {
  const std::vector<int> x{1, 0, 0, 1, 1}, y{0, 1, 0, 0, 1};
  const auto r = stosszahl_residual(KacState(x, y));
  CHECK(r.predicted == doctest::Approx(2.6));
  CHECK(r.actual == 3.0);
  CHECK(r.residual == doctest::Approx(0.4));

  RngStream rng(2, 0);
  KacState clean = sample_microstate(0.4, 0.0, 101, rng);
  CHECK(stosszahl_residual(clean).residual == 0.0);

  const std::size_t n = 100001;
  for (int trial = 0; trial < 20; ++trial) {
    const auto st = sample_microstate(0.9, 0.2, n, rng);
    CHECK(std::abs(stosszahl_residual(st).residual) / n <= 0.005);
  }
}

TEST_CASE("sampling") {
  RngStream rng(3, 0);
  const auto s = sample_microstate(1.0, 0.0, 11, rng);
  CHECK(s.spins_up() == 11);
  CHECK(s.scatterers() == 0);

  const auto big = sample_microstate(0.5, 0.5, 100001, rng);
  CHECK(std::abs(macro_of_micro(big).m - 0.5) <= 0.008);
  CHECK(std::abs(macro_of_micro(big).s - 0.5) <= 0.008);

  const auto biased = sample_microstate(0.9, 0.2, 100001, rng);
  CHECK(std::abs(macro_of_micro(biased).m - 0.9) <= 0.005);
  CHECK(std::abs(macro_of_micro(biased).s - 0.2) <= 0.005);

  RngStream a(5, 5), b(5, 5);
  CHECK(sample_microstate(0.3, 0.6, 1001, a) == sample_microstate(0.3, 0.6, 1001, b));
  CHECK_THROWS_AS(sample_microstate(0.3, 0.6, 1000, a), Error);
}

TEST_CASE("time reversal") {
  RngStream rng(4, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = sample_microstate(0.5, 0.5, 21, rng);
    CHECK(time_reverse(time_reverse(s)) == s);
    const auto r = time_reverse(s);
    CHECK(macro_of_micro(r).m == macro_of_micro(s).m);
    CHECK(macro_of_micro(r).s == macro_of_micro(s).s);
    CHECK(reversal_roundtrip(s, 7));
  }
  // Exhaustive tau T = T^-1 tau at ring 9.
  for (std::uint64_t idx = 0; idx < (1u << 18); ++idx) {
    const auto s = state_from_index(9, idx);
    if (micro_step(time_reverse(s)) != time_reverse(inverse_step(s))) {
      FAIL("reversal identity fails at state " << idx);
    }
  }
  const auto s = sample_microstate(0.9, 0.2, 100001, rng);
  CHECK(reversal_roundtrip(s, 30));
}

TEST_CASE("recurrence") {
  for (std::size_t n : {3u, 5u, 7u})
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (2 * n)); ++idx)
      if (!recurrence_holds(state_from_index(n, idx))) FAIL("recurrence fails at ring " << n);

  RngStream rng(6, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = sample_microstate(0.5, 0.5, 1001, rng);
    CHECK(recurrence_holds(s));
    // After one revolution every spin is flipped iff the scatterer count is odd.
    KacState once = s;
    evolve(once, 1001);
    const bool odd = s.scatterers() % 2 == 1;
    for (std::size_t i = 0; i < 1001; i += 97) CHECK(once.spin(i) == (s.spin(i) != odd));
  }
  KacState s(5);
  s.set_scatterer(2, true);
  CHECK(micro_step(s).scatterers() == 1);
}

TEST_CASE("entropies") {
  const auto flat = entropies(0.5, 0.5, LogBase::two);
  CHECK(flat.fine == 2.0);
  CHECK(flat.coarse == 0.0);
  const auto point = entropies(1.0, 0.0, LogBase::e);
  CHECK(point.fine == 0.0);
  CHECK(point.coarse == doctest::Approx(-2.0 * std::log(2.0)));
  double last = -1.0;
  for (std::size_t t = 0; t <= 30; ++t) {
    const auto ms = macro_evolve({0.9, 0.2}, t);
    const double fine = entropies(ms.m, ms.s, LogBase::two).fine;
    CHECK(fine >= last);
    last = fine;
  }
}

TEST_CASE("typicality experiment") {
  TypicalityConfig c;
  c.ring_size = 10001;
  c.trials = 20;
  c.t_max = 10;
  c.seed = 9;
  const auto rows = typicality_experiment(c);
  REQUIRE(rows.size() == 11);
  const double tol = 3.0 / std::sqrt(static_cast<double>(c.ring_size));
  for (const auto& r : rows) CHECK(std::abs(r.m_mean - r.m_pred) <= tol);

  c.workers = 3;
  const auto again = typicality_experiment(c);
  for (std::size_t t = 0; t < rows.size(); ++t) CHECK(again[t].m_mean == rows[t].m_mean);

  TypicalityConfig frozen = c;
  frozen.s = 0.0;
  const auto still = typicality_experiment(frozen);
  for (const auto& r : still) {
    CHECK(r.m_mean == still[0].m_mean);
    CHECK(r.m_std == still[0].m_std);
    CHECK(r.szansatz_resid_mean == 0.0);
  }

  std::ostringstream out;
  write_typicality_csv(out, rows);
  CHECK(out.str().rfind(
            "t,m_pred,m_mean,m_std,m_max_abs_dev,szansatz_resid_mean,szansatz_resid_std\n0,0.9,", 0) == 0);
}

TEST_CASE("deviation scaling with ring size") {
  auto spread = [](std::size_t ring) {
    TypicalityConfig c;
    c.ring_size = ring;
    c.trials = 100;
    c.t_max = 5;
    c.seed = 13;
    return typicality_experiment(c)[5].m_std;
  };
  const double ratio = spread(1001) / spread(100001);
  CHECK(ratio >= 5.0);
  CHECK(ratio <= 20.0);
}
