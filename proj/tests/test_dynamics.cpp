#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "typlab/dynamics.hpp"

using namespace typlab;
using namespace typlab::dynamics;

TEST_CASE("coarse graining") {
  const DoublingMap doubling;
  CHECK(coarse_grain(doubling, DoublingMap::rational(1, 3), 6) == bits_from_string("010101"));

  const BernoulliShift shift(DiscreteDistribution::flat(2));
  auto stream = SymbolStream::bernoulli(DiscreteDistribution::flat(2), 4, 0);
  const auto x = BernoulliShift::point(stream);
  CHECK(coarse_grain(shift, x, 500) == stream.prefix(500));

  // Intertwining S xi = xi T on the shift.
  const auto longer = coarse_grain(shift, x, 501);
  const auto shifted = coarse_grain(shift, shift.step(x), 500);
  CHECK(std::equal(shifted.symbols().begin(), shifted.symbols().end(), longer.symbols().begin() + 1));

  const double alpha = std::sqrt(2.0) - 1.0;
  const Rotation rot(alpha);
  const auto code = coarse_grain(rot, 0.0, 1000);
  for (std::size_t n = 0; n < 1000; ++n) {
    const long double v = static_cast<long double>(n) * std::sqrt(2.0L) - n;  // n alpha in extended precision
    const long double fr = v - std::floor(v);
    CHECK(code[n] == (fr < 0.5L ? 0u : 1u));
  }
  CHECK_THROWS_AS(coarse_grain(rot, 0.0, 0), Error);
}

TEST_CASE("exact block entropies") {
  const auto p = DiscreteDistribution::bernoulli(0.1);
  const BernoulliShift shift(p);
  for (std::size_t n = 1; n <= 12; ++n) {
    CHECK(block_entropy(shift, n).bits == doctest::Approx(n * oracle::h2(0.1)).epsilon(1e-12));
    CHECK(block_entropy(DoublingMap{}, n).bits == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    CHECK(block_entropy(BakersMap{}, n).bits == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  }
  const BernoulliShift three(DiscreteDistribution(Alphabet(3), {0.2, 0.3, 0.5}));
  double sum = 0.0;
  for (double m : three.block_masses(6)) sum += m;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(block_entropy(shift, 25), Error);
}

TEST_CASE("rotation block entropy is logarithmic") {
  const Rotation rot(std::sqrt(2.0) - 1.0);
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto masses = rot.block_masses(n);
    CHECK(masses.size() <= 2 * n);
    double sum = 0.0;
    for (double m : masses) sum += m;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(block_entropy(rot, n).bits <= std::log2(2.0 * n) + 1e-12);

    // Enumeration oracle: words seen from a fine grid of starting points.
    std::set<std::vector<Symbol>> words;
    for (int i = 0; i < 20000; ++i) {
      const auto w = coarse_grain(rot, i / 20000.0, n);
      words.emplace(w.symbols().begin(), w.symbols().end());
    }
    CHECK(words.size() <= masses.size());
  }
  // Cylinder masses agree with the interval lengths of direct orbits.
  const Rotation eighth(0.125);
  const std::vector<Symbol> w{0, 0, 0, 0};
  CHECK(std::exp2(eighth.cylinder_log2_mass(w)) == doctest::Approx(0.125));
}

TEST_CASE("entropy rate") {
  const auto fair = entropy_rate(BernoulliShift(DiscreteDistribution::flat(2)), 12);
  CHECK(fair.estimate == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t n = 1; n <= 12; ++n) CHECK(fair.ratio(n) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fair.subadditive);

  const auto biased = entropy_rate(BernoulliShift(DiscreteDistribution::bernoulli(0.1)), 12);
  CHECK(std::abs(biased.estimate - 0.469) <= 0.001);
  CHECK(biased.subadditive);

  // Zero entropy: the slope decays like 1/(N ln 2).
  const auto rot = entropy_rate(Rotation(std::sqrt(2.0) - 1.0), 128);
  CHECK(rot.subadditive);
  CHECK(rot.estimate <= 0.02);
  CHECK(rot.ratio(128) < rot.ratio(16));

  const auto baker = entropy_rate(BakersMap{}, 12);
  CHECK(baker.subadditive);
  CHECK_THROWS_AS(entropy_rate(DoublingMap{}, 3), Error);
}

namespace {

// A system without a cylinder oracle.
struct Logistic {
  using state_type = double;
  std::string name() const { return "LOGISTIC"; }
  std::size_t alphabet_size() const { return 2; }
  double step(double x) const { return 4.0 * x * (1.0 - x); }
  Symbol cell(double x) const { return x < 0.5 ? 0 : 1; }
  double sample(RngStream& rng) const { return rng.uniform(); }
};

}  // namespace

TEST_CASE("monte carlo block entropy and missing oracles") {
  static_assert(SymbolicSystem<Logistic>);
  static_assert(!CylinderOracle<Logistic>);
  try {
    block_entropy(Logistic{}, 4);
    FAIL("expected OracleUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::oracle_unavailable);
  }
  const auto mc = block_entropy(DoublingMap{}, 4, MonteCarloMode{20000, 3, 0});
  CHECK_FALSE(mc.exact);
  CHECK(mc.bits <= 4.0 + 1e-12);  // plug-in is biased low
  CHECK(mc.bits >= 3.95);
  CHECK_FALSE(mc.note.empty());
  const auto logistic = block_entropy(Logistic{}, 3, MonteCarloMode{5000, 1, 0});
  CHECK(logistic.bits > 2.5);
}

TEST_CASE("SMB estimates") {
  const auto p = DiscreteDistribution::bernoulli(0.1);
  const BernoulliShift shift(p);
  RngStream rng(8, 1);
  const std::size_t n = 100000;
  const double h = oracle::h2(0.1);
  // Var of -log2 p(s_0).
  const double l0 = -std::log2(0.9), l1 = -std::log2(0.1);
  const double var = 0.9 * l0 * l0 + 0.1 * l1 * l1 - h * h;
  for (int trial = 0; trial < 5; ++trial) {
    const double est = smb_estimate(shift, shift.sample(rng), n);
    CHECK(std::abs(est - h) <= 3.0 * std::sqrt(var / n));
    CHECK(std::abs(est - h) <= 0.01);
  }
  const auto zeros = BernoulliShift::point(SymbolStream::constant(Alphabet(2), 0));
  CHECK(smb_estimate(shift, zeros, 1000) == doctest::Approx(-std::log2(0.9)));
  CHECK(smb_estimate(BernoulliShift(DiscreteDistribution::point_mass(2, 0)),
                     BernoulliShift::point(SymbolStream::constant(Alphabet(2), 1)), 10) == kInf);

  const DoublingMap doubling;
  CHECK(smb_estimate(doubling, DoublingMap::rational(1, 3), 1000) == 1.0);
  CHECK(smb_estimate(doubling, doubling.sample(rng), 1000) == 1.0);
}

TEST_CASE("Birkhoff averages") {
  const Rotation rot(std::sqrt(2.0) - 1.0);
  const auto r = birkhoff(rot, 0.0, 1000000, [](const double& x) { return x < 0.3 ? 1.0 : 0.0; }, 0.3);
  CHECK(std::abs(r.average - 0.3) <= 0.002);
  CHECK(r.curve.back().first == 1000000);

  const auto p = DiscreteDistribution::bernoulli(0.3);
  const BernoulliShift shift(p);
  RngStream rng(2, 2);
  const std::size_t n = 100000;
  const auto visits = birkhoff_cell(shift, shift.sample(rng), n, 1);
  REQUIRE(visits.target);
  CHECK(*visits.target == doctest::Approx(0.3));
  CHECK(std::abs(visits.average - 0.3) <= 4.0 * std::sqrt(0.21 / n));

  // Fixed point.
  const auto fixed = birkhoff(DoublingMap{}, DoublingMap::rational(0, 1), 50,
                              [](const DoublingMap::state_type&) { return 2.5; });
  for (const auto& [k, avg] : fixed.curve) CHECK(avg == 2.5);
}

TEST_CASE("first return times") {
  const DoublingMap doubling;
  const auto third = DoublingMap::rational(1, 3);
  CHECK(first_return_time(doubling, third, doubling.cell(third), 10) == 2u);
  CHECK(first_return_time(doubling, DoublingMap::rational(0, 1), Symbol{0}, 10) == 1u);
  const Rotation eighth(0.125);
  CHECK(first_return_time(eighth, 0.0, std::function<bool(const double&)>([](const double& x) { return x < 0.125; }),
                          100) == 8u);
  CHECK_FALSE(first_return_time(doubling, third, Symbol{0}, 1).has_value());
  CHECK_THROWS_AS(first_return_time(doubling, third, Symbol{0}, 0), Error);
}

TEST_CASE("Brudno rates") {
  RngStream rng(6, 0);
  const BernoulliShift fair(DiscreteDistribution::flat(2));
  const double r = brudno_rate(fair, fair.sample(rng), 100000);
  CHECK(r > 1.0);  // LZ78 overshoots the entropy at this length
  CHECK(r < 1.3);
  const Rotation rot(std::sqrt(2.0) - 1.0);
  CHECK(brudno_rate(rot, 0.0, 100000) < brudno_rate(fair, fair.sample(rng), 100000) / 3);
  CHECK_THROWS_AS(brudno_rate(rot, 0.0, 63), Error);
}

TEST_CASE("baker's map bilateral coding reconstructs the point") {
  const BakersMap baker;
  RngStream rng(10, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = baker.sample(rng);
    const auto [x, y] = baker.coordinates(s);
    for (std::size_t n : {4u, 16u, 40u}) {
      std::vector<Symbol> fwd, bwd;
      auto f = s, b = s;
      for (std::size_t i = 0; i < n; ++i) {
        fwd.push_back(baker.cell(f));
        f = baker.step(f);
        b = baker.inverse_step(b);
        bwd.push_back(baker.cell(b));
      }
      const auto [rx, ry] = baker_reconstruct(fwd, bwd);
      CHECK(std::abs(rx - x) <= std::ldexp(1.0, -static_cast<int>(n)));
      CHECK(std::abs(ry - y) <= std::ldexp(1.0, -static_cast<int>(n)));
    }
  }
  // Geometric action on an explicit point.
  const auto s = BakersMap::point(0.75, 0.25);
  const auto [x1, y1] = baker.coordinates(baker.step(s));
  CHECK(x1 == 0.5);
  CHECK(y1 == 0.625);
}

TEST_CASE("curve csv") {
  std::ostringstream out;
  const std::vector<CurvePoint> pts{{1, 0.5, 0.469, 0.01}};
  write_curve_csv(out, pts);
  CHECK(out.str() == "N,value,target,band\n1,0.5,0.469,0.01\n");
}
