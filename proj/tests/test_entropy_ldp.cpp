#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "typlab/entropy_ldp.hpp"

using namespace typlab;
using namespace typlab::ldp;

namespace {

DiscreteDistribution random_measure(std::size_t q, RngStream& rng, bool positive = true) {
  std::vector<double> w(q);
  for (auto& x : w) x = rng.uniform() + (positive ? 1e-3 : 0.0);
  return make_distribution(Alphabet(q), w);
}

std::vector<double> as_vector(const DiscreteDistribution& d) {
  return {d.weights().begin(), d.weights().end()};
}

}  // namespace

TEST_CASE("shannon entropy") {
  CHECK(shannon_entropy(DiscreteDistribution::flat(2), LogBase::two) == 1.0);
  CHECK(shannon_entropy(DiscreteDistribution::point_mass(4, 1), LogBase::two) == 0.0);
  CHECK(shannon_entropy(DiscreteDistribution::bernoulli(0.75), LogBase::two) ==
        doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("kl divergence") {
  RngStream rng(1, 0);
  for (int i = 0; i < 50; ++i) {
    const auto mu = random_measure(4, rng, false);
    const auto p = random_measure(4, rng);
    CHECK(kl_divergence(mu, mu, LogBase::e) == doctest::Approx(0.0).epsilon(1e-12));
    // Gibbs inequality against the oracle.
    const double d = kl_divergence(mu, p, LogBase::e);
    CHECK(d >= 0.0);
    CHECK(d == doctest::Approx(oracle::kl_nats(as_vector(mu), as_vector(p))).epsilon(1e-12));
    // Flat-prior identity.
    const double flat = kl_divergence(mu, DiscreteDistribution::flat(4), LogBase::e);
    CHECK(std::abs(flat + shannon_entropy(mu, LogBase::e) - std::log(4.0)) <= 1e-12);
    // Convexity in mu.
    const auto nu = random_measure(4, rng, false);
    const double lam = rng.uniform();
    std::vector<double> mix(4);
    for (Symbol a = 0; a < 4; ++a) mix[a] = lam * mu[a] + (1 - lam) * nu[a];
    const auto m = make_distribution(Alphabet(4), mix);
    CHECK(kl_divergence(m, p, LogBase::e) <=
          lam * kl_divergence(mu, p, LogBase::e) + (1 - lam) * kl_divergence(nu, p, LogBase::e) + 1e-12);
  }
  CHECK(kl_divergence(DiscreteDistribution::point_mass(2, 0), DiscreteDistribution::flat(2), LogBase::e) ==
        doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(kl_divergence(DiscreteDistribution::flat(2), DiscreteDistribution::point_mass(2, 0), LogBase::e) ==
        kInf);
  CHECK_THROWS_AS(kl_divergence(DiscreteDistribution::flat(2), DiscreteDistribution::flat(3), LogBase::e),
                  Error);
}

TEST_CASE("boltzmann counting") {
  const auto r = boltzmann_counting(TypeVector({2, 2}), DiscreteDistribution::flat(2));
  REQUIRE(r.multiplicity);
  CHECK(*r.multiplicity == 6);
  CHECK(std::exp(r.log_probability) == doctest::Approx(0.375).epsilon(1e-12));

  // Enumerate the 16 strings of length 4 directly.
  int with_two_ones = 0;
  for (int s = 0; s < 16; ++s) with_two_ones += __builtin_popcount(s) == 2;
  CHECK(with_two_ones == 6);

  CHECK(*boltzmann_counting(TypeVector({7, 0}), DiscreteDistribution::flat(2)).multiplicity == 1);
  const auto p = DiscreteDistribution(Alphabet(3), {0.2, 0.3, 0.5});
  CHECK(boltzmann_counting(TypeVector({2, 3, 5}), p).limit_rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(boltzmann_counting(TypeVector({1, 1}), DiscreteDistribution::point_mass(2, 0)).log_probability ==
        -kInf);
}

TEST_CASE("exact and log-gamma multiplicities agree at the switch-over") {
  const std::vector<std::size_t> counts{700, 500, 800};
  const double exact = log_big(multinomial(counts));
  CHECK(exact == doctest::Approx(log_multinomial_lgamma(counts)).epsilon(1e-12));
  CHECK(exact == doctest::Approx(oracle::log_factorial(2000) - oracle::log_factorial(700) -
                                 oracle::log_factorial(500) - oracle::log_factorial(800))
                     .epsilon(1e-12));
}

TEST_CASE("Stirling convergence of the finite rate") {
  RngStream rng(17, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t q = 2 + rng.below(4);
    const auto mu = random_measure(q, rng);
    const auto p = random_measure(q, rng);
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const auto type = TypeVector::nearest(mu, n);
      const auto r = boltzmann_counting(type, p);
      // Against the oracle's log-factorial sums.
      std::vector<std::size_t> c(type.counts().begin(), type.counts().end());
      CHECK(r.log_probability == doctest::Approx(oracle::log_type_probability(c, as_vector(p))).epsilon(1e-9));
      const double err = std::abs(r.finite_rate - r.limit_rate);
      CHECK(err <= 2.0 * static_cast<double>(q) * std::log(static_cast<double>(n) + 1) / static_cast<double>(n));
    }
  }
}

TEST_CASE("type vectors") {
  const auto t = TypeVector::nearest(DiscreteDistribution(Alphabet(3), {1.0 / 3, 1.0 / 3, 1.0 / 3}), 10);
  CHECK(t.total() == 10);
  CHECK(TypeVector::of(bits_from_string("0110")).counts()[1] == 2);
  CHECK_THROWS_AS(TypeVector({0, 0}), Error);
}

TEST_CASE("sanov rate on grids") {
  const auto grid = simplex_grid(3, 0.1);
  CHECK(grid.size() == 66);
  const auto p = DiscreteDistribution(Alphabet(3), {0.2, 0.3, 0.5});
  const auto r = sanov_rate(grid, p);
  CHECK(r.rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.measure == grid[r.argmin]);

  const std::vector<DiscreteDistribution> delta{DiscreteDistribution::point_mass(2, 0)};
  CHECK(sanov_rate(delta, DiscreteDistribution::flat(2)).rate == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(sanov_rate(std::span<const DiscreteDistribution>{}, p), Error);
  CHECK_THROWS_AS(simplex_grid(2, 0.3), Error);

  // Rates are non-negative and vanish only at p.
  for (const auto& mu : simplex_grid(2, 0.01))
    CHECK(kl_divergence(mu, DiscreteDistribution::flat(2), LogBase::e) >= 0.0);
}

TEST_CASE("sanov desk check at N = 10 against the binomial tail") {
  const std::vector<DiscreteDistribution> all = simplex_grid(2, 1e-3);
  std::vector<DiscreteDistribution> gamma;
  for (const auto& mu : all)
    if (mu[1] >= 0.8 - 1e-12) gamma.push_back(mu);
  const double rate = sanov_rate(gamma, DiscreteDistribution::flat(2)).rate;
  CHECK(rate == doctest::Approx(0.192745).epsilon(1e-6));
  const std::size_t n = 10;
  const double exact = oracle::log_fair_binomial_upper_tail(n, 8) / n;
  CHECK(std::abs(exact + rate) <= (std::log(n + 1.0) + std::log(2.0)) / n);
}

TEST_CASE("cramer profile") {
  const auto f = DiscreteDistribution::flat(2);
  const std::vector<double> e{0.0, 1.0};
  CHECK(cramer_profile(0.5, f, e).entropy == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(free_energy(0.0, f, e) == 0.0);

  const auto r = cramer_profile(0.8, f, e);
  // h((0.2,0.8)) - ln 2
  const double expected = -(0.2 * std::log(0.2) + 0.8 * std::log(0.8)) - std::log(2.0);
  CHECK(r.entropy == doctest::Approx(expected).epsilon(1e-10));
  CHECK(expected == doctest::Approx(-0.192745).epsilon(1e-6));
  CHECK(r.dual_entropy == doctest::Approx(expected).epsilon(1e-9));
  CHECK(r.dual_beta == doctest::Approx(-std::log(4.0)).epsilon(1e-6));

  // Simplex-grid maximization oracle at step 1e-4.
  double best = -kInf;
  for (int k = 0; k <= 10000; ++k) {
    const double m1 = k / 10000.0;
    if (std::abs(m1 - 0.8) > 1e-9) continue;
    best = std::max(best, -oracle::kl_nats({1 - m1, m1}, {0.5, 0.5}));
  }
  CHECK(r.entropy == doctest::Approx(best).epsilon(1e-9));

  CHECK_THROWS_AS(cramer_profile(1.5, f, e), Error);
  const auto edge = cramer_profile(1.0, f, e);
  CHECK(edge.boundary);
  CHECK(edge.entropy == doctest::Approx(std::log(0.5)));
}

TEST_CASE("fenchel duality on random instances") {
  RngStream rng(5, 5);
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t q = 2 + rng.below(4);
    const auto p = random_measure(q, rng);
    std::vector<double> e(q);
    for (auto& x : e) x = 4.0 * rng.uniform() - 2.0;
    const double lo = *std::min_element(e.begin(), e.end());
    const double hi = *std::max_element(e.begin(), e.end());
    for (int i = 1; i < 50; i += 7) {
      const double u = lo + (hi - lo) * i / 50.0;
      const auto r = cramer_profile(u, p, e);
      CHECK(r.duality_gap <= 1e-6);
      CHECK(r.dual_entropy == doctest::Approx(oracle::dual_by_scan(u, as_vector(p), e)).epsilon(1e-6));
      if (q == 2) CHECK(r.entropy == doctest::Approx(oracle::binary_cramer_entropy(u, as_vector(p), e)).epsilon(1e-9));
      CHECK(r.entropy <= 1e-12);
    }
  }
}

TEST_CASE("rate profile csv") {
  const std::vector<double> us{0.2, 0.5};
  const std::vector<double> e{0.0, 1.0};
  std::ostringstream out;
  cramer_rate_profile(DiscreteDistribution::flat(2), e, us).write_csv(out);
  CHECK(out.str().rfind("u_or_measure_id,rate,witness_0,witness_1\n0.2,", 0) == 0);
}

TEST_CASE("hoeffding test") {
  const auto f = DiscreteDistribution::flat(2);
  const auto accept = hoeffding_test(bits_from_string("0101"), f, 0.1);
  CHECK(accept.statistic == 0.0);
  CHECK(accept.accept);
  const auto reject = hoeffding_test(bits_from_string("1111111111"), f, 0.1);
  CHECK(reject.statistic == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK_FALSE(reject.accept);
  // Strict inequality: statistic exactly eta rejects.
  CHECK_FALSE(hoeffding_test(bits_from_string("1111"), f, std::log(2.0)).accept);
  CHECK_THROWS_AS(hoeffding_test(bits_from_string("1"), f, 0.0), Error);
}
