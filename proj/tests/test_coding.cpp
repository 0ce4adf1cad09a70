#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "typlab/coding.hpp"
#include "typlab/entropy_ldp.hpp"

using namespace typlab;
using namespace typlab::coding;

namespace {

double h2(const DiscreteDistribution& p) { return ldp::shannon_entropy(p, LogBase::two); }

DiscreteDistribution random_positive(std::size_t q, RngStream& rng) {
  std::vector<double> w(q);
  for (auto& x : w) x = rng.uniform() + 1e-6;
  return make_distribution(Alphabet(q), w);
}

}  // namespace

TEST_CASE("validate_code") {
  auto v = validate_code({{"0", "10", "11"}});
  CHECK(v.prefix_free);
  CHECK(v.kraft.equals_one());
  CHECK(v.kraft.value() == 1.0);

  CHECK_FALSE(validate_code({{"0", "01"}}).prefix_free);

  v = validate_code({{"00", "01", "10", "11", "110"}});
  CHECK_FALSE(v.prefix_free);
  CHECK(v.kraft.value() == 1.125);
  CHECK_FALSE(v.kraft.at_most_one());

  CHECK_FALSE(validate_code({{"01", "01"}}).prefix_free);
  CHECK_THROWS_AS(validate_code({{}}), Error);
  CHECK_THROWS_AS(validate_code({{"0", ""}}), Error);
  CHECK_THROWS_AS(validate_code({{"0", "12"}}), Error);
}

TEST_CASE("build_code examples") {
  const DiscreteDistribution p(Alphabet(3), {0.5, 0.25, 0.25});
  const auto opt = build_code(p, CodeMethod::optimal);
  CHECK(expected_length(opt, p) == 1.5);
  CHECK(expected_length(opt, p) == h2(p));
  CHECK(oracle::optimal_expected_length({0.5, 0.25, 0.25}) == 1.5);

  const auto sh = build_code(DiscreteDistribution::bernoulli(0.1), CodeMethod::shannon);
  CHECK(sh.length(0) == 1);
  CHECK(sh.length(1) == 4);
  CHECK(expected_length(sh, DiscreteDistribution::bernoulli(0.1)) == doctest::Approx(1.3));

  for (std::size_t n = 1; n <= 4; ++n) {
    const auto flat = DiscreteDistribution::flat(std::size_t{1} << n);
    for (auto method : {CodeMethod::shannon, CodeMethod::optimal}) {
      const auto code = build_code(flat, method);
      for (Symbol a = 0; a < flat.size(); ++a) CHECK(code.length(a) == n);
      CHECK(expected_length(code, flat) == static_cast<double>(n));
    }
  }
  CHECK_THROWS_AS(build_code(DiscreteDistribution::point_mass(2, 0), CodeMethod::optimal), Error);
}

TEST_CASE("canonical codes") {
  const auto c = canonical_code({2, 1, 3, 3});
  CHECK(c.codewords == std::vector<std::string>{"10", "0", "110", "111"});
  CHECK_THROWS_AS(canonical_code({1, 1, 1}), Error);
}

TEST_CASE("coding sandwich and Kraft on random distributions") {
  RngStream rng(99, 0);
  for (int i = 0; i < 300; ++i) {
    const std::size_t q = 2 + rng.below(7);
    const auto p = random_positive(q, rng);
    const auto opt = build_code(p, CodeMethod::optimal);
    const auto sh = build_code(p, CodeMethod::shannon);
    const double lo = expected_length(opt, p), ls = expected_length(sh, p), h = h2(p);
    CHECK(h <= lo + 1e-12);
    CHECK(lo <= ls + 1e-12);
    CHECK(ls <= h + 1.0 + 1e-12);
    CHECK(validate_code(opt).prefix_free);
    CHECK(validate_code(sh).prefix_free);
    CHECK(validate_code(opt).kraft.equals_one());
    CHECK(validate_code(sh).kraft.at_most_one());
    if (q <= 4) {
      std::vector<double> w(p.weights().begin(), p.weights().end());
      CHECK(lo == doctest::Approx(oracle::optimal_expected_length(w)).epsilon(1e-12));
    }
  }
}

TEST_CASE("per-symbol length of concatenated codes") {
  const DiscreteDistribution p(Alphabet(3), {0.5, 0.25, 0.25});
  const auto opt = build_code(p, CodeMethod::optimal);
  for (std::size_t n : {1u, 2u, 7u, 30u}) CHECK(per_symbol_length(opt, p, n) == doctest::Approx(1.5).epsilon(1e-12));
  const auto flat = DiscreteDistribution::flat(8);
  CHECK(per_symbol_length(build_code(flat, CodeMethod::shannon), flat, 5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(per_symbol_length(opt, p, 0), Error);
}

TEST_CASE("encode/decode round trip") {
  RngStream rng(4, 4);
  const auto p = random_positive(5, rng);
  const auto code = build_code(p, CodeMethod::optimal);
  const auto s = sample_string(p, 10000, rng);
  const auto bits = encode(code, s);
  CHECK(decode(code, p.alphabet(), bits) == s);
  CHECK_THROWS_AS(decode(code, p.alphabet(), bits + "1"), Error);

  std::ostringstream table;
  write_code_table(table, code, p);
  CHECK(table.str().rfind("symbol,probability,codeword,length\n", 0) == 0);
}

TEST_CASE("typical set") {
  const auto f = DiscreteDistribution::flat(2);
  const auto t = typical_set(f, 12, 0.01);
  CHECK(t.probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*t.cardinality == 4096);

  const auto p = DiscreteDistribution::bernoulli(0.1);
  const auto t20 = typical_set(p, 20, 0.1);
  const auto t10 = typical_set(p, 10, 0.1);
  // The window admits one count class at both lengths: k = 1 of 10 and
  // k = 2 of 20. The mass rises only once N spans several classes.
  CHECK(t10.probability == doctest::Approx(10 * 0.1 * std::pow(0.9, 9)).epsilon(1e-12));
  CHECK(t20.probability == doctest::Approx(190 * 0.01 * std::pow(0.9, 18)).epsilon(1e-12));
  RngStream mc_rng(1, 1);
  const auto t200 = typical_set(p, 200, 0.1, TypicalSetMode::monte_carlo, &mc_rng, 20000);
  CHECK(t200.probability - t200.ci_half_width > t20.probability);

  // 2^20 enumeration oracle.
  const double h = h2(p);
  double mass = 0.0;
  std::size_t count = 0;
  for (std::uint32_t s = 0; s < (1u << 20); ++s) {
    const int ones = __builtin_popcount(s);
    const double log2p = ones * std::log2(0.1) + (20 - ones) * std::log2(0.9);
    if (log2p >= -20 * (h + 0.1) && log2p <= -20 * (h - 0.1)) {
      mass += std::exp2(log2p);
      ++count;
    }
  }
  CHECK(t20.probability == doctest::Approx(mass).epsilon(1e-12));
  CHECK(*t20.cardinality == count);
  CHECK(t20.contains(p, SymbolString(Alphabet(2), std::vector<Symbol>(20, 0))) ==
        (-20 * std::log2(0.9) >= 20 * (h - 0.1)));

  CHECK(typical_set(p, 15, 1e9).probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(typical_set(p, 31, 0.1), Error);

  RngStream rng(8, 0);
  const auto mc = typical_set(p, 200, 0.1, TypicalSetMode::monte_carlo, &rng, 20000);
  CHECK_FALSE(mc.exact);
  CHECK(mc.ci_half_width > 0.0);
  CHECK(mc.probability > 0.5);
}
