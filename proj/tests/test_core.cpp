#include <doctest.h>

#include <cmath>

#include "typlab/core.hpp"
#include "typlab/rng.hpp"

using namespace typlab;

TEST_CASE("philox known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("rng stream is a pure function of seed, stream and counter") {
  RngStream a(7, 3), b(7, 3);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto v = a.next_u64();
    CHECK(v == b.next_u64());
    CHECK(v == RngStream::value_at(7, 3, i));
  }
  RngStream skip(7, 3, 50);
  CHECK(skip.next_u64() == RngStream::value_at(7, 3, 50));
  CHECK(RngStream::value_at(7, 3, 0) != RngStream::value_at(7, 4, 0));

  RngStream r(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("alphabet invariants") {
  CHECK(Alphabet(3).size() == 3);
  CHECK_THROWS_AS(Alphabet(1), Error);
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{"a", "a"}), Error);
  CHECK(Alphabet(std::vector<std::string>{"x", "y"}).label(1) == "y");
  CHECK(Alphabet(2) == Alphabet::binary());
}

TEST_CASE("make_distribution") {
  const double w1[] = {1, 1};
  auto d = make_distribution(Alphabet(2), w1);
  CHECK(d[0] == 0.5);
  CHECK(d[1] == 0.5);
  CHECK(d.normalization() == 2.0);

  const double w2[] = {2, 1, 1};
  d = make_distribution(Alphabet(3), w2);
  CHECK(d[0] == 0.5);
  CHECK(d[1] == 0.25);
  CHECK(d[2] == 0.25);

  const double zero[] = {0, 0};
  try {
    make_distribution(Alphabet(2), zero);
    FAIL("expected InvalidDistribution");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_distribution);
  }
  const double neg[] = {1, -1};
  CHECK_THROWS_AS(make_distribution(Alphabet(2), neg), Error);
  CHECK_THROWS_AS(DiscreteDistribution(Alphabet(2), {0.5, 0.6}), Error);

  const auto flat = DiscreteDistribution::flat(5);
  for (Symbol a = 0; a < 5; ++a) CHECK(flat[a] == 0.2);
}

TEST_CASE("sample_string") {
  RngStream rng(11, 0);
  const auto point = DiscreteDistribution::point_mass(3, 2);
  CHECK(sample_string(point, 5, rng) == SymbolString(Alphabet(3), {2, 2, 2, 2, 2}));

  // 4 sigma Chernoff band: sd = 0.5/sqrt(N) = 5e-4.
  const auto fair = sample_string(DiscreteDistribution::flat(2), 1000000, rng);
  CHECK(std::abs(empirical_measure(fair)[1] - 0.5) <= 0.002);

  // sd = sqrt(0.09/1e4) = 0.003.
  const auto biased = sample_string(DiscreteDistribution::bernoulli(0.1), 10000, rng);
  CHECK(std::abs(empirical_measure(biased)[1] - 0.1) <= 0.012);

  RngStream r1(5, 9), r2(5, 9);
  CHECK(sample_string(DiscreteDistribution::flat(4), 1000, r1) ==
        sample_string(DiscreteDistribution::flat(4), 1000, r2));
}

TEST_CASE("draw_symbol never returns a zero-mass tail symbol") {
  const DiscreteDistribution d(Alphabet(3), {0.3, 0.7, 0.0});
  CHECK(draw_symbol(d, 0.9999999999999999) == 1);
}

TEST_CASE("empirical_measure") {
  CHECK(empirical_measure(bits_from_string("0101"))[1] == 0.5);
  const auto point = empirical_measure(bits_from_string("000"));
  CHECK(point[0] == 1.0);
  CHECK(point[1] == 0.0);
  const auto m = empirical_measure(bits_from_string("01101"));
  CHECK(m[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(m[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(empirical_measure(SymbolString(Alphabet(2))), Error);
}

TEST_CASE("empirical measure concentrates within the total-variation bound") {
  // ||L_N - p||_TV <= 2 sqrt(q ln(2/delta) / (2N)) with probability 1 - delta.
  const DiscreteDistribution p(Alphabet(3), {0.2, 0.3, 0.5});
  const std::size_t n = 100000;
  const double bound = 2.0 * std::sqrt(3.0 * std::log(2.0 / 1e-6) / (2.0 * n));
  for (std::uint64_t stream = 0; stream < 5; ++stream) {
    RngStream rng(2024, stream);
    const auto l = empirical_measure(sample_string(p, n, rng));
    double tv = 0.0;
    for (Symbol a = 0; a < 3; ++a) tv += std::abs(l[a] - p[a]);
    CHECK(tv / 2.0 <= bound);
  }
}

TEST_CASE("string_probability") {
  const auto f = DiscreteDistribution::flat(2);
  RngStream rng(3, 1);
  for (std::size_t n : {1u, 17u, 1000u, 12345u}) {
    const auto s = sample_string(DiscreteDistribution::bernoulli(0.3), n, rng);
    CHECK(string_probability(f, s, LogBase::two) == -static_cast<double>(n));
  }
  CHECK(string_probability(DiscreteDistribution::bernoulli(0.1), bits_from_string("1"), LogBase::e) ==
        doctest::Approx(-2.302585).epsilon(1e-6));
  CHECK(string_probability(DiscreteDistribution::point_mass(2, 0), bits_from_string("1"), LogBase::e) ==
        -kInf);
  CHECK_THROWS_AS(string_probability(DiscreteDistribution::flat(3), bits_from_string("1"), LogBase::e),
                  Error);
}

TEST_CASE("symbol stream prefixes only grow") {
  auto stream = SymbolStream::bernoulli(DiscreteDistribution::flat(2), 9, 2);
  const SymbolString short_prefix = stream.prefix(100);
  const SymbolString long_prefix = stream.prefix(1000);
  CHECK(long_prefix.prefix(100) == short_prefix);
  auto again = SymbolStream::bernoulli(DiscreteDistribution::flat(2), 9, 2);
  CHECK(again.prefix(1000) == long_prefix);
  CHECK(stream.at(500) == long_prefix[500]);
  CHECK_THROWS_AS(SymbolString(Alphabet(2), {0, 2}), Error);
}
