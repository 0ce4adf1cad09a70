#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "typlab/brownian.hpp"

using namespace typlab;
using namespace typlab::brownian;

TEST_CASE("random walk paths") {
  const SignString s{1, 1, -1, 1};
  const auto p = random_walk_path(s);
  const std::vector<double> expected{0, 0.5, 1.0, 0.5, 1.0};
  CHECK(std::equal(p.values().begin(), p.values().end(), expected.begin(), expected.end()));
  CHECK(p.at(0.125) == 0.25);

  const auto up = random_walk_path(SignString(100, 1));
  CHECK(up[100] == doctest::Approx(10.0));

  SignString alt(100);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1 : 1;
  const auto a = random_walk_path(alt);
  double sup = 0.0;
  for (double v : a.values()) sup = std::max(sup, std::abs(v));
  CHECK(sup == doctest::Approx(0.1));

  CHECK_THROWS_AS(random_walk_path(SignString{}), Error);
  CHECK_THROWS_AS(random_walk_path(SignString{1, 0}), Error);
  CHECK_THROWS_AS(PiecewiseLinearPath({0.1, 0.2}), Error);
}

TEST_CASE("scaling: quadrupling N halves the increments") {
  RngStream rng(1, 0);
  const auto s = sample_signs(64, rng);
  SignString padded = s;
  padded.resize(256, 1);
  const auto p = random_walk_path(s), q = random_walk_path(padded);
  for (std::size_t k = 0; k <= 64; ++k) CHECK(q[k] == doctest::Approx(p[k] / 2.0).epsilon(1e-14));
}

TEST_CASE("endpoint statistics") {
  const std::size_t trials = 4000, n = 2500;
  double sum = 0, sum2 = 0, cov = 0, mid2 = 0, rest2 = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng(2, t);
    const auto p = sample_path(n, rng);
    CHECK(p[0] == 0.0);
    const double end = p[n], mid = p[n / 2];
    sum += end;
    sum2 += end * end;
    cov += mid * (end - mid);
    mid2 += mid * mid;
    rest2 += (end - mid) * (end - mid);
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  CHECK(std::abs(var - 1.0) <= 4.0 * std::sqrt(2.0 / trials));
  // Increment independence and sign-flip symmetry of the endpoint law.
  CHECK(std::abs(cov / std::sqrt(mid2 * rest2)) <= 4.0 / std::sqrt(static_cast<double>(trials)));
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("crossing signs invert the walk") {
  RngStream rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(1000);
    const auto s = sample_signs(n, rng);
    const auto c = crossing_signs(random_walk_path(s), n);
    CHECK_FALSE(c.exhausted);
    if (c.signs != s) FAIL("round trip fails at N=" << n);
    CHECK(c.times.back() == doctest::Approx(1.0));
  }
  const auto flat = PiecewiseLinearPath(std::vector<double>(11, 0.0));
  const auto none = crossing_signs(flat, 5);
  CHECK(none.signs.empty());
  CHECK(none.exhausted);
}

TEST_CASE("crossings inside segments use linear interpolation") {
  // One step from 0 to 1 on a 1-step grid; M = 4 gives level 1/2 at t = 1/2.
  const PiecewiseLinearPath p({0.0, 1.0});
  const auto c = crossing_signs(p, 4);
  REQUIRE(c.signs.size() == 2);
  CHECK(c.times[0] == doctest::Approx(0.5));
  CHECK(c.times[1] == doctest::Approx(1.0));
  CHECK(c.exhausted);
}

TEST_CASE("donsker distance") {
  RngStream rng(4, 0);
  const auto s = sample_signs(4096, rng);
  const auto p = random_walk_path(s);
  CHECK(donsker_distance(p, 4096).distance == doctest::Approx(0.0).epsilon(1e-12));
  const auto zero = donsker_distance(PiecewiseLinearPath(std::vector<double>(101, 0.0)), 10);
  CHECK(zero.exhausted);
  CHECK(zero.distance == 0.0);
  const auto coarse = donsker_distance(sample_path(100000, rng), 100);
  CHECK(coarse.distance > 0.0);
}

TEST_CASE("regularity statistics") {
  RngStream rng(5, 0);
  const auto p = sample_path(1 << 16, rng);
  const std::vector<double> hs{1e-2, 1e-3};
  const auto st = regularity_stats(p, hs, 0.4);
  REQUIRE(st.modulus.size() == 2);
  CHECK(st.modulus[0].ratio > 0.3);
  CHECK(st.modulus[0].ratio < 2.0);
  CHECK(st.holder_constant > 0.0);
  REQUIRE(st.divided.size() == 2);
  CHECK(st.divided[1].value > st.divided[0].value);

  // Smooth contrast: B(t) = t.
  std::vector<double> line(1001);
  for (std::size_t k = 0; k <= 1000; ++k) line[k] = k / 1000.0;
  const PiecewiseLinearPath lin(line);
  const double r2 = modulus_ratio(lin, 1e-2).ratio, r3 = modulus_ratio(lin, 1e-3).ratio;
  CHECK(r2 == doctest::Approx(1e-2 / std::sqrt(2e-2 * std::log(100.0))).epsilon(1e-9));
  CHECK(r3 < r2);

  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(regularity_stats(p, bad, 0.4), Error);
  CHECK_THROWS_AS(holder_constant(p, 1.0), Error);
}

TEST_CASE("modulus violations thin out as h decreases") {
  RngStream rng(6, 0);
  const auto p = sample_path(1000000, rng);
  const double f2 = modulus_ratio(p, 1e-2).violation_fraction;
  const double f3 = modulus_ratio(p, 1e-3).violation_fraction;
  const double f4 = modulus_ratio(p, 1e-4).violation_fraction;
  CHECK(f3 <= f2);
  CHECK(f4 <= f3);
}

TEST_CASE("csv dumps") {
  std::ostringstream out;
  write_path_csv(out, random_walk_path(SignString{1, -1}));
  CHECK(out.str() == "t,value\n0,0\n0.5,0.7071067811865475\n1,0\n");
}
