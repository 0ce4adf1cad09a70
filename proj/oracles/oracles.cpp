#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace typlab::oracle {

double log_factorial(std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 2; i <= n; ++i) s += std::log(static_cast<double>(i));
  return s;
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

double log_big(const BigInt& x) {
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  const std::size_t shift = bits - 900;
  BigInt top = x / (BigInt(1) << shift);
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

}  // namespace

double log_fair_binomial_upper_tail(std::size_t n, std::size_t k) {
  BigInt total = 0;
  BigInt c = binomial(n, k);
  for (std::size_t j = k; j <= n; ++j) {
    total += c;
    c = c * (n - j) / (j + 1);
  }
  return log_big(total) - static_cast<double>(n) * std::log(2.0);
}

double log_type_probability(const std::vector<std::size_t>& counts, const std::vector<double>& p) {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  double r = log_factorial(n);
  for (std::size_t a = 0; a < counts.size(); ++a) {
    r -= log_factorial(counts[a]);
    if (counts[a] > 0) {
      if (p[a] == 0.0) return -std::numeric_limits<double>::infinity();
      r += static_cast<double>(counts[a]) * std::log(p[a]);
    }
  }
  return r;
}

double kl_nats(const std::vector<double>& mu, const std::vector<double>& p) {
  double r = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (mu[a] == 0.0) continue;
    if (p[a] == 0.0) return std::numeric_limits<double>::infinity();
    r += mu[a] * std::log(mu[a] / p[a]);
  }
  return r;
}

double optimal_expected_length(const std::vector<double>& p) {
  const std::size_t q = p.size();
  const std::size_t top = std::max<std::size_t>(1, q - 1);
  std::vector<std::size_t> len(q, 1);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double kraft = 0.0, expected = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
      kraft += std::ldexp(1.0, -static_cast<int>(len[a]));
      expected += p[a] * static_cast<double>(len[a]);
    }
    if (kraft <= 1.0) best = std::min(best, expected);
    std::size_t i = 0;
    while (i < q && len[i] == top) len[i++] = 1;
    if (i == q) break;
    ++len[i];
  }
  return best;
}

double binary_cramer_entropy(double u, const std::vector<double>& p, const std::vector<double>& e) {
  // mu(1) is pinned by mu(0) e0 + mu(1) e1 = u.
  const double m1 = (u - e[0]) / (e[1] - e[0]);
  return -kl_nats({1.0 - m1, m1}, p);
}

double dual_by_scan(double u, const std::vector<double>& p, const std::vector<double>& e, double lo) {
  auto g = [&](double b) {
    // log-sum-exp for stability
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < p.size(); ++a)
      if (p[a] > 0) mx = std::max(mx, std::log(p[a]) - b * e[a]);
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a)
      if (p[a] > 0) s += std::exp(std::log(p[a]) - b * e[a] - mx);
    return b * u + mx + std::log(s);
  };
  double left = -lo, right = lo;
  double best_b = 0.0;
  for (int round = 0; round < 4; ++round) {
    const int steps = 20000;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
      const double b = left + (right - left) * i / steps;
      const double v = g(b);
      if (v < best) {
        best = v;
        best_b = b;
      }
    }
    const double w = (right - left) / steps * 2;
    left = best_b - w;
    right = best_b + w;
  }
  return g(best_b);
}

std::size_t lz78_phrases_naive(const std::vector<std::uint32_t>& s) {
  std::set<std::vector<std::uint32_t>> dict;
  std::vector<std::uint32_t> cur;
  std::size_t phrases = 0;
  for (auto a : s) {
    cur.push_back(a);
    if (!dict.count(cur)) {
      dict.insert(cur);
      ++phrases;
      cur.clear();
    }
  }
  return phrases + (cur.empty() ? 0 : 1);
}

std::vector<int> kac_step_naive(const std::vector<int>& x, const std::vector<int>& y) {
  const std::size_t n = x.size();
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[(i + 1) % n] = x[i] ^ y[i];
  return out;
}

double h2(double p) {
  double r = 0.0;
  if (p > 0) r -= p * std::log2(p);
  if (p < 1) r -= (1 - p) * std::log2(1 - p);
  return r;
}

}  // namespace typlab::oracle
