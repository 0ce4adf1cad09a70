#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's algorithms beyond its plain data types.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace typlab::oracle {

using BigInt = boost::multiprecision::cpp_int;

/// ln n! as a sum of logs.
double log_factorial(std::size_t n);

/// Exact binomial coefficient.
BigInt binomial(std::size_t n, std::size_t k);

/// ln P(Bin(N, 1/2) >= k), from exact big-integer counts.
double log_fair_binomial_upper_tail(std::size_t n, std::size_t k);

/// ln of N!/prod k_a! times prod p_a^{k_a}, via log-factorial sums.
double log_type_probability(const std::vector<std::size_t>& counts, const std::vector<double>& p);

/// sum mu ln(mu/p), with 0 ln 0 = 0; +inf unless mu << p.
double kl_nats(const std::vector<double>& mu, const std::vector<double>& p);

/// Minimum expected length over all prefix codes, by enumerating every
/// length vector with entries <= q - 1 that satisfies Kraft's inequality
/// (optimal codes never need longer words).
double optimal_expected_length(const std::vector<double>& p);

/// Binary Cramer entropy s_C(u) for energies (e0, e1), in closed form.
double binary_cramer_entropy(double u, const std::vector<double>& p, const std::vector<double>& e);

/// inf over beta of (beta u + ln sum p e^{-beta E}) by a dense scan on
/// [-lo, lo] refined three times.
double dual_by_scan(double u, const std::vector<double>& p, const std::vector<double>& e, double lo = 60.0);

/// Naive LZ78 phrase count using a set of phrases.
std::size_t lz78_phrases_naive(const std::vector<std::uint32_t>& s);

/// One Kac ring step on plain int arrays: x'_{n+1} = x_n ^ y_n.
std::vector<int> kac_step_naive(const std::vector<int>& x, const std::vector<int>& y);

/// Binary entropy in bits.
double h2(double p);

}  // namespace typlab::oracle
