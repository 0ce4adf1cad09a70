#pragma once

// Entropy functionals, type-class counting and large-deviation rate functions
// on a finite alphabet.
//
// Sign conventions: the rate I(mu|p) is non-negative and convex and is to be
// minimized; the Boltzmann entropy s_B(mu|p) = -I(mu|p) is non-positive and
// concave and is to be maximized. Every function takes an explicit log base.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "typlab/core.hpp"

namespace typlab::ldp {

using BigInt = boost::multiprecision::cpp_int;

/// -sum mu(a) log mu(a), with 0 log 0 = 0.
double shannon_entropy(const DiscreteDistribution& mu, LogBase base);

/// sum mu(a) log(mu(a)/p(a)); +infinity unless mu << p. Throws
/// AlphabetMismatch when the alphabets differ in size.
double kl_divergence(const DiscreteDistribution& mu, const DiscreteDistribution& p, LogBase base);

/// Symbol counts mu' of a type class, sum mu'(a) = N.
class TypeVector {
 public:
  explicit TypeVector(std::vector<std::size_t> counts);
  static TypeVector of(const SymbolString& s);
  /// Type in Prob_N(A) closest to mu (largest-remainder rounding).
  static TypeVector nearest(const DiscreteDistribution& mu, std::size_t n);

  std::size_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::span<const std::size_t> counts() const noexcept { return counts_; }
  DiscreteDistribution measure() const;

 private:
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

/// Largest N for which the multinomial is computed with exact big integers.
inline constexpr std::size_t kExactMultinomialLimit = 2000;

BigInt multinomial(std::span<const std::size_t> counts);
/// Natural log of a positive big integer, accurate to double precision.
double log_big(const BigInt& x);
/// ln(N! / prod k_a!) via lgamma.
double log_multinomial_lgamma(std::span<const std::size_t> counts);

struct BoltzmannCount {
  std::optional<BigInt> multiplicity;  // exact N(mu) when N <= kExactMultinomialLimit
  double log_multiplicity = 0.0;       // log N(mu) in the requested base
  double log_probability = 0.0;        // log W^N_p(mu)
  double finite_rate = 0.0;            // (1/N) log W^N_p(mu)
  double limit_rate = 0.0;             // s_B(mu|p) = -I(mu|p)
};

/// Type-class multiplicity and probability. When mu is not absolutely
/// continuous w.r.t. p, log W and the limit rate are -infinity.
BoltzmannCount boltzmann_counting(const TypeVector& type, const DiscreteDistribution& p,
                                  LogBase base = LogBase::e);

/// All measures on q symbols whose weights are multiples of `step`
/// (step = 1/K, K a positive integer), in lexicographic order of counts.
std::vector<DiscreteDistribution> simplex_grid(std::size_t q, double step = 1e-3);

struct SanovResult {
  double rate;                  // I(Gamma|p) = min over the grid
  std::size_t argmin;           // first grid index attaining it
  DiscreteDistribution measure;
};

/// inf over a finite measure grid of I(mu|p). The grid is an inner
/// approximation of the set; no tightness is claimed. Throws EmptyInput.
SanovResult sanov_rate(std::span<const DiscreteDistribution> gamma, const DiscreteDistribution& p,
                       LogBase base = LogBase::e);

/// Free energy f(beta|p) = ln sum_a p(a) exp(-beta E(a)); f(0|p) = 0.
double free_energy(double beta, const DiscreteDistribution& p, std::span<const double> energies);

/// Gibbs measure mu_beta(a) proportional to p(a) exp(-beta E(a)).
DiscreteDistribution gibbs_measure(double beta, const DiscreteDistribution& p,
                                   std::span<const double> energies);

struct CramerResult {
  double u = 0.0;
  double entropy = 0.0;       // s_C(u|p) from the constrained maximization (nats)
  double dual_entropy = 0.0;  // inf_beta { beta u + f(beta|p) } (nats)
  double duality_gap = 0.0;
  double beta = 0.0;          // multiplier of the primal witness
  double dual_beta = 0.0;     // minimizer found by the dual search
  bool boundary = false;      // u on the hull boundary (point-mass limit)
  std::vector<double> witness;
};

/// Energy-constrained entropy s_C(u|p), computed twice: the primal maximizes
/// s_B(mu|p) subject to sum mu(a) E(a) = u by solving for the Gibbs
/// multiplier that meets the constraint; the dual minimizes the concave
/// conjugate by golden-section search over beta. Throws OutOfRange when u
/// lies outside [min E, max E].
CramerResult cramer_profile(double u, const DiscreteDistribution& p, std::span<const double> energies);

/// Tabulated rate function (Sanov grid or Cramer u-grid).
struct RateProfile {
  struct Point {
    double coordinate;  // u, or the grid index for measure grids
    double rate;        // I >= 0
    std::vector<double> witness;
  };
  std::vector<Point> points;

  void write_csv(std::ostream& out) const;
};

RateProfile cramer_rate_profile(const DiscreteDistribution& p, std::span<const double> energies,
                                std::span<const double> us);
RateProfile sanov_rate_profile(std::span<const DiscreteDistribution> grid, const DiscreteDistribution& p);

struct HoeffdingResult {
  double statistic;  // I(L_N(s)|mu0) in nats
  bool accept;       // statistic < eta
};

HoeffdingResult hoeffding_test(const SymbolString& s, const DiscreteDistribution& mu0, double eta);

}  // namespace typlab::ldp
