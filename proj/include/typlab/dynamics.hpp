#pragma once

// Coarse-grained measure-preserving systems: block entropies, entropy-rate
// estimates, per-orbit information and complexity rates, Birkhoff averages
// and return times.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "typlab/core.hpp"
#include "typlab/lz78.hpp"

namespace typlab::dynamics {

template <class S>
concept SymbolicSystem = requires(const S& sys, const typename S::state_type& x, RngStream& rng) {
  { sys.name() } -> std::convertible_to<std::string>;
  { sys.alphabet_size() } -> std::convertible_to<std::size_t>;
  { sys.step(x) } -> std::same_as<typename S::state_type>;
  { sys.cell(x) } -> std::convertible_to<Symbol>;
  { sys.sample(rng) } -> std::same_as<typename S::state_type>;
};

/// Exact cylinder masses P(X_w), w = (w_0, ..., w_{N-1}).
template <class S>
concept CylinderOracle = SymbolicSystem<S> && requires(const S& sys, std::span<const Symbol> w,
                                                       std::size_t n) {
  { sys.cylinder_log2_mass(w) } -> std::convertible_to<double>;
  /// Masses of the nonempty cells of the N-fold refinement, in any order.
  { sys.block_masses(n) } -> std::same_as<std::vector<double>>;
};

/// Largest number of cells enumerated by an exact oracle.
inline constexpr double kMaxExactCells = 16777216.0;  // 2^24

// ---------------------------------------------------------------------------
// Built-in systems

/// Unilateral shift on A^omega with the product measure P^omega.
class BernoulliShift {
 public:
  struct state_type {
    std::shared_ptr<const SymbolStream> source;
    std::uint64_t offset = 0;
  };

  explicit BernoulliShift(DiscreteDistribution p) : p_(std::move(p)) {}

  /// The point s in A^omega given by a stream, at its origin.
  static state_type point(SymbolStream stream) {
    return {std::make_shared<const SymbolStream>(std::move(stream)), 0};
  }

  std::string name() const { return "BERNOULLI_SHIFT"; }
  std::size_t alphabet_size() const { return p_.size(); }
  const DiscreteDistribution& measure() const noexcept { return p_; }
  state_type step(const state_type& x) const { return {x.source, x.offset + 1}; }
  Symbol cell(const state_type& x) const { return x.source->at(x.offset); }
  state_type sample(RngStream& rng) const;

  double cylinder_log2_mass(std::span<const Symbol> w) const;
  std::vector<double> block_masses(std::size_t n) const;

 private:
  DiscreteDistribution p_;
};

/// x -> 2x mod 1 on [0,1) with Lebesgue measure and cells [0,1/2), [1/2,1).
/// States are exact: a rational num/den, or a binary expansion read from a
/// bit stream, so orbits never lose precision.
class DoublingMap {
 public:
  struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
  };
  struct Expansion {
    std::shared_ptr<const SymbolStream> bits;
    std::uint64_t offset = 0;
  };
  using state_type = std::variant<Rational, Expansion>;

  /// num/den in [0,1); throws OutOfRange otherwise.
  static state_type rational(std::uint64_t num, std::uint64_t den);
  static state_type expansion(SymbolStream bits) {
    return Expansion{std::make_shared<const SymbolStream>(std::move(bits)), 0};
  }

  std::string name() const { return "DOUBLING_MAP"; }
  std::size_t alphabet_size() const { return 2; }
  state_type step(const state_type& x) const;
  Symbol cell(const state_type& x) const;
  /// Uniform point: an expansion with fair i.i.d. bits.
  state_type sample(RngStream& rng) const;

  double cylinder_log2_mass(std::span<const Symbol> w) const;
  std::vector<double> block_masses(std::size_t n) const;
};

/// Baker's map (x, y) -> (2x mod 1, (y + floor(2x))/2) on [0,1)^2 with cells
/// {x < 1/2}, {x >= 1/2}. A point is its bilateral binary code
/// x = 0.b_0 b_1 ..., y = 0.b_{-1} b_{-2} ...; T shifts the code.
class BakersMap {
 public:
  struct state_type {
    std::shared_ptr<const SymbolStream> forward;   // b_0, b_1, ...
    std::shared_ptr<const SymbolStream> backward;  // b_{-1}, b_{-2}, ...
    std::int64_t position = 0;
  };

  /// The point with the first 53 binary digits of x and y (zeros beyond).
  static state_type point(double x, double y);

  std::string name() const { return "BAKERS_MAP"; }
  std::size_t alphabet_size() const { return 2; }
  state_type step(const state_type& s) const { return {s.forward, s.backward, s.position + 1}; }
  state_type inverse_step(const state_type& s) const { return {s.forward, s.backward, s.position - 1}; }
  Symbol cell(const state_type& s) const { return bit(s, s.position); }
  state_type sample(RngStream& rng) const;

  /// Coordinates from the first `digits` code symbols on each side.
  std::pair<double, double> coordinates(const state_type& s, std::size_t digits = 53) const;

  double cylinder_log2_mass(std::span<const Symbol> w) const;
  std::vector<double> block_masses(std::size_t n) const;

 private:
  static Symbol bit(const state_type& s, std::int64_t index);
};

/// Point reconstructed from N forward cells (of x, Tx, ...) and N backward
/// cells (of T^-1 x, T^-2 x, ...); within 2^-N of the point per coordinate.
std::pair<double, double> baker_reconstruct(std::span<const Symbol> forward,
                                            std::span<const Symbol> backward);

/// x -> x + alpha mod 1 with cells [0,1/2), [1/2,1). Zero entropy.
class Rotation {
 public:
  using state_type = double;

  explicit Rotation(double alpha);

  std::string name() const { return "ROTATION"; }
  std::size_t alphabet_size() const { return 2; }
  double alpha() const noexcept { return alpha_; }
  state_type step(state_type x) const {
    x += alpha_;
    return x >= 1.0 ? x - 1.0 : x;
  }
  Symbol cell(state_type x) const { return x < 0.5 ? 0 : 1; }
  state_type sample(RngStream& rng) const { return rng.uniform(); }

  /// Lebesgue measure of the cylinder, from the arcs cut by the 2N points
  /// {-n alpha, 1/2 - n alpha}.
  double cylinder_log2_mass(std::span<const Symbol> w) const;
  std::vector<double> block_masses(std::size_t n) const;

 private:
  /// (code, arc length) for every arc of the N-fold refinement.
  std::vector<std::pair<std::vector<Symbol>, double>> arcs(std::size_t n) const;

  double alpha_;
};

static_assert(CylinderOracle<BernoulliShift>);
static_assert(CylinderOracle<DoublingMap>);
static_assert(CylinderOracle<BakersMap>);
static_assert(CylinderOracle<Rotation>);

// ---------------------------------------------------------------------------
// Operations

/// xi_N(x)_n = cell of T^n x, n = 0..N-1.
template <SymbolicSystem S>
SymbolString coarse_grain(const S& sys, typename S::state_type x, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "N must be positive");
  std::vector<Symbol> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(sys.cell(x));
    if (i + 1 < n) x = sys.step(x);
  }
  return SymbolString(Alphabet(sys.alphabet_size()), std::move(out));
}

/// -sum m log2 m over the given masses (zero masses skipped).
double entropy_of_masses(std::span<const double> masses);

struct BlockEntropy {
  std::size_t n = 0;
  double bits = 0.0;
  bool exact = true;
  std::size_t samples = 0;
  std::size_t cells = 0;  // nonempty cells (exact) or distinct observed words
  std::string note;
};

struct ExactMode {};
struct MonteCarloMode {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};
using EntropyMode = std::variant<ExactMode, MonteCarloMode>;

/// Plug-in estimate of H(pi^N) from sampled orbits; biased low.
template <SymbolicSystem S>
BlockEntropy monte_carlo_block_entropy(const S& sys, std::size_t n, const MonteCarloMode& mode) {
  if (mode.samples == 0) throw Error(ErrorCode::invalid_argument, "need at least one sample");
  RngStream rng(mode.seed, mode.stream);
  std::map<std::vector<Symbol>, std::size_t> counts;
  for (std::size_t i = 0; i < mode.samples; ++i) {
    const auto s = coarse_grain(sys, sys.sample(rng), n);
    ++counts[std::vector<Symbol>(s.symbols().begin(), s.symbols().end())];
  }
  std::vector<double> masses;
  masses.reserve(counts.size());
  for (const auto& [word, c] : counts)
    masses.push_back(static_cast<double>(c) / static_cast<double>(mode.samples));
  return {n, entropy_of_masses(masses), false, mode.samples, counts.size(),
          "plug-in estimator, uncorrected; biased low when cells are undersampled"};
}

template <SymbolicSystem S>
BlockEntropy block_entropy(const S& sys, std::size_t n, const EntropyMode& mode = ExactMode{}) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "N must be positive");
  if (const auto* mc = std::get_if<MonteCarloMode>(&mode)) return monte_carlo_block_entropy(sys, n, *mc);
  if constexpr (CylinderOracle<S>) {
    const auto masses = sys.block_masses(n);
    return {n, entropy_of_masses(masses), true, 0, masses.size(), "exact cylinder oracle"};
  } else {
    throw Error(ErrorCode::oracle_unavailable, sys.name() + " has no exact cylinder oracle");
  }
}

struct EntropyRate {
  double estimate = 0.0;  // H(N_max) - H(N_max - 1)
  std::vector<BlockEntropy> curve;  // N = 1..N_max
  bool subadditive = true;          // H(M+N) <= H(M) + H(N) + 1e-9 on the curve

  double ratio(std::size_t n) const { return curve.at(n - 1).bits / static_cast<double>(n); }
};

EntropyRate finish_entropy_rate(std::vector<BlockEntropy> curve);

template <SymbolicSystem S>
EntropyRate entropy_rate(const S& sys, std::size_t n_max, const EntropyMode& mode = ExactMode{}) {
  if (n_max < 4) throw Error(ErrorCode::invalid_argument, "N_max must be at least 4");
  std::vector<BlockEntropy> curve;
  for (std::size_t n = 1; n <= n_max; ++n) curve.push_back(block_entropy(sys, n, mode));
  return finish_entropy_rate(std::move(curve));
}

/// -(1/N) log2 P(pi^N(x)); +infinity for a zero-mass cylinder.
template <CylinderOracle S>
double smb_estimate(const S& sys, const typename S::state_type& x, std::size_t n) {
  const auto word = coarse_grain(sys, x, n);
  const double log2m = sys.cylinder_log2_mass(word.symbols());
  return std::isinf(log2m) ? kInf : -log2m / static_cast<double>(n);
}

/// LZ78 rate of the coarse-grained orbit. Throws TooShort when N < 64.
template <SymbolicSystem S>
double brudno_rate(const S& sys, const typename S::state_type& x, std::size_t n) {
  if (n < 64) throw Error(ErrorCode::too_short, "Brudno rate needs N >= 64");
  return randomness::lz78_complexity(coarse_grain(sys, x, n)).rate();
}

struct BirkhoffReport {
  double average = 0.0;
  std::vector<std::pair<std::size_t, double>> curve;  // running average at n = 1, 2, 4, ..., N
  std::optional<double> target;                       // integral of f dP when known
};

template <SymbolicSystem S>
BirkhoffReport birkhoff(const S& sys, typename S::state_type x, std::size_t n,
                        const std::function<double(const typename S::state_type&)>& f,
                        std::optional<double> target = std::nullopt) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "N must be positive");
  BirkhoffReport r;
  r.target = target;
  double sum = 0.0;
  std::size_t next = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    sum += f(x);
    if (i == next || i == n) {
      r.curve.emplace_back(i, sum / static_cast<double>(i));
      if (i == next) next *= 2;
    }
    if (i < n) x = sys.step(x);
  }
  r.average = sum / static_cast<double>(n);
  return r;
}

/// Visit frequency of cell a; the target P(X_a) comes from the oracle.
template <SymbolicSystem S>
BirkhoffReport birkhoff_cell(const S& sys, const typename S::state_type& x, std::size_t n, Symbol a) {
  std::optional<double> target;
  if constexpr (CylinderOracle<S>) {
    const Symbol w[1] = {a};
    target = std::exp2(sys.cylinder_log2_mass(w));
  }
  return birkhoff(
      sys, x, n, [&](const typename S::state_type& y) { return sys.cell(y) == a ? 1.0 : 0.0; }, target);
}

/// Least n in [1, horizon] with T^n x satisfying the predicate; nullopt when
/// none is found (not an error).
template <SymbolicSystem S>
std::optional<std::size_t> first_return_time(
    const S& sys, typename S::state_type x,
    const std::function<bool(const typename S::state_type&)>& in_target, std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorCode::invalid_argument, "horizon must be positive");
  for (std::size_t i = 1; i <= horizon; ++i) {
    x = sys.step(x);
    if (in_target(x)) return i;
  }
  return std::nullopt;
}

template <SymbolicSystem S>
std::optional<std::size_t> first_return_time(const S& sys, const typename S::state_type& x,
                                             Symbol target_cell, std::size_t horizon) {
  return first_return_time(
      sys, x, [&](const typename S::state_type& y) { return sys.cell(y) == target_cell; }, horizon);
}

struct CurvePoint {
  double n = 0.0;
  double value = 0.0;
  double target = 0.0;
  double band = 0.0;
};

/// N, value, target, band
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points);

}  // namespace typlab::dynamics
