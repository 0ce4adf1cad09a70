#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "typlab/error.hpp"
#include "typlab/rng.hpp"

namespace typlab {

/// Dense symbol index in 0..q-1.
using Symbol = std::uint32_t;

enum class LogBase { two, e };

inline double log_in(LogBase base, double x) {
  return base == LogBase::two ? std::log2(x) : std::log(x);
}

/// log(2) expressed in the given base (1 bit, or ln 2 nats).
inline double log2_unit(LogBase base) { return base == LogBase::two ? 1.0 : std::log(2.0); }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Finite alphabet with q >= 2 symbols. Labels are cosmetic; symbols are
/// numbered 0..q-1 in label order.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size);
  explicit Alphabet(std::vector<std::string> labels);

  static Alphabet binary() { return Alphabet(2); }

  std::size_t size() const noexcept { return labels_->size(); }
  const std::string& label(Symbol a) const { return labels_->at(a); }
  const std::vector<std::string>& labels() const noexcept { return *labels_; }

  bool operator==(const Alphabet& other) const {
    return labels_ == other.labels_ || *labels_ == *other.labels_;
  }

 private:
  // Shared so that distributions over the same alphabet copy cheaply.
  std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Probability vector on a finite alphabet.
class DiscreteDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Validates weights that must already sum to one.
  DiscreteDistribution(Alphabet alphabet, std::vector<double> weights);

  static DiscreteDistribution flat(std::size_t q);
  static DiscreteDistribution point_mass(std::size_t q, Symbol a);
  /// Two-symbol distribution (1 - p1, p1).
  static DiscreteDistribution bernoulli(double p1);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](Symbol a) const { return weights_[a]; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Sum of the raw weights this distribution was normalized from (1 when
  /// constructed from normalized weights).
  double normalization() const noexcept { return normalization_; }

  bool strictly_positive() const;

  bool operator==(const DiscreteDistribution& other) const {
    return alphabet_ == other.alphabet_ && weights_ == other.weights_;
  }

 private:
  friend DiscreteDistribution make_distribution(const Alphabet&, std::span<const double>);
  DiscreteDistribution(Alphabet alphabet, std::vector<double> weights, double normalization);

  Alphabet alphabet_;
  std::vector<double> weights_;
  double normalization_ = 1.0;
};

/// Normalizes non-negative raw weights. Throws InvalidDistribution on a
/// negative or non-finite weight, or when every weight is zero.
DiscreteDistribution make_distribution(const Alphabet& alphabet, std::span<const double> raw_weights);

/// Finite string over an alphabet.
class SymbolString {
 public:
  explicit SymbolString(Alphabet alphabet, std::vector<Symbol> symbols = {});

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  SymbolString prefix(std::size_t n) const;

  void push_back(Symbol a);

  bool operator==(const SymbolString& other) const = default;

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

/// Binary string from a '0'/'1' literal, for tests and fixtures.
SymbolString bits_from_string(std::string_view bits);

/// Prefix-extendable infinite sequence. The generator maps a position to a
/// symbol; materialized prefixes only ever grow, so prefix(N) is always a
/// prefix of prefix(M) for N <= M.
class SymbolStream {
 public:
  using Generator = std::function<Symbol(std::uint64_t)>;

  SymbolStream(Alphabet alphabet, Generator generator);

  /// i.i.d. draws from dist, symbol n determined by (seed, stream_id, n).
  static SymbolStream bernoulli(const DiscreteDistribution& dist, std::uint64_t seed,
                                std::uint64_t stream_id);
  static SymbolStream constant(const Alphabet& alphabet, Symbol a);

  const Alphabet& alphabet() const noexcept { return materialized_.alphabet(); }
  Symbol at(std::uint64_t n) const { return generator_(n); }
  const SymbolString& prefix(std::size_t n);
  const SymbolString& materialized() const noexcept { return materialized_; }

 private:
  Generator generator_;
  SymbolString materialized_;
};

/// Inverse-CDF draw of one symbol from a uniform variate in [0, 1).
Symbol draw_symbol(const DiscreteDistribution& dist, double u);

/// N i.i.d. draws from dist.
SymbolString sample_string(const DiscreteDistribution& dist, std::size_t n, RngStream& rng);

/// Symbol frequencies k_a / N. Throws EmptyInput on an empty string.
DiscreteDistribution empirical_measure(const SymbolString& s);
std::vector<std::size_t> symbol_counts(const SymbolString& s);

/// log P^N(s) = sum_n log p(s_n); -infinity on a zero-probability symbol.
double string_probability(const DiscreteDistribution& dist, const SymbolString& s, LogBase base);

}  // namespace typlab
