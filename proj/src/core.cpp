#include "typlab/core.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace typlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_distribution: return "InvalidDistribution";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::alphabet_mismatch: return "AlphabetMismatch";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::invalid_code: return "InvalidCode";
    case ErrorCode::zero_probability_symbol: return "ZeroProbabilitySymbol";
    case ErrorCode::too_large_for_exact: return "TooLargeForExact";
    case ErrorCode::too_short: return "TooShort";
    case ErrorCode::oracle_unavailable: return "OracleUnavailable";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::vector<std::string> default_labels(std::size_t size) {
  std::vector<std::string> labels(size);
  for (std::size_t i = 0; i < size; ++i) labels[i] = std::to_string(i);
  return labels;
}

}  // namespace

Alphabet::Alphabet(std::size_t size) : Alphabet(default_labels(size)) {}

Alphabet::Alphabet(std::vector<std::string> labels)
    : labels_(std::make_shared<const std::vector<std::string>>(std::move(labels))) {
  if (labels_->size() < 2)
    throw Error(ErrorCode::invalid_argument, "alphabet needs at least two symbols");
  std::set<std::string> unique(labels_->begin(), labels_->end());
  if (unique.size() != labels_->size())
    throw Error(ErrorCode::invalid_argument, "alphabet labels must be distinct");
}

DiscreteDistribution::DiscreteDistribution(Alphabet alphabet, std::vector<double> weights)
    : DiscreteDistribution(std::move(alphabet), std::move(weights), 1.0) {}

DiscreteDistribution::DiscreteDistribution(Alphabet alphabet, std::vector<double> weights,
                                           double normalization)
    : alphabet_(std::move(alphabet)), weights_(std::move(weights)), normalization_(normalization) {
  if (weights_.size() != alphabet_.size())
    throw Error(ErrorCode::invalid_distribution, "weight count differs from alphabet size");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0))
      throw Error(ErrorCode::invalid_distribution, "weight outside [0,1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw Error(ErrorCode::invalid_distribution, "weights do not sum to one");
}

DiscreteDistribution DiscreteDistribution::flat(std::size_t q) {
  return DiscreteDistribution(Alphabet(q), std::vector<double>(q, 1.0 / static_cast<double>(q)));
}

DiscreteDistribution DiscreteDistribution::point_mass(std::size_t q, Symbol a) {
  std::vector<double> w(q, 0.0);
  w.at(a) = 1.0;
  return DiscreteDistribution(Alphabet(q), std::move(w));
}

DiscreteDistribution DiscreteDistribution::bernoulli(double p1) {
  return DiscreteDistribution(Alphabet(2), {1.0 - p1, p1});
}

bool DiscreteDistribution::strictly_positive() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; });
}

DiscreteDistribution make_distribution(const Alphabet& alphabet, std::span<const double> raw) {
  if (raw.size() != alphabet.size())
    throw Error(ErrorCode::invalid_distribution, "weight count differs from alphabet size");
  double total = 0.0;
  for (double w : raw) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::invalid_distribution, "negative or non-finite weight");
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorCode::invalid_distribution, "all weights are zero");
  std::vector<double> w(raw.begin(), raw.end());
  for (double& x : w) x /= total;
  return DiscreteDistribution(alphabet, std::move(w), total);
}

SymbolString::SymbolString(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
  for (Symbol a : symbols_)
    if (a >= alphabet_.size()) throw Error(ErrorCode::out_of_range, "symbol index exceeds alphabet");
}

SymbolString SymbolString::prefix(std::size_t n) const {
  n = std::min(n, symbols_.size());
  return SymbolString(alphabet_, std::vector<Symbol>(symbols_.begin(), symbols_.begin() + n));
}

void SymbolString::push_back(Symbol a) {
  if (a >= alphabet_.size()) throw Error(ErrorCode::out_of_range, "symbol index exceeds alphabet");
  symbols_.push_back(a);
}

SymbolString bits_from_string(std::string_view bits) {
  std::vector<Symbol> s;
  s.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorCode::invalid_argument, "expected a 0/1 string");
    s.push_back(c == '1' ? 1u : 0u);
  }
  return SymbolString(Alphabet::binary(), std::move(s));
}

SymbolStream::SymbolStream(Alphabet alphabet, Generator generator)
    : generator_(std::move(generator)), materialized_(std::move(alphabet)) {}

SymbolStream SymbolStream::bernoulli(const DiscreteDistribution& dist, std::uint64_t seed,
                                     std::uint64_t stream_id) {
  return SymbolStream(dist.alphabet(), [dist, seed, stream_id](std::uint64_t n) {
    return draw_symbol(dist, to_unit_interval(RngStream::value_at(seed, stream_id, n)));
  });
}

SymbolStream SymbolStream::constant(const Alphabet& alphabet, Symbol a) {
  return SymbolStream(alphabet, [a](std::uint64_t) { return a; });
}

const SymbolString& SymbolStream::prefix(std::size_t n) {
  for (std::size_t i = materialized_.size(); i < n; ++i) materialized_.push_back(generator_(i));
  return materialized_;
}

Symbol draw_symbol(const DiscreteDistribution& dist, double u) {
  double cumulative = 0.0;
  const std::size_t q = dist.size();
  for (Symbol a = 0; a + 1 < q; ++a) {
    cumulative += dist[a];
    if (u < cumulative) return a;
  }
  // Rounding in the cumulative sum must never select a zero-mass tail symbol.
  Symbol last = static_cast<Symbol>(q - 1);
  while (last > 0 && dist[last] == 0.0) --last;
  return last;
}

SymbolString sample_string(const DiscreteDistribution& dist, std::size_t n, RngStream& rng) {
  std::vector<Symbol> s(n);
  for (auto& a : s) a = draw_symbol(dist, rng.uniform());
  return SymbolString(dist.alphabet(), std::move(s));
}

std::vector<std::size_t> symbol_counts(const SymbolString& s) {
  std::vector<std::size_t> counts(s.alphabet().size(), 0);
  for (Symbol a : s.symbols()) ++counts[a];
  return counts;
}

DiscreteDistribution empirical_measure(const SymbolString& s) {
  if (s.empty()) throw Error(ErrorCode::empty_input, "empirical measure of an empty string");
  const auto counts = symbol_counts(s);
  std::vector<double> w(counts.size());
  const double n = static_cast<double>(s.size());
  for (std::size_t a = 0; a < counts.size(); ++a) w[a] = static_cast<double>(counts[a]) / n;
  // k_a / N rounds independently per symbol; renormalize through the checked path.
  return make_distribution(s.alphabet(), w);
}

double string_probability(const DiscreteDistribution& dist, const SymbolString& s, LogBase base) {
  if (dist.size() != s.alphabet().size())
    throw Error(ErrorCode::alphabet_mismatch, "string and distribution alphabets differ");
  // Accumulate per-symbol counts so that the flat measure yields exactly -N.
  const auto counts = symbol_counts(s);
  double total = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] == 0) continue;
    if (dist[static_cast<Symbol>(a)] == 0.0) return -kInf;
    total += static_cast<double>(counts[a]) * log_in(base, dist[static_cast<Symbol>(a)]);
  }
  return total;
}

}  // namespace typlab
