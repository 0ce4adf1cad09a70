#include "typlab/coding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "typlab/csv.hpp"
#include "typlab/entropy_ldp.hpp"

namespace typlab::coding {

double KraftSum::value() const {
  // Scale down in chunks so huge denominators do not overflow a double.
  BigInt num = numerator;
  std::size_t den = log2_denominator;
  while (den > 1000) {
    num >>= 64;
    den -= 64;
  }
  return std::ldexp(num.convert_to<double>(), -static_cast<int>(den));
}

CodeValidation validate_code(const PrefixCode& code) {
  if (code.codewords.empty()) throw Error(ErrorCode::invalid_code, "empty codeword map");
  std::size_t max_len = 0;
  for (const auto& w : code.codewords) {
    if (w.empty()) throw Error(ErrorCode::invalid_code, "empty codeword");
    if (w.find_first_not_of("01") != std::string::npos)
      throw Error(ErrorCode::invalid_code, "codeword is not a binary string");
    max_len = std::max(max_len, w.size());
  }
  CodeValidation out;
  out.kraft.log2_denominator = max_len;
  for (const auto& w : code.codewords) out.kraft.numerator += BigInt(1) << (max_len - w.size());

  // After sorting, a codeword that prefixes another also prefixes its
  // immediate successor; duplicates end up adjacent as well.
  std::vector<std::string> sorted = code.codewords;
  std::sort(sorted.begin(), sorted.end());
  out.prefix_free = true;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1].compare(0, sorted[i].size(), sorted[i]) == 0) {
      out.prefix_free = false;
      break;
    }
  return out;
}

PrefixCode canonical_code(const std::vector<std::size_t>& lengths) {
  std::vector<std::size_t> order(lengths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

  PrefixCode code;
  code.codewords.resize(lengths.size());
  std::string current;
  bool first = true;
  for (std::size_t idx : order) {
    const std::size_t len = lengths[idx];
    if (len == 0) throw Error(ErrorCode::invalid_code, "zero codeword length");
    if (first) {
      current.assign(len, '0');
      first = false;
    } else {
      // Binary increment, then pad to the new length.
      std::size_t pos = current.size();
      while (pos > 0 && current[pos - 1] == '1') current[--pos] = '0';
      if (pos == 0) throw Error(ErrorCode::invalid_code, "lengths violate Kraft's inequality");
      current[pos - 1] = '1';
      current.append(len - current.size(), '0');
    }
    code.codewords[idx] = current;
  }
  return code;
}

namespace {

std::vector<std::size_t> shannon_lengths(const DiscreteDistribution& p) {
  std::vector<std::size_t> lengths(p.size());
  for (Symbol a = 0; a < p.size(); ++a) {
    const double info = -std::log2(p[a]);
    // Exact dyadic probabilities give integral information content; absorb
    // rounding so that ceil(2.0000000000000004) stays 2.
    lengths[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(info - 1e-9)));
  }
  return lengths;
}

std::vector<std::size_t> huffman_lengths(const DiscreteDistribution& p) {
  struct Node {
    double weight;
    Symbol key;  // smallest symbol index in the subtree
    std::size_t id;
  };
  auto later = [](const Node& x, const Node& y) {
    return std::tie(x.weight, x.key) > std::tie(y.weight, y.key);
  };
  std::priority_queue<Node, std::vector<Node>, decltype(later)> heap(later);
  std::vector<std::ptrdiff_t> parent;
  for (Symbol a = 0; a < p.size(); ++a) {
    heap.push({p[a], a, parent.size()});
    parent.push_back(-1);
  }
  while (heap.size() > 1) {
    const Node x = heap.top();
    heap.pop();
    const Node y = heap.top();
    heap.pop();
    const std::size_t id = parent.size();
    parent.push_back(-1);
    parent[x.id] = static_cast<std::ptrdiff_t>(id);
    parent[y.id] = static_cast<std::ptrdiff_t>(id);
    heap.push({x.weight + y.weight, std::min(x.key, y.key), id});
  }
  std::vector<std::size_t> lengths(p.size(), 0);
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::ptrdiff_t n = parent[a]; n >= 0; n = parent[static_cast<std::size_t>(n)]) ++lengths[a];
  return lengths;
}

}  // namespace

PrefixCode build_code(const DiscreteDistribution& p, CodeMethod method) {
  if (!p.strictly_positive())
    throw Error(ErrorCode::zero_probability_symbol, "code construction needs p(a) > 0 for all a");
  return canonical_code(method == CodeMethod::shannon ? shannon_lengths(p) : huffman_lengths(p));
}

double expected_length(const PrefixCode& code, const DiscreteDistribution& p) {
  if (code.size() != p.size()) throw Error(ErrorCode::invalid_code, "code does not cover the alphabet");
  double total = 0.0;
  for (Symbol a = 0; a < p.size(); ++a) {
    if (code.codewords[a].empty()) throw Error(ErrorCode::invalid_code, "missing codeword");
    total += p[a] * static_cast<double>(code.length(a));
  }
  return total;
}

namespace {

template <class Visit>
void for_each_type(std::size_t q, std::size_t n, Visit&& visit) {
  std::vector<std::size_t> counts(q, 0);
  auto recurse = [&](auto&& self, std::size_t index, std::size_t remaining) -> void {
    if (index + 1 == q) {
      counts[index] = remaining;
      visit(std::as_const(counts));
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[index] = c;
      self(self, index + 1, remaining - c);
    }
  };
  recurse(recurse, 0, n);
}

double type_count(std::size_t q, std::size_t n) {
  // C(n + q - 1, q - 1)
  double r = 1.0;
  for (std::size_t i = 1; i < q; ++i) r = r * static_cast<double>(n + i) / static_cast<double>(i);
  return r;
}

}  // namespace

double per_symbol_length(const PrefixCode& code, const DiscreteDistribution& p, std::size_t n) {
  const double single = expected_length(code, p);
  if (n == 0) throw Error(ErrorCode::invalid_argument, "N must be positive");
  if (type_count(p.size(), n) > 2e5) return single;

  double total = 0.0;
  for_each_type(p.size(), n, [&](const std::vector<std::size_t>& counts) {
    double log_prob = ldp::log_multinomial_lgamma(counts);
    double bits = 0.0;
    for (std::size_t a = 0; a < counts.size(); ++a) {
      if (counts[a] == 0) continue;
      log_prob += static_cast<double>(counts[a]) * std::log(p[static_cast<Symbol>(a)]);
      bits += static_cast<double>(counts[a]) * static_cast<double>(code.length(static_cast<Symbol>(a)));
    }
    total += std::exp(log_prob) * bits;
  });
  const double per_symbol = total / static_cast<double>(n);
  if (std::abs(per_symbol - single) > 1e-9 * std::max(1.0, single))
    throw std::logic_error("concatenated code length is not additive");
  return per_symbol;
}

std::string encode(const PrefixCode& code, const SymbolString& s) {
  std::string out;
  for (Symbol a : s.symbols()) out += code.codewords.at(a);
  return out;
}

SymbolString decode(const PrefixCode& code, const Alphabet& alphabet, const std::string& bits) {
  // Binary trie; leaves carry the symbol.
  struct TrieNode {
    std::ptrdiff_t child[2] = {-1, -1};
    std::ptrdiff_t symbol = -1;
  };
  std::vector<TrieNode> trie(1);
  for (Symbol a = 0; a < code.size(); ++a) {
    std::size_t node = 0;
    for (char c : code.codewords[a]) {
      const int bit = c - '0';
      if (trie[node].child[bit] < 0) {
        trie[node].child[bit] = static_cast<std::ptrdiff_t>(trie.size());
        trie.emplace_back();
      }
      node = static_cast<std::size_t>(trie[node].child[bit]);
    }
    trie[node].symbol = a;
  }
  SymbolString out(alphabet);
  std::size_t node = 0;
  for (char c : bits) {
    const std::ptrdiff_t next = trie[node].child[c - '0'];
    if (next < 0) throw Error(ErrorCode::invalid_code, "bit sequence not decodable");
    node = static_cast<std::size_t>(next);
    if (trie[node].symbol >= 0) {
      out.push_back(static_cast<Symbol>(trie[node].symbol));
      node = 0;
    }
  }
  if (node != 0) throw Error(ErrorCode::invalid_code, "dangling bits at end of input");
  return out;
}

void write_code_table(std::ostream& out, const PrefixCode& code, const DiscreteDistribution& p) {
  CsvWriter csv(out);
  csv.header({"symbol", "probability", "codeword", "length"});
  for (Symbol a = 0; a < code.size(); ++a)
    csv.row(p.alphabet().label(a), p[a], code.codewords[a], code.length(a));
}

namespace {

struct Window {
  double lower, upper;  // bounds on log2 P^N(s)
};

Window typical_window(std::size_t n, double h, double eps) {
  const double nn = static_cast<double>(n);
  return {-nn * (h + eps), -nn * (h - eps)};
}

bool in_window(double log2_prob, Window w) {
  // Relative slack for sums of logs that are exact in real arithmetic.
  const double slack = 1e-12 * std::max(1.0, std::abs(log2_prob));
  return log2_prob >= w.lower - slack && log2_prob <= w.upper + slack;
}

}  // namespace

bool TypicalSet::contains(const DiscreteDistribution& p, const SymbolString& s) const {
  if (s.size() != n) return false;
  return in_window(string_probability(p, s, LogBase::two), typical_window(n, entropy_bits, epsilon));
}

TypicalSet typical_set(const DiscreteDistribution& p, std::size_t n, double epsilon, TypicalSetMode mode,
                       RngStream* rng, std::size_t samples) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "N must be positive");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  TypicalSet t;
  t.n = n;
  t.epsilon = epsilon;
  t.entropy_bits = ldp::shannon_entropy(p, LogBase::two);
  t.log2_cardinality_bound = static_cast<double>(n) * (t.entropy_bits + epsilon);
  const Window w = typical_window(n, t.entropy_bits, epsilon);

  if (mode == TypicalSetMode::exact) {
    if (static_cast<double>(n) * std::log2(static_cast<double>(p.size())) > std::log2(kMaxExactStates))
      throw Error(ErrorCode::too_large_for_exact, "q^N exceeds 2^30 states");
    t.exact = true;
    BigInt cardinality = 0;
    double probability = 0.0;
    for_each_type(p.size(), n, [&](const std::vector<std::size_t>& counts) {
      double log2_prob = 0.0;
      for (std::size_t a = 0; a < counts.size(); ++a)
        if (counts[a] > 0) log2_prob += static_cast<double>(counts[a]) * std::log2(p[static_cast<Symbol>(a)]);
      if (!in_window(log2_prob, w)) return;
      const BigInt mult = ldp::multinomial(counts);
      cardinality += mult;
      probability += mult.convert_to<double>() * std::exp2(log2_prob);
    });
    t.cardinality = cardinality;
    t.probability = std::min(probability, 1.0);
    return t;
  }

  if (rng == nullptr) throw Error(ErrorCode::invalid_argument, "Monte Carlo mode needs an RngStream");
  if (samples == 0) throw Error(ErrorCode::invalid_argument, "Monte Carlo mode needs samples > 0");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double log2_prob = 0.0;
    for (std::size_t k = 0; k < n; ++k) log2_prob += std::log2(p[draw_symbol(p, rng->uniform())]);
    if (in_window(log2_prob, w)) ++hits;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(samples);
  t.probability = f;
  t.ci_half_width = 1.96 * std::sqrt(f * (1.0 - f) / static_cast<double>(samples));
  return t;
}

}  // namespace typlab::coding
