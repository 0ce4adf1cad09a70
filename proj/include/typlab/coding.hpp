#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "typlab/core.hpp"

namespace typlab::coding {

using BigInt = boost::multiprecision::cpp_int;

/// Binary code A -> 2*, one '0'/'1' codeword per symbol.
struct PrefixCode {
  std::vector<std::string> codewords;

  std::size_t size() const noexcept { return codewords.size(); }
  std::size_t length(Symbol a) const { return codewords.at(a).size(); }
};

/// Kraft sum as the exact dyadic rational numerator / 2^log2_denominator.
struct KraftSum {
  BigInt numerator;
  std::size_t log2_denominator = 0;

  double value() const;
  bool at_most_one() const { return numerator <= (BigInt(1) << log2_denominator); }
  bool equals_one() const { return numerator == (BigInt(1) << log2_denominator); }
};

struct CodeValidation {
  bool prefix_free = false;  // injective and no codeword prefixes another
  KraftSum kraft;
};

/// Exact prefix-freeness (sorted-neighbour check) and Kraft sum. Throws
/// InvalidCode on an empty codeword map, an empty codeword or a non-binary
/// character.
CodeValidation validate_code(const PrefixCode& code);

enum class CodeMethod { shannon, optimal };

/// shannon: lengths ceil(-log2 p(a)) assigned canonically (sorted by length,
/// then symbol index). optimal: Huffman merging of the two lightest nodes,
/// ties broken towards the smaller symbol index, then canonical codewords.
/// Throws ZeroProbabilitySymbol when some p(a) = 0.
PrefixCode build_code(const DiscreteDistribution& p, CodeMethod method);

/// Canonical codewords for the given lengths; throws InvalidCode when the
/// lengths violate Kraft's inequality.
PrefixCode canonical_code(const std::vector<std::size_t>& lengths);

/// L(C,p) = sum p(a) len(C(a)). Throws InvalidCode when the code does not
/// cover the alphabet.
double expected_length(const PrefixCode& code, const DiscreteDistribution& p);

/// L(C^N, P^N)/N for the concatenated word code. Computed by summing over
/// type classes when their number is small, checked against L(C,p).
double per_symbol_length(const PrefixCode& code, const DiscreteDistribution& p, std::size_t n);

std::string encode(const PrefixCode& code, const SymbolString& s);
/// Decodes a concatenation of codewords; throws InvalidCode on a dangling or
/// unrecognized bit sequence.
SymbolString decode(const PrefixCode& code, const Alphabet& alphabet, const std::string& bits);

void write_code_table(std::ostream& out, const PrefixCode& code, const DiscreteDistribution& p);

enum class TypicalSetMode { exact, monte_carlo };

/// Weak-AEP typical set
///   T = { s in A^N : P^N(s) in [2^{-N(h+eps)}, 2^{-N(h-eps)}] }.
struct TypicalSet {
  std::size_t n = 0;
  double epsilon = 0.0;
  double entropy_bits = 0.0;  // h_2(p)
  bool exact = false;
  double probability = 0.0;          // P^N(T), exact or Monte Carlo estimate
  double ci_half_width = 0.0;        // 95% interval for Monte Carlo mode
  std::optional<BigInt> cardinality; // |T| in exact mode
  double log2_cardinality_bound = 0.0;  // N(h + eps)

  bool contains(const DiscreteDistribution& p, const SymbolString& s) const;
};

/// Largest state count q^N handled by exact mode.
inline constexpr double kMaxExactStates = 1073741824.0;  // 2^30

/// Exact mode sums the type classes; throws TooLargeForExact when
/// q^N > 2^30. Monte Carlo mode draws `samples` strings from rng.
TypicalSet typical_set(const DiscreteDistribution& p, std::size_t n, double epsilon,
                       TypicalSetMode mode = TypicalSetMode::exact, RngStream* rng = nullptr,
                       std::size_t samples = 100000);

}  // namespace typlab::coding
