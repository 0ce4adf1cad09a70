#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "typlab/core.hpp"

namespace typlab::randomness {

/// LZ78 description length of a string: the computable stand-in for prefix
/// Kolmogorov complexity used throughout the library.
struct ComplexityReport {
  std::size_t length = 0;   // N
  std::size_t phrases = 0;  // c, counting a trailing partial phrase
  double bits = 0.0;        // C = sum_{i=1..c} (ceil(log2 i) + ceil(log2 q))
  double deficiency = 0.0;  // filled by randomness_deficiency

  double rate() const { return length ? bits / static_cast<double>(length) : 0.0; }
};

/// Bits charged for c phrases over a q-letter alphabet.
double lz78_bits(std::size_t phrases, std::size_t q);

/// Incremental LZ78 parse. Each phrase is the longest known phrase plus one
/// new symbol; the phrase count after any prefix equals the count of a fresh
/// parse of that prefix.
class Lz78Parser {
 public:
  explicit Lz78Parser(std::size_t q);

  void push(Symbol a);
  void push(std::span<const Symbol> symbols) {
    for (Symbol a : symbols) push(a);
  }

  std::size_t length() const noexcept { return length_; }
  /// Completed phrases plus one if a partial phrase is pending.
  std::size_t phrases() const noexcept { return complete_ + (node_ != 0 ? 1 : 0); }
  ComplexityReport report() const;

 private:
  std::size_t q_;
  std::vector<std::uint32_t> children_;  // q entries per node; 0 = absent
  std::uint32_t node_ = 0;
  std::size_t complete_ = 0;
  std::size_t length_ = 0;
};

ComplexityReport lz78_complexity(std::span<const Symbol> symbols, std::size_t q);
ComplexityReport lz78_complexity(const SymbolString& s);

}  // namespace typlab::randomness
