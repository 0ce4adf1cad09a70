#include "typlab/lz78.hpp"

#include <bit>

namespace typlab::randomness {

namespace {

std::uint64_t ceil_log2(std::uint64_t i) { return i <= 1 ? 0 : std::bit_width(i - 1); }

}  // namespace

double lz78_bits(std::size_t phrases, std::size_t q) {
  const std::uint64_t symbol_bits = ceil_log2(q);
  std::uint64_t total = 0;
  // ceil(log2 i) is constant (= k) on the block i in (2^{k-1}, 2^k].
  for (std::uint64_t k = 0, lo = 1; lo <= phrases; ++k) {
    const std::uint64_t hi = std::min<std::uint64_t>(phrases, std::uint64_t{1} << k);
    total += (hi - lo + 1) * k;
    lo = hi + 1;
  }
  return static_cast<double>(total + phrases * symbol_bits);
}

Lz78Parser::Lz78Parser(std::size_t q) : q_(q), children_(q, 0) {
  if (q < 2) throw Error(ErrorCode::invalid_argument, "alphabet needs q >= 2");
}

void Lz78Parser::push(Symbol a) {
  if (a >= q_) throw Error(ErrorCode::out_of_range, "symbol index exceeds alphabet");
  ++length_;
  const std::size_t slot = static_cast<std::size_t>(node_) * q_ + a;
  if (children_[slot] != 0) {
    node_ = children_[slot];
    return;
  }
  const auto fresh = static_cast<std::uint32_t>(children_.size() / q_);
  children_[slot] = fresh;
  children_.resize(children_.size() + q_, 0);
  ++complete_;
  node_ = 0;
}

ComplexityReport Lz78Parser::report() const {
  ComplexityReport r;
  r.length = length_;
  r.phrases = phrases();
  r.bits = lz78_bits(r.phrases, q_);
  return r;
}

ComplexityReport lz78_complexity(std::span<const Symbol> symbols, std::size_t q) {
  Lz78Parser parser(q);
  parser.push(symbols);
  return parser.report();
}

ComplexityReport lz78_complexity(const SymbolString& s) {
  return lz78_complexity(s.symbols(), s.alphabet().size());
}

}  // namespace typlab::randomness
