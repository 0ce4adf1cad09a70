#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace typlab {

enum class ErrorCode {
  invalid_distribution,
  empty_input,
  alphabet_mismatch,
  out_of_range,
  invalid_code,
  zero_probability_symbol,
  too_large_for_exact,
  too_short,
  oracle_unavailable,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

// Every contract violation in the library surfaces as this exception; the
// code lets callers (and the CLI) distinguish the documented error kinds.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace typlab
