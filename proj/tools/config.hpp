#pragma once

// Parameter handling for the command-line tool: `key = value` files, the
// TYPLAB_SEED environment variable, and flags, merged in that order over
// per-subcommand defaults.

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace typlab::cli {

/// Bad flags, config text or parameter values. Maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads `key = value` lines. '#' starts a comment; blank lines are skipped.
/// A malformed line or a repeated key throws UsageError naming `source` and
/// the 1-based line number.
std::map<std::string, std::string> parse_config(std::istream& in, const std::string& source);

struct ParamSpec {
  std::string key;
  std::string fallback;
  std::string help;
};

class Params {
 public:
  explicit Params(std::vector<ParamSpec> specs);

  const std::vector<ParamSpec>& specs() const noexcept { return specs_; }
  bool known(const std::string& key) const;

  /// Later calls win. Unknown keys throw UsageError.
  void merge(const std::map<std::string, std::string>& layer, const std::string& source);
  void set(const std::string& key, const std::string& value);

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  std::uint64_t whole(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::uint64_t> wholes(const std::string& key) const;
  /// One of `choices`, else UsageError.
  const std::string& choice(const std::string& key, const std::vector<std::string>& choices) const;

  /// "k1=v1 k2=v2 ..." in declaration order.
  std::string echo() const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::vector<ParamSpec> specs_;
  std::map<std::string, std::string> values_;
};

}  // namespace typlab::cli
