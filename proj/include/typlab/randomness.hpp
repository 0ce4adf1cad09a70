#pragma once

// Finite randomness tests and the LZ78 complexity surrogate.
//
// Every built-in test assigns a level to each checkpoint prefix length
// M_j = min_prefix * 2^j that the string reaches; the test level of a string
// is the running maximum over its checkpoints, capped at the string length.
// member(n, s) := level(s) >= n. Nesting holds by construction, and extension
// closure holds because a prefix's checkpoints are checkpoints of every
// extension. Each test's per-checkpoint rule is chosen so that the union of
// its events over all checkpoints has uniform probability at most
// q^-n / (q - 1), which is the counting bound |V_n cap A^N| <= q^{N-n}/(q-1).

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "typlab/core.hpp"
#include "typlab/lz78.hpp"

namespace typlab::randomness {

inline constexpr std::size_t kDefaultMinPrefix = 64;
/// Default rejection level: significance 2^-20.
inline constexpr std::size_t kDefaultThreshold = 20;

class SequentialTest {
 public:
  explicit SequentialTest(std::size_t min_prefix = kDefaultMinPrefix);
  virtual ~SequentialTest() = default;

  virtual std::string id() const = 0;
  /// Human-readable statement of the counting certificate.
  virtual std::string certificate() const = 0;

  /// Level m(s) = max{n : member(n, s)}, or 0.
  std::size_t level(std::span<const Symbol> s, std::size_t q) const;
  bool member(std::size_t n, std::span<const Symbol> s, std::size_t q) const {
    return n >= 1 && level(s, q) >= n;
  }
  /// (prefix length, running level) after each checkpoint reached by s.
  virtual std::vector<std::pair<std::size_t, std::size_t>> level_curve(
      std::span<const Symbol> s, std::size_t q) const;

  std::size_t min_prefix() const noexcept { return min_prefix_; }

 protected:
  /// Raw level contributed at checkpoint j, whose prefix is s[0, M_j).
  /// The value may be negative; it is clamped to zero by the caller.
  virtual long checkpoint_level(std::span<const Symbol> prefix, std::size_t q,
                                std::size_t j) const = 0;

 private:
  std::size_t min_prefix_;
};

/// Leading run of symbol 1. Level r for q = 2 and r - 1 for q > 2, so that
/// q^{-(level + extra)} <= q^{-n}/(q-1).
class RunsOfOnes final : public SequentialTest {
 public:
  RunsOfOnes() : SequentialTest(1) {}
  std::string id() const override { return "RUNS_OF_ONES"; }
  std::string certificate() const override;
  /// Dyadic checkpoints plus the full length, so a run is seen as soon as it
  /// is complete.
  std::vector<std::pair<std::size_t, std::size_t>> level_curve(std::span<const Symbol> s,
                                                               std::size_t q) const override;

 protected:
  long checkpoint_level(std::span<const Symbol> prefix, std::size_t q, std::size_t j) const override;
};

/// Two-sided Hoeffding deviation of the running symbol frequencies from 1/q.
class LlnDeviation final : public SequentialTest {
 public:
  using SequentialTest::SequentialTest;
  std::string id() const override { return "LLN_DEVIATION"; }
  std::string certificate() const override;

 protected:
  long checkpoint_level(std::span<const Symbol> prefix, std::size_t q, std::size_t j) const override;
};

/// Largest deviation of non-overlapping k-block frequencies from q^-k.
class BorelBlock final : public SequentialTest {
 public:
  explicit BorelBlock(std::size_t k, std::size_t min_prefix = kDefaultMinPrefix);
  std::string id() const override { return "BOREL_BLOCK(" + std::to_string(k_) + ")"; }
  std::string certificate() const override;
  std::size_t block_length() const noexcept { return k_; }

 protected:
  long checkpoint_level(std::span<const Symbol> prefix, std::size_t q, std::size_t j) const override;

 private:
  std::size_t k_;
};

/// Some word of length L <= floor(log_q M) - 2 is absent from the prefix.
/// Heuristic in spirit: infinite-recurrence statements have no sharp finite
/// form, so only the missing-word event is tested.
class SubstringCoverage final : public SequentialTest {
 public:
  using SequentialTest::SequentialTest;
  std::string id() const override { return "SUBSTRING_COVERAGE"; }
  std::string certificate() const override;

 protected:
  long checkpoint_level(std::span<const Symbol> prefix, std::size_t q, std::size_t j) const override;
};

struct TestReport {
  std::string test_id;
  std::size_t length = 0;
  std::size_t m = 0;
  std::vector<std::pair<std::size_t, std::size_t>> curve;  // (prefix length, m)
  std::size_t threshold = kDefaultThreshold;
  /// The level exceeds the threshold and is still rising over the second half
  /// of the checkpoints.
  bool unbounded_trend = false;

  bool rejected() const { return m > threshold; }
};

TestReport test_level(const SequentialTest& test, const SymbolString& s,
                      std::size_t threshold = kDefaultThreshold);

/// RUNS_OF_ONES, LLN_DEVIATION, BOREL_BLOCK(1..3), SUBSTRING_COVERAGE.
std::vector<std::unique_ptr<SequentialTest>> builtin_tests(std::size_t min_prefix = kDefaultMinPrefix);

struct BatteryOptions {
  std::size_t min_prefix = kDefaultMinPrefix;
  std::size_t threshold = kDefaultThreshold;
  std::size_t workers = 1;
};

/// Runs the built-in tests. Throws TooShort when |s| < min_prefix.
std::vector<TestReport> builtin_battery(const SymbolString& s, const BatteryOptions& options = {});

/// Result of checking the sequential-test axioms on all strings of length
/// <= max_length.
struct AxiomCheck {
  bool nesting = true;
  bool extension_closure = true;
  bool counting_bound = true;
  bool level_within_length = true;
  std::size_t strings_checked = 0;
  std::string first_violation;

  bool ok() const { return nesting && extension_closure && counting_bound && level_within_length; }
};

/// Exhaustive enumeration of A^N for N <= max_length (q^max_length <= 2^24).
AxiomCheck verify_axioms(const SequentialTest& test, std::size_t q, std::size_t max_length);

/// -log2 P^N(s) - C(s) in bits; +infinity when s uses a zero-probability
/// symbol. Positive values mean s is more compressible than p predicts.
double randomness_deficiency(const SymbolString& s, const DiscreteDistribution& p);
ComplexityReport deficiency_report(const SymbolString& s, const DiscreteDistribution& p);

struct DeficiencyBand {
  double upper = 0.0;          // calibrated percentile of the deficiency
  double percentile = 0.99;
  std::size_t samples = 0;
  std::size_t length = 0;
  std::vector<double> values;  // calibration deficiencies, in sample order

  bool inside(double deficiency) const { return deficiency <= upper; }
};

/// Calibrates the acceptance band from `samples` i.i.d. strings of length n
/// drawn from p, string i on stream (stream_base + i).
DeficiencyBand calibrate_deficiency(const DiscreteDistribution& p, std::size_t n,
                                    std::size_t samples, std::uint64_t seed,
                                    std::uint64_t stream_base = 0, double percentile = 0.99,
                                    std::size_t workers = 1);

/// (N, C(s_{|N})/N) at each checkpoint, from one incremental parse. Throws
/// InvalidArgument unless the checkpoints are strictly increasing and positive.
std::vector<std::pair<std::size_t, double>> complexity_rate_curve(
    SymbolStream& stream, std::span<const std::size_t> checkpoints);

nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const ComplexityReport& report);
/// test_id, N, m, threshold, verdict
void write_battery_csv(std::ostream& out, std::span<const TestReport> reports);

}  // namespace typlab::randomness
