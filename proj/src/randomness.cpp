#include "typlab/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "typlab/csv.hpp"
#include "typlab/parallel.hpp"

namespace typlab::randomness {

namespace {

constexpr double kLn2 = std::numbers::ln2;

long floor_level(double numerator, std::size_t q) {
  const double x = std::floor(numerator / std::log(static_cast<double>(q)));
  if (!(x > 0.0)) return 0;
  return x > 1e15 ? static_cast<long>(1e15) : static_cast<long>(x);
}

// Largest L with q^L <= m.
std::size_t floor_log(std::size_t m, std::size_t q) {
  std::size_t l = 0;
  for (std::size_t power = q; power <= m; power *= q) {
    ++l;
    if (power > std::numeric_limits<std::size_t>::max() / q) break;
  }
  return l;
}

std::size_t checked_power(std::size_t q, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    r *= q;
    if (r > (std::size_t{1} << 24))
      throw Error(ErrorCode::too_large_for_exact, "q^k exceeds the block-count table limit");
  }
  return r;
}

}  // namespace

SequentialTest::SequentialTest(std::size_t min_prefix) : min_prefix_(min_prefix) {
  if (min_prefix == 0) throw Error(ErrorCode::invalid_argument, "min_prefix must be positive");
}

std::vector<std::pair<std::size_t, std::size_t>> SequentialTest::level_curve(
    std::span<const Symbol> s, std::size_t q) const {
  std::vector<std::pair<std::size_t, std::size_t>> curve;
  std::size_t running = 0;
  std::size_t j = 0;
  for (std::size_t m = min_prefix_; m <= s.size(); m *= 2, ++j) {
    const long raw = checkpoint_level(s.first(m), q, j);
    running = std::max(running, std::min(static_cast<std::size_t>(std::max(raw, 0L)), m));
    curve.emplace_back(m, running);
  }
  return curve;
}

std::size_t SequentialTest::level(std::span<const Symbol> s, std::size_t q) const {
  const auto curve = level_curve(s, q);
  return curve.empty() ? 0 : curve.back().second;
}

std::string RunsOfOnes::certificate() const {
  return "strings of length N opening with r copies of symbol 1 number q^{N-r}; "
         "level r (q = 2) or r - 1 (q > 2) keeps this below q^{N-n}/(q-1)";
}

std::vector<std::pair<std::size_t, std::size_t>> RunsOfOnes::level_curve(
    std::span<const Symbol> s, std::size_t q) const {
  auto curve = SequentialTest::level_curve(s, q);
  if (!s.empty() && (curve.empty() || curve.back().first != s.size())) {
    const long raw = checkpoint_level(s, q, 0);
    const std::size_t prev = curve.empty() ? 0 : curve.back().second;
    curve.emplace_back(s.size(), std::max(prev, static_cast<std::size_t>(std::max(raw, 0L))));
  }
  return curve;
}

long RunsOfOnes::checkpoint_level(std::span<const Symbol> prefix, std::size_t q, std::size_t) const {
  const auto run = static_cast<long>(
      std::find_if(prefix.begin(), prefix.end(), [](Symbol a) { return a != 1; }) - prefix.begin());
  return q == 2 ? run : run - 1;
}

std::string LlnDeviation::certificate() const {
  return "at checkpoint j (prefix M = M_0 2^j) with d = max_a |k_a/M - 1/q|, level n requires "
         "2 M d^2 >= n ln q + ln(q-1) + (j+2) ln 2 + ln u (u = 1 for q = 2, else q); "
         "Hoeffding gives probability <= q^-n/(q-1) 2^-(j+1), summable over j";
}

long LlnDeviation::checkpoint_level(std::span<const Symbol> prefix, std::size_t q, std::size_t j) const {
  std::vector<std::size_t> counts(q, 0);
  for (Symbol a : prefix) ++counts[a];
  const double m = static_cast<double>(prefix.size());
  double d = 0.0;
  for (std::size_t k : counts) d = std::max(d, std::abs(static_cast<double>(k) / m - 1.0 / static_cast<double>(q)));
  const double u = q == 2 ? 1.0 : static_cast<double>(q);
  const double budget = 2.0 * m * d * d - std::log(static_cast<double>(q - 1)) -
                        static_cast<double>(j + 2) * kLn2 - std::log(u);
  return floor_level(budget, q);
}

BorelBlock::BorelBlock(std::size_t k, std::size_t min_prefix) : SequentialTest(min_prefix), k_(k) {
  if (k == 0) throw Error(ErrorCode::invalid_argument, "block length must be positive");
}

std::string BorelBlock::certificate() const {
  return "at checkpoint j with B = floor(M/k) disjoint blocks and d = max_w |c_w/B - q^-k|, "
         "level n requires 2 B d^2 >= n ln q + ln(q-1) + (j+2) ln 2 + k ln q; "
         "Hoeffding plus a union over the q^k words";
}

long BorelBlock::checkpoint_level(std::span<const Symbol> prefix, std::size_t q, std::size_t j) const {
  const std::size_t blocks = prefix.size() / k_;
  if (blocks == 0) return 0;
  const std::size_t words = checked_power(q, k_);
  std::vector<std::size_t> counts(words, 0);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < k_; ++i) code = code * q + prefix[b * k_ + i];
    ++counts[code];
  }
  const double bd = static_cast<double>(blocks);
  const double expected = 1.0 / static_cast<double>(words);
  double d = 0.0;
  for (std::size_t c : counts) d = std::max(d, std::abs(static_cast<double>(c) / bd - expected));
  const double budget = 2.0 * bd * d * d - std::log(static_cast<double>(q - 1)) -
                        static_cast<double>(j + 2) * kLn2 -
                        static_cast<double>(k_) * std::log(static_cast<double>(q));
  return floor_level(budget, q);
}

std::string SubstringCoverage::certificate() const {
  return "at checkpoint j, a missing word of length L (1 <= L <= floor(log_q M) - 2) has "
         "probability <= b = q^L (1 - q^-L)^floor(M/L); it earns level n when "
         "ln b <= -n ln q - ln(q-1) - (j+1+L) ln 2, summable over j and L";
}

long SubstringCoverage::checkpoint_level(std::span<const Symbol> prefix, std::size_t q,
                                         std::size_t j) const {
  const std::size_t m = prefix.size();
  const std::size_t lmax = floor_log(m, q);
  const double lnq = std::log(static_cast<double>(q));
  long best = 0;
  for (std::size_t l = 1; l + 2 <= lmax; ++l) {
    const std::size_t words = checked_power(q, l);
    std::vector<char> seen(words, 0);
    std::size_t distinct = 0;
    const std::size_t top = words / q;  // q^{L-1}
    std::size_t code = 0;
    for (std::size_t i = 0; i < m; ++i) {
      code = (code % top) * q + prefix[i];
      if (i + 1 >= l && !seen[code]) {
        seen[code] = 1;
        ++distinct;
      }
    }
    if (distinct == words) continue;
    const double lnb = static_cast<double>(l) * lnq +
                       static_cast<double>(m / l) * std::log1p(-std::exp(-static_cast<double>(l) * lnq));
    const double budget =
        -lnb - std::log(static_cast<double>(q - 1)) - static_cast<double>(j + 1 + l) * kLn2;
    best = std::max(best, floor_level(budget, q));
  }
  return best;
}

TestReport test_level(const SequentialTest& test, const SymbolString& s, std::size_t threshold) {
  if (s.empty()) throw Error(ErrorCode::empty_input, "test level of an empty string");
  TestReport r;
  r.test_id = test.id();
  r.length = s.size();
  r.threshold = threshold;
  r.curve = test.level_curve(s.symbols(), s.alphabet().size());
  r.m = r.curve.empty() ? 0 : r.curve.back().second;
  if (r.m > s.size()) throw std::logic_error("test level exceeds the string length");
  if (r.curve.empty() || r.curve.back().first != s.size()) r.curve.emplace_back(s.size(), r.m);
  const std::size_t mid = (r.curve.size() - 1) / 2;
  r.unbounded_trend = r.curve.size() >= 2 && r.m > threshold && r.m > r.curve[mid].second;
  return r;
}

std::vector<std::unique_ptr<SequentialTest>> builtin_tests(std::size_t min_prefix) {
  std::vector<std::unique_ptr<SequentialTest>> tests;
  tests.push_back(std::make_unique<RunsOfOnes>());
  tests.push_back(std::make_unique<LlnDeviation>(min_prefix));
  for (std::size_t k = 1; k <= 3; ++k) tests.push_back(std::make_unique<BorelBlock>(k, min_prefix));
  tests.push_back(std::make_unique<SubstringCoverage>(min_prefix));
  return tests;
}

std::vector<TestReport> builtin_battery(const SymbolString& s, const BatteryOptions& options) {
  if (s.size() < options.min_prefix)
    throw Error(ErrorCode::too_short, "battery needs at least min_prefix symbols");
  const auto tests = builtin_tests(options.min_prefix);
  std::vector<TestReport> reports(tests.size());
  parallel_for(tests.size(), options.workers,
               [&](std::size_t i) { reports[i] = test_level(*tests[i], s, options.threshold); });
  return reports;
}

AxiomCheck verify_axioms(const SequentialTest& test, std::size_t q, std::size_t max_length) {
  if (std::pow(static_cast<double>(q), static_cast<double>(max_length)) > 16777216.0)
    throw Error(ErrorCode::too_large_for_exact, "q^N exceeds 2^24");
  AxiomCheck check;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && check.first_violation.empty()) check.first_violation = what;
    flag = false;
  };
  std::vector<std::size_t> previous{0};  // level of the empty string
  std::vector<Symbol> s;
  for (std::size_t n = 1; n <= max_length; ++n) {
    const std::size_t total = previous.size() * q;
    std::vector<std::size_t> levels(total);
    std::vector<std::uint64_t> at_least(n + 2, 0);
    s.assign(n, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      for (std::size_t i = 0, rest = idx; i < n; ++i, rest /= q) s[n - 1 - i] = static_cast<Symbol>(rest % q);
      const std::size_t m = test.level(s, q);
      levels[idx] = m;
      ++check.strings_checked;
      if (m > n) {
        fail(check.level_within_length, test.id() + ": level exceeds length at N=" + std::to_string(n));
        continue;
      }
      for (std::size_t k = 1; k <= m; ++k) {
        ++at_least[k];
        if (!test.member(k, s, q))
          fail(check.nesting, test.id() + ": nesting fails at N=" + std::to_string(n));
      }
      if (test.member(m + 1, s, q))
        fail(check.nesting, test.id() + ": membership above the level at N=" + std::to_string(n));
      if (m < previous[idx / q])
        fail(check.extension_closure, test.id() + ": extension lowers the level at N=" + std::to_string(n));
    }
    // |V_k cap A^n| (q-1) q^k <= q^n for 1 <= k <= n.
    std::uint64_t qn = 1;
    for (std::size_t i = 0; i < n; ++i) qn *= q;
    std::uint64_t qk = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      qk *= q;
      if (static_cast<long double>(at_least[k]) * static_cast<long double>(q - 1) *
              static_cast<long double>(qk) > static_cast<long double>(qn))
        fail(check.counting_bound, test.id() + ": counting bound fails at N=" + std::to_string(n) +
                                       ", n=" + std::to_string(k));
    }
    previous = std::move(levels);
  }
  return check;
}

ComplexityReport deficiency_report(const SymbolString& s, const DiscreteDistribution& p) {
  ComplexityReport r = lz78_complexity(s);
  const double log2p = string_probability(p, s, LogBase::two);
  r.deficiency = std::isinf(log2p) ? kInf : -log2p - r.bits;
  return r;
}

double randomness_deficiency(const SymbolString& s, const DiscreteDistribution& p) {
  if (s.empty()) throw Error(ErrorCode::empty_input, "deficiency of an empty string");
  return deficiency_report(s, p).deficiency;
}

DeficiencyBand calibrate_deficiency(const DiscreteDistribution& p, std::size_t n,
                                    std::size_t samples, std::uint64_t seed,
                                    std::uint64_t stream_base, double percentile,
                                    std::size_t workers) {
  if (samples == 0 || n == 0) throw Error(ErrorCode::invalid_argument, "need samples and length");
  if (!(percentile > 0.0 && percentile <= 1.0))
    throw Error(ErrorCode::out_of_range, "percentile must lie in (0, 1]");
  DeficiencyBand band;
  band.samples = samples;
  band.length = n;
  band.percentile = percentile;
  band.values.resize(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    RngStream rng(seed, stream_base + i);
    band.values[i] = randomness_deficiency(sample_string(p, n, rng), p);
  });
  std::vector<double> sorted = band.values;
  std::sort(sorted.begin(), sorted.end());
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(samples)));
  band.upper = sorted[std::max<std::size_t>(rank, 1) - 1];
  return band;
}

std::vector<std::pair<std::size_t, double>> complexity_rate_curve(
    SymbolStream& stream, std::span<const std::size_t> checkpoints) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i)
    if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
      throw Error(ErrorCode::invalid_argument, "checkpoints must be positive and increasing");
  Lz78Parser parser(stream.alphabet().size());
  std::vector<std::pair<std::size_t, double>> curve;
  std::uint64_t position = 0;
  for (std::size_t target : checkpoints) {
    for (; position < target; ++position) parser.push(stream.at(position));
    curve.emplace_back(target, parser.report().rate());
  }
  return curve;
}

nlohmann::json to_json(const TestReport& report) {
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [n, m] : report.curve) curve.push_back({n, m});
  return {{"test_id", report.test_id}, {"N", report.length},        {"m", report.m},
          {"threshold", report.threshold}, {"rejected", report.rejected()},
          {"unbounded_trend", report.unbounded_trend}, {"curve", curve}};
}

nlohmann::json to_json(const ComplexityReport& report) {
  nlohmann::json j = {{"N", report.length}, {"phrases", report.phrases}, {"bits", report.bits},
                      {"rate", report.rate()}};
  j["deficiency"] = std::isfinite(report.deficiency) ? nlohmann::json(report.deficiency)
                                                     : nlohmann::json(format_number(report.deficiency));
  return j;
}

void write_battery_csv(std::ostream& out, std::span<const TestReport> reports) {
  CsvWriter csv(out);
  csv.header({"test_id", "N", "m", "threshold", "verdict"});
  for (const auto& r : reports)
    csv.row(r.test_id, r.length, r.m, r.threshold, r.rejected() ? "reject" : "pass");
}

}  // namespace typlab::randomness
