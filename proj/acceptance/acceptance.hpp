#pragma once

// Acceptance criteria 1-10 as self-contained checks with pinned tolerances.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace typlab::acceptance {

enum class Scale {
  quick,  // reduced trial counts for a fast smoke run; not the official verdict
  full,   // sizes exactly as stated in the criteria
};

struct Options {
  std::uint64_t seed = 20240601;
  std::size_t workers = 1;
  Scale scale = Scale::full;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  nlohmann::json details;  // measured numbers, bounds and sub-check verdicts
};

inline constexpr int kCriteria = 10;

CriterionResult run_criterion(int id, const Options& options);

/// One line per criterion: "criterion <id> <PASS|FAIL> <title> (<seconds>s)".
std::string summary_line(const CriterionResult& r);

nlohmann::json to_json(const CriterionResult& r);

}  // namespace typlab::acceptance
