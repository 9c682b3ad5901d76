#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace oud {

inline constexpr const char* kVersion = "0.1.0";

struct CriterionResult {
  std::string name;
  bool pass = false;
  nlohmann::ordered_json details;  // measured values, one object per criterion
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::string filter;
  bool all_pass = false;
  std::vector<CriterionResult> criteria;
};

/// Runs every registered acceptance criterion (optionally filtered by a
/// substring of the criterion name).  The report is a deterministic function
/// of (seed, filter): worker count only distributes Monte Carlo batches.
SuiteReport run_suite(std::uint64_t seed, const std::string& filter = "", int workers = 1);

/// Deterministic JSON form of the report (byte-identical for identical
/// (seed, filter), regardless of worker count).
nlohmann::ordered_json suite_to_json(const SuiteReport& report);

}  // namespace oud
