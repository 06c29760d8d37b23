#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geoverify/geometry.hpp"
#include "geoverify/spec_io.hpp"

namespace geoverify {

inline constexpr const char* kToolVersion = "geoverify 0.1.0";

struct CheckResult {
  std::string check_id;
  std::string description;
  std::string paper_anchor;
  int n_points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string tool_version = kToolVersion;
  std::string spec_name;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;  // sorted by check_id
  bool overall_pass = false;
  std::vector<std::string> notes;
};

struct CheckOptions {
  int points = 20;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerance_overrides;
  /// 0 means GEOVERIFY_THREADS, or hardware concurrency when unset.
  int threads = 0;
};

/// Runs the spec manifest (or default_checks).  Each check draws its points
/// from SplitMix64(seed).split(check_id), so results do not depend on which
/// other checks run or on thread scheduling.
CheckReport run_checks(const MetricSpec& spec, const CheckOptions& opts);

/// Thread cap from GEOVERIFY_THREADS (>= 1), else `fallback`.
int thread_cap(int fallback);

Json report_to_json(const CheckReport& report);

}  // namespace geoverify
