#include "geoverify/report.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

#include "geoverify/checks.hpp"

namespace geoverify {

namespace {

constexpr double kSampleMargin = 1e-3;

CheckResult run_one(const MetricSpec& spec, const CheckDef& def, const CheckOptions& opts) {
  SplitMix64 rng = SplitMix64(opts.seed).split(def.id);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(opts.points));
  for (int i = 0; i < opts.points; ++i) pts.push_back(sample_point(spec, rng, kSampleMargin));
  CheckResult r;
  r.check_id = def.id;
  r.description = def.description;
  r.paper_anchor = def.anchor;
  r.n_points = opts.points;
  const auto ov = opts.tolerance_overrides.find(def.id);
  r.tolerance = ov == opts.tolerance_overrides.end() ? def.tolerance : ov->second;
  r.max_residual = def.eval(spec, pts);
  // NaN never passes.
  r.pass = r.max_residual <= r.tolerance;
  return r;
}

}  // namespace

int thread_cap(int fallback) {
  if (const char* env = std::getenv("GEOVERIFY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1, fallback);
}

CheckReport run_checks(const MetricSpec& spec, const CheckOptions& opts) {
  if (opts.points < 1) throw PreconditionError("--points must be at least 1");
  std::vector<std::string> ids = spec.manifest ? *spec.manifest : default_checks(spec);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const auto& [id, tol] : opts.tolerance_overrides) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw ParseError("tolerance override for check '" + id + "' which is not run");
    }
    if (!(tol >= 0.0)) throw ParseError("tolerance for '" + id + "' must be non-negative");
  }
  std::vector<const CheckDef*> defs;
  for (const auto& id : ids) defs.push_back(&find_check(id));

  const std::size_t n = defs.size();
  std::vector<CheckResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  int threads = opts.threads > 0 ? opts.threads : thread_cap(static_cast<int>(std::thread::hardware_concurrency()));
  threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        results[k] = run_one(spec, *defs[k], opts);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // The first failing check in id order decides which error surfaces.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  CheckReport report;
  report.spec_name = spec.name;
  report.seed = opts.seed;
  report.checks = std::move(results);
  report.overall_pass = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.pass; });
  report.notes = spec.notes;
  return report;
}

Json report_to_json(const CheckReport& report) {
  Json doc;
  doc["tool_version"] = report.tool_version;
  doc["spec_name"] = report.spec_name;
  doc["seed"] = report.seed;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json j;
    j["check_id"] = c.check_id;
    j["description"] = c.description;
    j["paper_anchor"] = c.paper_anchor;
    j["n_points"] = c.n_points;
    j["max_residual"] = c.max_residual;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    checks.push_back(j);
  }
  doc["checks"] = checks;
  doc["overall_pass"] = report.overall_pass;
  if (!report.notes.empty()) doc["notes"] = report.notes;
  return doc;
}

}  // namespace geoverify
