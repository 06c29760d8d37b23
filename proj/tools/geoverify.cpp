#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geoverify/catalog.hpp"
#include "geoverify/errors.hpp"
#include "geoverify/geodesics.hpp"
#include "geoverify/report.hpp"
#include "geoverify/spec_io.hpp"

using namespace geoverify;

namespace {

enum Exit { kPass = 0, kFail = 1, kBadInput = 2 };

std::pair<std::string, std::string> split_kv(const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError(std::string(what) + " expects key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ParseError(what + ": '" + text + "' is not a number");
  return v;
}

/// Loads a spec file; catalog-stamped specs also re-run their constructor so
/// its preconditions apply to hand-edited parameters.
MetricSpec load_checked(const std::string& path) {
  MetricSpec spec = load_spec(path);
  if (spec.catalog) build_entry(spec.catalog->entry, spec.catalog->params);
  return spec;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    save_text(out, text);
  }
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string spec;
  int points = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> tol;
  std::string out;
};

int cmd_check(const CheckArgs& a) {
  const MetricSpec spec = load_checked(a.spec);
  CheckOptions opts;
  opts.points = a.points;
  opts.seed = a.seed;
  for (const auto& t : a.tol) {
    auto [id, v] = split_kv(t, "--tol");
    opts.tolerance_overrides[id] = parse_number(v, "--tol " + id);
  }
  const CheckReport report = run_checks(spec, opts);
  emit(dump_json(report_to_json(report)), a.out);
  for (const auto& c : report.checks) {
    if (!c.pass) {
      std::fprintf(stderr, "FAIL %s: residual %.3e > tolerance %.3e\n", c.check_id.c_str(), c.max_residual,
                   c.tolerance);
    }
  }
  return report.overall_pass ? kPass : kFail;
}

int cmd_catalog_list() {
  for (const auto& e : catalog_entries()) {
    std::cout << e.name;
    for (const auto& p : e.params) std::cout << "  " << p.name << "=" << p.default_value;
    std::cout << "\n    " << e.tag << "\n    " << e.summary << "\n";
  }
  return kPass;
}

int cmd_catalog_emit(const std::string& name, const std::vector<std::string>& params, const std::string& out) {
  ParamStrings ps;
  for (const auto& p : params) {
    auto [k, v] = split_kv(p, "--param");
    ps[k] = v;
  }
  emit(dump_json(spec_to_json(build_entry(name, ps))), out);
  return kPass;
}

// ---------------------------------------------------------------------------

struct GeodesicArgs {
  std::string spec;
  std::vector<double> x0;
  std::vector<double> v0;
  double tmax = 1.0;
  double step = 1e-3;
  std::string track = "xi";
  std::string fit;
  double fit_a = 0.0;
  double fit_tol = 1e-5;
  int every = 1;
  std::string out;
};

/// Evaluates the --track selector along the trace.
std::vector<double> tracked_series(const std::string& track, const GeodesicTrace& trace, const MetricSpec& spec) {
  if (track == "xi") {
    if (!spec.xi) throw ParseError("--track xi: spec has no xi");
    return track_alpha(trace, *spec.xi, spec);
  }
  if (track == "p0") {
    if (!spec.p0) throw ParseError("--track p0: spec has no aux.p0");
    return track_alpha(trace, *spec.p0, spec);
  }
  if (track == "phi") {
    if (!spec.phi) throw ParseError("--track phi: spec has no aux.phi");
    return track_scalar(trace, *spec.phi, spec);
  }
  if (track.rfind("coord:", 0) == 0) {
    return track_scalar(trace, spec.parse(track.substr(6)), spec);
  }
  if (track.rfind("field:", 0) == 0) {
    std::vector<Expr> w;
    std::stringstream ss(track.substr(6));
    for (std::string item; std::getline(ss, item, ';');) w.push_back(spec.parse(item));
    if (static_cast<int>(w.size()) != spec.dim) throw ParseError("--track field: needs one expression per coordinate");
    return track_alpha(trace, w, spec);
  }
  throw ParseError("unknown --track '" + track + "' (xi, p0, phi, coord:NAME, field:e1;e2;...)");
}

Vector to_vector(const std::vector<double>& v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim) {
    throw ParseError(std::string(what) + " needs " + std::to_string(dim) + " components");
  }
  return Eigen::Map<const Vector>(v.data(), dim);
}

int cmd_geodesic(const GeodesicArgs& a) {
  const MetricSpec spec = load_checked(a.spec);
  const Vector x0 = to_vector(a.x0, spec.dim, "--x0");
  const Vector v0 = to_vector(a.v0, spec.dim, "--v0");
  if (a.every < 1) throw ParseError("--every must be at least 1");
  std::optional<BlowupModel> model;
  if (!a.fit.empty()) model = parse_blowup_model(a.fit);

  IntegrateOptions io;
  io.step = a.step;
  GeodesicTrace trace = integrate(spec, x0, v0, a.tmax, io);
  trace.alpha = tracked_series(a.track, trace, spec);
  const std::vector<double> e = energy(trace, spec);
  double drift = 0.0;
  for (double v : e) drift = std::max(drift, std::abs(v - e.front()));

  Json doc;
  doc["tool_version"] = kToolVersion;
  doc["spec_name"] = spec.name;
  doc["track"] = a.track;
  doc["step"] = a.step;
  doc["t_max"] = a.tmax;
  doc["status"] = to_string(trace.status);
  doc["t_end"] = trace.t_end;
  doc["energy_initial"] = e.front();
  doc["energy_drift"] = drift;

  int code = kPass;
  if (model) {
    Json fit;
    fit["model"] = to_string(*model);
    try {
      const BlowupFit f = fit_blowup(trace.times, trace.alpha, *model, a.fit_a);
      fit["slope"] = f.slope;
      fit["intercept"] = f.intercept;
      fit["c"] = f.c;
      fit["residual"] = f.residual;
      fit["tolerance"] = a.fit_tol;
      fit["t_singular"] = f.t_singular;
      fit["pass"] = f.residual <= a.fit_tol;
      if (!(f.residual <= a.fit_tol)) {
        std::fprintf(stderr, "fit residual %.3e exceeds %.3e\n", f.residual, a.fit_tol);
        code = kFail;
      }
    } catch (const ModelMismatchError& err) {
      fit["error"] = err.what();
      fit["pass"] = false;
      std::fprintf(stderr, "model mismatch: %s\n", err.what());
      code = kFail;
    }
    doc["fit"] = fit;
  }

  Json rows = Json::array();
  const std::size_t n = trace.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % static_cast<std::size_t>(a.every) != 0 && i + 1 != n) continue;
    Json r;
    r["t"] = trace.times[i];
    r["x"] = std::vector<double>(trace.points[i].data(), trace.points[i].data() + spec.dim);
    r["v"] = std::vector<double>(trace.velocities[i].data(), trace.velocities[i].data() + spec.dim);
    r["alpha"] = trace.alpha[i];
    rows.push_back(r);
  }
  doc["trace"] = rows;
  emit(dump_json(doc), a.out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for metric connections with torsion"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Run the residual checks of a metric spec");
  check->add_option("spec", ca.spec, "MetricSpec JSON file")->required();
  check->add_option("--points", ca.points, "Sample points per check")->capture_default_str();
  check->add_option("--seed", ca.seed, "PRNG seed")->capture_default_str();
  check->add_option("--tol", ca.tol, "Tolerance override check_id=value (repeatable)");
  check->add_option("--out", ca.out, "Report path (default: stdout)");

  auto* catalog = app.add_subcommand("catalog", "List or emit catalog entries");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "Print entries, parameters and what they instantiate");
  std::string emit_name, emit_out;
  std::vector<std::string> emit_params;
  auto* emit_cmd = catalog->add_subcommand("emit", "Write a MetricSpec JSON for an entry");
  emit_cmd->add_option("name", emit_name, "Entry name")->required();
  emit_cmd->add_option("--param", emit_params, "Parameter key=value (repeatable)");
  emit_cmd->add_option("--out", emit_out, "Output path (default: stdout)");

  GeodesicArgs ga;
  auto* geo = app.add_subcommand("geodesic", "Integrate a geodesic and fit a blow-up model");
  geo->add_option("spec", ga.spec, "MetricSpec JSON file")->required();
  geo->add_option("--x0", ga.x0, "Initial point, comma separated")->required()->delimiter(',');
  geo->add_option("--v0", ga.v0, "Initial velocity, comma separated")->required()->delimiter(',');
  geo->add_option("--tmax", ga.tmax, "Final parameter time (negative integrates backwards)")->capture_default_str();
  geo->add_option("--step", ga.step, "RK4 step")->capture_default_str();
  geo->add_option("--track", ga.track, "Tracked series: xi, p0, phi, coord:NAME, field:e1;e2;...")
      ->capture_default_str();
  geo->add_option("--fit", ga.fit, "Blow-up model: reciprocal, exp_linear, arctan, log_ratio");
  geo->add_option("--fit-a", ga.fit_a, "Constant a of the log_ratio model")->capture_default_str();
  geo->add_option("--fit-tol", ga.fit_tol, "Maximum fit residual for exit 0")->capture_default_str();
  geo->add_option("--every", ga.every, "Keep every k-th trace row")->capture_default_str();
  geo->add_option("--out", ga.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kBadInput;
  }

  try {
    if (check->parsed()) return cmd_check(ca);
    if (list->parsed()) return cmd_catalog_list();
    if (emit_cmd->parsed()) return cmd_catalog_emit(emit_name, emit_params, emit_out);
    if (geo->parsed()) return cmd_geodesic(ga);
  } catch (const ModelMismatchError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFail;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadInput;
  }
  return kBadInput;
}
