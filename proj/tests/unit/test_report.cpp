#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "geoverify/catalog.hpp"
#include "geoverify/report.hpp"
#include "geoverify/spec_io.hpp"
#include "random_specs.hpp"

using namespace geoverify;
using namespace geoverify::testing;

namespace {

Json minimal_doc() {
  return Json::parse(R"J({
    "name": "m2", "dim": 2, "coords": ["t", "x"], "params": {"k": 2},
    "metric": [{"i": 0, "j": 0, "expr": "-1"}, {"i": 1, "j": 1, "expr": "exp(k*t)"}],
    "xi": null, "S": null, "domain": {"t": [-1, 1], "x": [0, 2]}, "manifest": null
  })J");
}

CheckReport run(const MetricSpec& s, std::uint64_t seed, int threads) {
  CheckOptions o;
  o.points = 10;
  o.seed = seed;
  o.threads = threads;
  return run_checks(s, o);
}

}  // namespace

TEST_CASE("spec JSON round trip") {
  SplitMix64 rng(61);
  for (const auto& e : catalog_entries()) {
    CAPTURE(e.name);
    const MetricSpec s = build_entry(e.name);
    const std::string text = dump_json(spec_to_json(s));
    const MetricSpec back = spec_from_json(Json::parse(text));
    CHECK(dump_json(spec_to_json(back)) == text);
    CHECK(back.catalog->entry == e.name);
    CHECK(back.manifest == s.manifest);
    for (const auto& pt : sample_points(s, rng, 5)) {
      const MetricValue a = metric_at(s, pt);
      const MetricValue b = metric_at(back, pt);
      CHECK((a.g - b.g).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("minimal spec parses") {
  const MetricSpec s = spec_from_json(minimal_doc());
  CHECK(s.dim == 2);
  CHECK(s.params.at("k") == 2.0);
  CHECK(s.domain[1] == std::pair<double, double>{0.0, 2.0});
  CHECK_FALSE(s.has_torsion());
}

TEST_CASE("malformed specs are parse errors") {
  auto broken = [](auto edit) {
    Json d = minimal_doc();
    edit(d);
    return d;
  };
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d.erase("coords"); })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["dim"] = 3; })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["metric"][0]["i"] = 7; })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["metric"].push_back({{"i", 0}, {"j", 0}, {"expr", "1"}}); })),
                  ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["metric"][1]["expr"] = "exp(q*t)"; })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["params"]["k"] = "two"; })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["domain"]["y"] = {0, 1}; })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["domain"]["t"] = {1, -1}; })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["xi"] = {"1"}; })), ParseError);
  CHECK_THROWS_AS(spec_from_json(broken([](Json& d) { d["signature"] = "kleinian"; })), ParseError);
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), ParseError);
}

TEST_CASE("deterministic number formatting") {
  Json d;
  d["a"] = 0.1;
  d["b"] = std::numeric_limits<double>::quiet_NaN();
  d["c"] = 3;
  d["v"] = {1.5, -2.0};
  d["e"] = Json::array();
  const std::string out = dump_json(d);
  CHECK(out.find("\"a\": 0.10000000000000001") != std::string::npos);
  CHECK(out.find("\"b\": null") != std::string::npos);
  CHECK(out.find("\"c\": 3") != std::string::npos);
  CHECK(out.find("\"v\": [1.5, -2]") != std::string::npos);
  CHECK(out.find("\"e\": []") != std::string::npos);
}

TEST_CASE("reports are deterministic across thread counts and seeds matter") {
  const MetricSpec k = build_entry("kundt3", {{"C", "sin(x)*u"}});
  const std::string one = dump_json(report_to_json(run(k, 7, 1)));
  const std::string many = dump_json(report_to_json(run(k, 7, 8)));
  CHECK(one == many);
  CHECK(one != dump_json(report_to_json(run(k, 7 + 1, 1))));
}

TEST_CASE("per-check substreams are independent of the manifest") {
  MetricSpec k = build_entry("kundt3", {{"C", "sin(x)*u"}});
  const CheckReport full = run(k, 3, 1);
  k.manifest = std::vector<std::string>{"nabla_S"};
  const CheckReport single = run(k, 3, 1);
  REQUIRE(single.checks.size() == 1);
  for (const auto& c : full.checks)
    if (c.check_id == "nabla_S") CHECK(c.max_residual == single.checks[0].max_residual);
}

TEST_CASE("report structure") {
  const MetricSpec k = build_entry("kundt3");
  const CheckReport r = run(k, 1, 0);
  CHECK(r.tool_version == std::string(kToolVersion));
  CHECK(r.spec_name == "kundt3");
  CHECK(std::is_sorted(r.checks.begin(), r.checks.end(),
                       [](const auto& a, const auto& b) { return a.check_id < b.check_id; }));
  bool all = true;
  for (const auto& c : r.checks) {
    all = all && c.pass;
    CHECK(c.pass == (c.max_residual <= c.tolerance));
    CHECK(c.n_points == 10);
    CHECK_FALSE(c.paper_anchor.empty());
  }
  CHECK(r.overall_pass == all);
  CHECK_FALSE(r.notes.empty());

  CheckOptions strict;
  strict.points = 10;
  strict.tolerance_overrides["kundt_twist"] = -1.0;
  CHECK_THROWS_AS(run_checks(k, strict), ParseError);
  strict.tolerance_overrides = {{"nabla_R_fd", 1.0}};
  CHECK_THROWS_AS(run_checks(k, strict), ParseError);
  strict.tolerance_overrides = {{"kundt_twist", 0.0}};
  const CheckReport z = run_checks(k, strict);
  for (const auto& c : z.checks)
    if (c.check_id == "kundt_twist") CHECK(c.tolerance == 0.0);

  MetricSpec bad = k;
  bad.manifest = std::vector<std::string>{"no_such_check"};
  CHECK_THROWS_AS(run(bad, 1, 1), ParseError);
}

TEST_CASE("bare metrics get the default suite") {
  const MetricSpec s = spec_from_json(minimal_doc());
  const CheckReport r = run(s, 5, 1);
  std::vector<std::string> ids;
  for (const auto& c : r.checks) ids.push_back(c.check_id);
  CHECK(std::find(ids.begin(), ids.end(), "lc_bianchi") != ids.end());
  CHECK(std::find(ids.begin(), ids.end(), "metric_compat") != ids.end());
  CHECK(r.overall_pass);
}

TEST_CASE("thread cap from the environment") {
  ::setenv("GEOVERIFY_THREADS", "2", 1);
  CHECK(thread_cap(16) == 2);
  ::setenv("GEOVERIFY_THREADS", "zero", 1);
  CHECK(thread_cap(16) == 16);
  ::unsetenv("GEOVERIFY_THREADS");
  CHECK(thread_cap(0) == 1);
}
