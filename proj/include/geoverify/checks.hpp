#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geoverify/geometry.hpp"

namespace geoverify {

using Points = std::span<const std::vector<double>>;

/// Residual evaluators; each returns the max over `points` of the relevant
/// component-wise deviation.  The check passes when residual <= tolerance.
namespace residuals {

double signature(const MetricSpec& spec, Points points);
double metric_compat(const MetricSpec& spec, Points points);
double torsion_closed_form(const MetricSpec& spec, Points points);
double twistor_free(const MetricSpec& spec, Points points);
double nabla_xi(const MetricSpec& spec, Points points);
double nabla_S(const MetricSpec& spec, Points points);
double bianchi_display(const MetricSpec& spec, Points points);
double bianchi_general(const MetricSpec& spec, Points points);
double lc_bianchi(const MetricSpec& spec, Points points);

/// The five conditions on p = xi: the nabla^g p display, then geodesic,
/// expansion, shear and twist on the screen of a Witt frame.
double kundt_p_condition(const MetricSpec& spec, Points points);
double kundt_geodesic(const MetricSpec& spec, Points points);
double kundt_expansion(const MetricSpec& spec, Points points);
double kundt_shear(const MetricSpec& spec, Points points);
double kundt_twist(const MetricSpec& spec, Points points);

double parallel_p0(const MetricSpec& spec, Points points);
double p0_exact(const MetricSpec& spec, Points points);
double nabla_R_fd(const MetricSpec& spec, Points points);
double torsion_norm_zero(const MetricSpec& spec, Points points);

double identity_dT1(const MetricSpec& spec, Points points);
double identity_dT2(const MetricSpec& spec, Points points);
double identity_action(const MetricSpec& spec, Points points);
double lemma1_uniform(const MetricSpec& spec, Points points);
double lemma1_holds(const MetricSpec& spec, Points points);

}  // namespace residuals

struct CheckDef {
  std::string id;
  std::string description;
  std::string anchor;
  double tolerance;
  std::function<double(const MetricSpec&, Points)> eval;
};

const std::vector<CheckDef>& check_registry();
/// Throws ParseError for unknown ids.
const CheckDef& find_check(const std::string& id);

/// Checks run for a spec without a manifest.
std::vector<std::string> default_checks(const MetricSpec& spec);

/// Vector field values v(k) and partials dv(k,m) = d_m v^k.
void vector_jet(const std::vector<Expr>& field, const MetricSpec& spec, std::span<const double> point, Vector& v,
                Matrix& dv);

}  // namespace geoverify
