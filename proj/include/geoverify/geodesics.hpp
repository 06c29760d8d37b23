#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoverify/geometry.hpp"

namespace geoverify {

enum class TraceStatus { Completed, LeftDomain, BlowUp };
std::string to_string(TraceStatus s);

/// Sampled Levi-Civita geodesic. `alpha` is filled by the caller (track_*).
struct GeodesicTrace {
  std::vector<double> times;
  std::vector<Vector> points;
  std::vector<Vector> velocities;
  std::vector<double> alpha;
  TraceStatus status = TraceStatus::Completed;
  double t_end = 0.0;  // last accepted time
};

struct IntegrateOptions {
  double step = 1e-3;
  double blowup_speed = 1e8;  // max-abs velocity component
};

/// Fixed-step RK4 for x'' + Gamma(x', x') = 0.  A negative `t_max` integrates
/// backwards.  Stops before leaving the domain box or once |x'| exceeds the guard.
GeodesicTrace integrate(const MetricSpec& spec, const Vector& x0, const Vector& v0, double t_max,
                        const IntegrateOptions& opts = {});

/// x''^k = -Gamma^k_ij x'^i x'^j along the trace.
std::vector<Vector> accelerations(const GeodesicTrace& trace, const MetricSpec& spec);

/// g(x', w(x)) at every sample.
std::vector<double> track_alpha(const GeodesicTrace& trace, const std::vector<Expr>& w, const MetricSpec& spec);
/// f(x) at every sample.
std::vector<double> track_scalar(const GeodesicTrace& trace, const Expr& f, const MetricSpec& spec);
/// g(x', x') at every sample.
std::vector<double> energy(const GeodesicTrace& trace, const MetricSpec& spec);

/// Derivative of a uniformly sampled series: 4th-order central inside, 2nd-order
/// central next to the ends, one-sided 2nd-order at the ends.
std::vector<double> series_derivative(const std::vector<double>& times, const std::vector<double>& y);

/// max |alpha' + alpha^2 - rhs|.
double ode_residual(const std::vector<double>& times, const std::vector<double>& alpha, double rhs);

enum class BlowupModel { Reciprocal, ExpLinear, Arctan, LogRatio };
std::string to_string(BlowupModel m);
BlowupModel parse_blowup_model(const std::string& name);

/// Least-squares line y = slope t + intercept through the transformed series:
///   reciprocal  y = 1/alpha              (alpha = 1/(t + c))
///   exp_linear  y = e^alpha              (e^alpha = a t + c)
///   arctan      y = arctan(alpha)        (arctan alpha = -t + c)
///   log_ratio   y = ln|(alpha+a)/(alpha-a)|  (= 2a(t - c))
struct BlowupFit {
  BlowupModel model = BlowupModel::Reciprocal;
  double slope = 0.0;
  double intercept = 0.0;
  double c = 0.0;           // model constant as written above
  double residual = 0.0;    // max |y - line|
  double t_singular = 0.0;  // where the model's alpha leaves every compact set
};

/// Throws ModelMismatchError when the transformed series is not strictly monotone
/// or leaves the model's domain.
BlowupFit fit_blowup(const std::vector<double>& times, const std::vector<double>& alpha, BlowupModel model,
                     double a = 0.0);

}  // namespace geoverify
