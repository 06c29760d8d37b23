#include "geoverify/geodesics.hpp"

#include <cmath>
#include <numbers>

#include "geoverify/connection.hpp"

namespace geoverify {

std::string to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::Completed:
      return "completed";
    case TraceStatus::LeftDomain:
      return "left_domain";
    case TraceStatus::BlowUp:
      break;
  }
  return "blow_up";
}

namespace {

Vector geodesic_acceleration(const MetricSpec& spec, const Vector& x, const Vector& v) {
  const Tensor3 gamma = christoffels_at(spec, std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))).gamma;
  const int d = spec.dim;
  Vector a = Vector::Zero(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(k) -= gamma(k, i, j) * v(i) * v(j);
  return a;
}

bool inside(const MetricSpec& spec, const Vector& x) {
  return x.allFinite() && inside_domain(spec, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

GeodesicTrace integrate(const MetricSpec& spec, const Vector& x0, const Vector& v0, double t_max,
                        const IntegrateOptions& opts) {
  if (x0.size() != spec.dim || v0.size() != spec.dim) throw PreconditionError("integrate: x0/v0 length != dim");
  if (!(opts.step > 0.0)) throw PreconditionError("integrate: step must be positive");
  if (!std::isfinite(t_max) || t_max == 0.0) throw PreconditionError("integrate: t_max must be finite and nonzero");
  if (!inside(spec, x0)) throw PreconditionError("integrate: x0 lies outside the domain box");

  const double h = std::copysign(opts.step, t_max);
  const double ratio = std::abs(t_max) / opts.step;
  const long n_steps = std::max(1L, std::abs(ratio - std::round(ratio)) < 1e-9 ? std::lround(ratio)
                                                                              : static_cast<long>(std::ceil(ratio)));
  GeodesicTrace tr;
  Vector x = x0, v = v0;
  tr.times.push_back(0.0);
  tr.points.push_back(x);
  tr.velocities.push_back(v);

  for (long s = 1; s <= n_steps; ++s) {
    // Stage points that fall outside the chart end the trace at the last good state.
    Vector k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    k1x = v;
    k1v = geodesic_acceleration(spec, x, v);
    const Vector x2 = x + 0.5 * h * k1x;
    if (!inside(spec, x2)) {
      tr.status = TraceStatus::LeftDomain;
      break;
    }
    k2x = v + 0.5 * h * k1v;
    k2v = geodesic_acceleration(spec, x2, k2x);
    const Vector x3 = x + 0.5 * h * k2x;
    if (!inside(spec, x3)) {
      tr.status = TraceStatus::LeftDomain;
      break;
    }
    k3x = v + 0.5 * h * k2v;
    k3v = geodesic_acceleration(spec, x3, k3x);
    const Vector x4 = x + h * k3x;
    if (!inside(spec, x4)) {
      tr.status = TraceStatus::LeftDomain;
      break;
    }
    k4x = v + h * k3v;
    k4v = geodesic_acceleration(spec, x4, k4x);
    const Vector xn = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const Vector vn = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!inside(spec, xn)) {
      tr.status = TraceStatus::LeftDomain;
      break;
    }
    x = xn;
    v = vn;
    tr.times.push_back(static_cast<double>(s) * h);
    tr.points.push_back(x);
    tr.velocities.push_back(v);
    if (!v.allFinite() || v.cwiseAbs().maxCoeff() > opts.blowup_speed) {
      tr.status = TraceStatus::BlowUp;
      break;
    }
  }
  tr.t_end = tr.times.back();
  return tr;
}

std::vector<Vector> accelerations(const GeodesicTrace& trace, const MetricSpec& spec) {
  std::vector<Vector> out;
  out.reserve(trace.points.size());
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    out.push_back(geodesic_acceleration(spec, trace.points[i], trace.velocities[i]));
  }
  return out;
}

std::vector<double> track_alpha(const GeodesicTrace& trace, const std::vector<Expr>& w, const MetricSpec& spec) {
  if (trace.points.empty()) throw PreconditionError("track_alpha: empty trace");
  if (static_cast<int>(w.size()) != spec.dim) throw PreconditionError("track_alpha: field length != dim");
  std::vector<double> out;
  out.reserve(trace.points.size());
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const auto x = as_span(trace.points[i]);
    const Vector wv = eval_vector(w, spec, x);
    out.push_back(trace.velocities[i].dot(metric_at(spec, x).g * wv));
  }
  return out;
}

std::vector<double> track_scalar(const GeodesicTrace& trace, const Expr& f, const MetricSpec& spec) {
  if (trace.points.empty()) throw PreconditionError("track_scalar: empty trace");
  std::vector<double> out;
  out.reserve(trace.points.size());
  for (const auto& p : trace.points) out.push_back(eval_value(f, as_span(p), spec.params));
  return out;
}

std::vector<double> energy(const GeodesicTrace& trace, const MetricSpec& spec) {
  std::vector<double> out;
  out.reserve(trace.points.size());
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const Vector& v = trace.velocities[i];
    out.push_back(v.dot(metric_at(spec, as_span(trace.points[i])).g * v));
  }
  return out;
}

std::vector<double> series_derivative(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 5 || t.size() != n) throw PreconditionError("series_derivative: need at least 5 aligned samples");
  const double h = t[1] - t[0];
  if (h == 0.0) throw PreconditionError("series_derivative: zero spacing");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::abs(h)) {
      throw PreconditionError("series_derivative: samples are not uniformly spaced");
    }
  }
  std::vector<double> d(n);
  d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  d[1] = (y[2] - y[0]) / (2.0 * h);
  d[n - 2] = (y[n - 1] - y[n - 3]) / (2.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
  }
  return d;
}

double ode_residual(const std::vector<double>& times, const std::vector<double>& alpha, double rhs) {
  const auto d = series_derivative(times, alpha);
  double worst = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) worst = std::max(worst, std::abs(d[i] + alpha[i] * alpha[i] - rhs));
  return worst;
}

std::string to_string(BlowupModel m) {
  switch (m) {
    case BlowupModel::Reciprocal:
      return "reciprocal";
    case BlowupModel::ExpLinear:
      return "exp_linear";
    case BlowupModel::Arctan:
      return "arctan";
    case BlowupModel::LogRatio:
      break;
  }
  return "log_ratio";
}

BlowupModel parse_blowup_model(const std::string& name) {
  for (auto m : {BlowupModel::Reciprocal, BlowupModel::ExpLinear, BlowupModel::Arctan, BlowupModel::LogRatio}) {
    if (to_string(m) == name) return m;
  }
  throw ParseError("unknown fit model '" + name + "' (reciprocal, exp_linear, arctan, log_ratio)");
}

BlowupFit fit_blowup(const std::vector<double>& times, const std::vector<double>& alpha, BlowupModel model,
                     double a) {
  const std::size_t n = alpha.size();
  if (n < 3 || times.size() != n) throw ModelMismatchError("fit_blowup: need at least 3 aligned samples");
  if (model == BlowupModel::LogRatio && !(a > 0.0)) throw ModelMismatchError("fit_blowup: log_ratio needs a > 0");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double al = alpha[i];
    switch (model) {
      case BlowupModel::Reciprocal:
        if (al == 0.0 || al * alpha[0] <= 0.0) throw ModelMismatchError("reciprocal: alpha changes sign or vanishes");
        y[i] = 1.0 / al;
        break;
      case BlowupModel::ExpLinear:
        y[i] = std::exp(al);
        break;
      case BlowupModel::Arctan:
        y[i] = std::atan(al);
        break;
      case BlowupModel::LogRatio:
        y[i] = std::log(std::abs((al + a) / (al - a)));
        break;
    }
    if (!std::isfinite(y[i])) throw ModelMismatchError(to_string(model) + ": transformed series is not finite");
  }
  const double dir = y[1] - y[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double step = y[i] - y[i - 1];
    if (step == 0.0 || (step > 0.0) != (dir > 0.0)) {
      throw ModelMismatchError(to_string(model) + ": transformed series is not strictly monotone");
    }
  }

  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += times[i];
    my += y[i];
  }
  mt /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (times[i] - mt) * (times[i] - mt);
    sty += (times[i] - mt) * (y[i] - my);
  }
  BlowupFit f;
  f.model = model;
  f.slope = sty / stt;
  f.intercept = my - f.slope * mt;
  for (std::size_t i = 0; i < n; ++i) {
    f.residual = std::max(f.residual, std::abs(y[i] - (f.slope * times[i] + f.intercept)));
  }
  constexpr double half_pi = std::numbers::pi / 2.0;
  switch (model) {
    case BlowupModel::Reciprocal:
      f.c = f.intercept / f.slope;  // 1/alpha = slope (t + c)
      f.t_singular = -f.c;
      break;
    case BlowupModel::ExpLinear:
      f.c = f.intercept;
      f.t_singular = -f.intercept / f.slope;
      break;
    case BlowupModel::Arctan:
      f.c = f.intercept;
      // alpha runs off to -inf (slope < 0) or +inf (slope > 0) going forward.
      f.t_singular = ((f.slope < 0.0 ? -half_pi : half_pi) - f.intercept) / f.slope;
      break;
    case BlowupModel::LogRatio:
      f.c = -f.intercept / f.slope;
      f.t_singular = f.c;
      break;
  }
  return f;
}

}  // namespace geoverify
