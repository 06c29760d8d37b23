#include "geoverify/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace geoverify {

MetricSpec::MetricSpec(std::string name_, std::vector<std::string> coords_, ParamMap params_)
    : name(std::move(name_)),
      dim(static_cast<int>(coords_.size())),
      coords(std::move(coords_)),
      params(std::move(params_)),
      metric(static_cast<std::size_t>(dim * dim), Expr::constant(0.0)),
      domain(static_cast<std::size_t>(dim), {-1.0, 1.0}) {}

void MetricSpec::set_g(int i, int j, Expr e) {
  metric[static_cast<std::size_t>(i * dim + j)] = e;
  metric[static_cast<std::size_t>(j * dim + i)] = std::move(e);
}

std::vector<std::string> MetricSpec::param_names() const {
  std::vector<std::string> names;
  names.reserve(params.size());
  for (const auto& [k, v] : params) names.push_back(k);
  return names;
}

Expr MetricSpec::parse(std::string_view text) const {
  const auto names = param_names();
  return Expr::parse(text, coords, names);
}

void MetricSpec::validate() const {
  if (dim <= 0) throw ParseError("spec '" + name + "': dim must be positive");
  if (dim > kMaxDim) throw ParseError("spec '" + name + "': dim exceeds " + std::to_string(kMaxDim));
  if (static_cast<int>(coords.size()) != dim) throw ParseError("spec '" + name + "': coords length != dim");
  std::set<std::string> seen;
  for (const auto& c : coords) {
    if (!seen.insert(c).second) throw ParseError("spec '" + name + "': duplicate coordinate '" + c + "'");
    if (params.count(c)) throw ParseError("spec '" + name + "': '" + c + "' is both coordinate and parameter");
  }
  if (static_cast<int>(metric.size()) != dim * dim) throw ParseError("spec '" + name + "': metric size mismatch");
  if (static_cast<int>(domain.size()) != dim) throw ParseError("spec '" + name + "': domain size mismatch");
  for (const auto& [lo, hi] : domain) {
    if (!(lo < hi)) throw ParseError("spec '" + name + "': empty domain interval");
  }
  if (xi && static_cast<int>(xi->size()) != dim) throw ParseError("spec '" + name + "': xi length != dim");
  if (p0 && static_cast<int>(p0->size()) != dim) throw ParseError("spec '" + name + "': p0 length != dim");
  if (S) {
    for (const auto& e : *S) {
      const auto& [i, j, k] = e.index;
      if (!(0 <= i && i < j && j < k && k < dim)) {
        throw ParseError("spec '" + name + "': S entries need strictly increasing indices inside the chart");
      }
    }
  }
}

Matrix invert_metric(const Matrix& g) {
  const double scale = g.cwiseAbs().maxCoeff();
  Eigen::FullPivLU<Matrix> lu(g);
  const double det = lu.determinant();
  if (scale == 0.0 || std::abs(det) < 1e-12 * std::pow(scale, static_cast<double>(g.rows()))) {
    throw DegenerateMetricError("degenerate metric: |det g| = " + std::to_string(std::abs(det)));
  }
  Matrix inv = lu.inverse();
  return 0.5 * (inv + inv.transpose());
}

MetricValue metric_at(const MetricSpec& spec, std::span<const double> point) {
  const int d = spec.dim;
  MetricValue mv;
  mv.g.resize(d, d);
  mv.dg.resize(d, d, d);
  mv.d2g.resize(d, d, d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Jet2 jet = eval_jet2(spec.g(i, j), point, spec.params);
      mv.g(i, j) = mv.g(j, i) = jet.value;
      for (int k = 0; k < d; ++k) {
        mv.dg(i, j, k) = mv.dg(j, i, k) = jet.gradient(k);
        for (int l = 0; l < d; ++l) {
          const double h = 0.5 * (jet.hessian(k, l) + jet.hessian(l, k));
          mv.d2g(i, j, k, l) = mv.d2g(j, i, k, l) = h;
        }
      }
    }
  }
  mv.g_inv = invert_metric(mv.g);
  return mv;
}

Signature signature_of(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  const double tol = 1e-10 * scale;
  Signature s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (scale == 0.0 || std::abs(ev(i)) <= tol) {
      ++s.n_zero;
    } else if (ev(i) < 0.0) {
      ++s.n_neg;
    } else {
      ++s.n_pos;
    }
  }
  return s;
}

Signature signature_at(const MetricSpec& spec, std::span<const double> point) {
  Matrix g(spec.dim, spec.dim);
  for (int i = 0; i < spec.dim; ++i)
    for (int j = 0; j < spec.dim; ++j) g(i, j) = eval_value(spec.g(i, j), point, spec.params);
  return signature_of(g);
}

Vector lower(const Vector& v, const Matrix& g) { return g * v; }

Vector raise(const Vector& omega, const Matrix& g) { return invert_metric(g) * omega; }

Matrix WittFrame::basis() const {
  const auto d = p.size();
  Matrix b(d, e.cols() + 2);
  b.col(0) = p;
  b.middleCols(1, e.cols()) = e;
  b.col(e.cols() + 1) = q;
  return b;
}

Matrix witt_gram(int n) {
  Matrix w = Matrix::Zero(n + 2, n + 2);
  w(0, n + 1) = w(n + 1, 0) = 1.0;
  for (int i = 1; i <= n; ++i) w(i, i) = 1.0;
  return w;
}

WittFrame witt_frame(const Matrix& g, const Vector& p) {
  const auto d = g.rows();
  if (p.size() != d) throw PreconditionError("witt_frame: p has wrong length");
  if (p.norm() == 0.0) throw PreconditionError("witt_frame: p is zero");
  if (!is_lorentzian(signature_of(g))) throw PreconditionError("witt_frame: metric is not Lorentzian");
  auto dot = [&g](const Vector& a, const Vector& b) { return a.dot(g * b); };
  const double scale = std::max(1.0, p.squaredNorm() * g.cwiseAbs().maxCoeff());
  if (std::abs(dot(p, p)) > 1e-10 * scale) throw PreconditionError("witt_frame: p is not isotropic");

  // Candidate with the largest pairing against p; ties resolved by coordinate order.
  const Vector gp = g * p;
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < d; ++k)
    if (std::abs(gp(k)) > std::abs(gp(best))) best = k;
  Vector q = Vector::Unit(d, best) / gp(best);
  q -= 0.5 * dot(q, q) * p;

  WittFrame frame;
  frame.p = p;
  frame.q = q;
  frame.e.resize(d, d - 2);
  Eigen::Index count = 0;
  for (Eigen::Index c = 0; c < d && count < d - 2; ++c) {
    Vector w = Vector::Unit(d, c);
    for (int pass = 0; pass < 2; ++pass) {
      w -= dot(w, q) * p + dot(w, p) * q;
      for (Eigen::Index i = 0; i < count; ++i) w -= dot(w, frame.e.col(i)) * frame.e.col(i);
    }
    const double n2 = dot(w, w);
    if (n2 <= 1e-10) continue;
    frame.e.col(count++) = w / std::sqrt(n2);
  }
  if (count != d - 2) throw PreconditionError("witt_frame: could not complete the screen basis");
  return frame;
}

WittFrame witt_frame_at(const MetricSpec& spec, std::span<const double> point, const Vector& p) {
  Matrix g(spec.dim, spec.dim);
  for (int i = 0; i < spec.dim; ++i)
    for (int j = 0; j < spec.dim; ++j) g(i, j) = eval_value(spec.g(i, j), point, spec.params);
  return witt_frame(g, p);
}

std::vector<double> sample_point(const MetricSpec& spec, SplitMix64& rng, double margin) {
  std::vector<double> x(static_cast<std::size_t>(spec.dim));
  for (int i = 0; i < spec.dim; ++i) {
    const auto [lo, hi] = spec.domain[static_cast<std::size_t>(i)];
    x[static_cast<std::size_t>(i)] = rng.uniform(lo + margin, hi - margin);
  }
  return x;
}

bool inside_domain(const MetricSpec& spec, std::span<const double> point, double margin) {
  for (int i = 0; i < spec.dim; ++i) {
    const auto [lo, hi] = spec.domain[static_cast<std::size_t>(i)];
    const double x = point[static_cast<std::size_t>(i)];
    if (!(x >= lo + margin && x <= hi - margin)) return false;
  }
  return true;
}

Vector eval_vector(const std::vector<Expr>& exprs, const MetricSpec& spec, std::span<const double> point) {
  Vector v(static_cast<Eigen::Index>(exprs.size()));
  for (std::size_t i = 0; i < exprs.size(); ++i) v(static_cast<Eigen::Index>(i)) = eval_value(exprs[i], point, spec.params);
  return v;
}

}  // namespace geoverify
