#include "geoverify/connection.hpp"

#include <cmath>

namespace geoverify {

namespace {

std::size_t flat_index(int dim, std::initializer_list<int> idx) {
  std::size_t flat = 0;
  for (int i : idx) flat = flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return flat;
}

template <std::size_t N>
std::size_t flat_index(int dim, const std::array<Eigen::Index, N>& idx) {
  std::size_t flat = 0;
  for (auto i : idx) flat = flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return flat;
}

template <std::size_t N>
std::array<Eigen::Index, N + 1> append(const std::array<Eigen::Index, N>& idx, Eigen::Index last) {
  std::array<Eigen::Index, N + 1> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = idx[i];
  out[N] = last;
  return out;
}

template <std::size_t N>
std::array<Eigen::Index, N + 1> prepend(Eigen::Index first, const std::array<Eigen::Index, N>& idx) {
  std::array<Eigen::Index, N + 1> out;
  out[0] = first;
  for (std::size_t i = 0; i < N; ++i) out[i + 1] = idx[i];
  return out;
}

int perm_sign3(int a, int b, int c) { return permutation_sign<3>({a, b, c}); }

}  // namespace

CovariantField::CovariantField(int dim_, int rank_)
    : dim(dim_), rank(rank_), components(static_cast<std::size_t>(std::pow(dim_, rank_)), Expr::constant(0.0)) {}

Expr& CovariantField::at(std::initializer_list<int> idx) { return components[flat_index(dim, idx)]; }
const Expr& CovariantField::at(std::initializer_list<int> idx) const { return components[flat_index(dim, idx)]; }

CovariantField CovariantField::metric(const MetricSpec& spec) {
  CovariantField f(spec.dim, 2);
  f.components = spec.metric;
  return f;
}

CovariantField CovariantField::one_form(std::vector<Expr> comps) {
  CovariantField f(static_cast<int>(comps.size()), 1);
  f.components = std::move(comps);
  return f;
}

CovariantField CovariantField::two_form(int dim, const std::vector<TwoFormEntry>& entries) {
  CovariantField f(dim, 2);
  for (const auto& e : entries) {
    const auto [i, j] = e.index;
    f.at({i, j}) = e.expr;
    f.at({j, i}) = -e.expr;
  }
  return f;
}

CovariantField CovariantField::three_form(int dim, const std::vector<ThreeFormEntry>& entries) {
  CovariantField f(dim, 3);
  for (const auto& e : entries) {
    const auto [i, j, k] = e.index;
    const int perms[6][3] = {{i, j, k}, {j, k, i}, {k, i, j}, {j, i, k}, {i, k, j}, {k, j, i}};
    for (const auto& p : perms) {
      const int s = perm_sign3(p[0], p[1], p[2]) * perm_sign3(i, j, k);
      f.at({p[0], p[1], p[2]}) = s > 0 ? e.expr : -e.expr;
    }
  }
  return f;
}

template <int R>
FieldJet<R> field_jet(const CovariantField& field, const MetricSpec& spec, std::span<const double> point) {
  if (field.rank != R) throw PreconditionError("field rank mismatch");
  if (field.dim != spec.dim) throw PreconditionError("field dimension mismatch");
  const int d = spec.dim;
  FieldJet<R> out{zero_tensor<R>(d), zero_tensor<R + 1>(d)};
  for_each_index<R>(d, [&](const std::array<Eigen::Index, R>& idx) {
    const Expr& e = field.components[flat_index<R>(d, idx)];
    if (e.is_zero()) return;
    const Jet2 jet = eval_jet2(e, point, spec.params);
    out.value(idx) = jet.value;
    for (int m = 0; m < d; ++m) out.gradient(append<R>(idx, m)) = jet.gradient(m);
  });
  return out;
}

TorsionJet torsion_jet_at(const MetricSpec& spec, std::span<const double> point) {
  const int d = spec.dim;
  TorsionJet t{Vector::Zero(d), Matrix::Zero(d, d), zero_tensor<3>(d), zero_tensor<4>(d)};
  if (spec.xi) {
    for (int k = 0; k < d; ++k) {
      const Expr& e = (*spec.xi)[static_cast<std::size_t>(k)];
      if (e.is_zero()) continue;
      const Jet2 jet = eval_jet2(e, point, spec.params);
      t.xi(k) = jet.value;
      for (int m = 0; m < d; ++m) t.dxi(k, m) = jet.gradient(m);
    }
  }
  if (spec.S) {
    const FieldJet<3> s = field_jet<3>(CovariantField::three_form(d, *spec.S), spec, point);
    t.S = s.value;
    t.dS = s.gradient;
  }
  return t;
}

Tensor3 contorsion_lowered(const Matrix& g, const Vector& xi_up, const Tensor3& S) {
  const auto d = g.rows();
  const Vector xi = g * xi_up;
  Tensor3 a(d, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l) a(i, j, l) = g(i, j) * xi(l) - xi(j) * g(i, l) + 0.5 * S(i, j, l);
  return a;
}

namespace {

Tensor3 raise_last(const Tensor3& low, const Matrix& g_inv) {
  const auto d = g_inv.rows();
  Tensor3 up = zero_tensor<3>(d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < d; ++l) s += g_inv(k, l) * low(i, j, l);
        up(k, i, j) = s;
      }
  return up;
}

Tensor3 christoffel_lowered(const MetricValue& mv) {
  const int d = mv.dim();
  Tensor3 c(d, d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) c(i, j, l) = 0.5 * (mv.dg(j, l, i) + mv.dg(i, l, j) - mv.dg(i, j, l));
  return c;
}

}  // namespace

ConnectionValue christoffels_at(const MetricSpec& spec, std::span<const double> point) {
  const MetricValue mv = metric_at(spec, point);
  return {raise_last(christoffel_lowered(mv), mv.g_inv), zero_tensor<3>(spec.dim)};
}

ConnectionValue full_connection_at(const MetricSpec& spec, std::span<const double> point) {
  const MetricValue mv = metric_at(spec, point);
  ConnectionValue c{raise_last(christoffel_lowered(mv), mv.g_inv), zero_tensor<3>(spec.dim)};
  if (spec.has_torsion()) {
    const TorsionJet t = torsion_jet_at(spec, point);
    c.A = raise_last(contorsion_lowered(mv.g, t.xi, t.S), mv.g_inv);
  }
  return c;
}

ConnectionJet connection_jet_at(const MetricSpec& spec, std::span<const double> point, bool use_full) {
  const int d = spec.dim;
  ConnectionJet jet;
  jet.metric = metric_at(spec, point);
  const MetricValue& mv = jet.metric;

  // Lowered coefficients L_ijl = g(nabla_i e_j, e_l) and their partials dL(i,j,l,m).
  Tensor3 low = christoffel_lowered(mv);
  Tensor4 dlow(d, d, d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
          dlow(i, j, l, m) = 0.5 * (mv.d2g(j, l, i, m) + mv.d2g(i, l, j, m) - mv.d2g(i, j, l, m));

  if (use_full && spec.has_torsion()) {
    const TorsionJet t = torsion_jet_at(spec, point);
    const Vector xi = mv.g * t.xi;
    Matrix dxi_low(d, d);  // dxi_low(l,m) = d_m xi_l
    for (int l = 0; l < d; ++l)
      for (int m = 0; m < d; ++m) {
        double s = 0.0;
        for (int n = 0; n < d; ++n) s += mv.dg(l, n, m) * t.xi(n) + mv.g(l, n) * t.dxi(n, m);
        dxi_low(l, m) = s;
      }
    low += contorsion_lowered(mv.g, t.xi, t.S);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          for (int m = 0; m < d; ++m) {
            dlow(i, j, l, m) += mv.dg(i, j, m) * xi(l) + mv.g(i, j) * dxi_low(l, m) - dxi_low(j, m) * mv.g(i, l) -
                                xi(j) * mv.dg(i, l, m) + 0.5 * t.dS(i, j, l, m);
          }
  }

  // d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
  Tensor3 dginv(d, d, d);
  for (int m = 0; m < d; ++m) {
    Matrix dg_m(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) dg_m(a, b) = mv.dg(a, b, m);
    const Matrix dinv = -mv.g_inv * dg_m * mv.g_inv;
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) dginv(k, l, m) = dinv(k, l);
  }

  jet.coeff = raise_last(low, mv.g_inv);
  jet.dcoeff = zero_tensor<4>(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int m = 0; m < d; ++m) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += dginv(k, l, m) * low(i, j, l) + mv.g_inv(k, l) * dlow(i, j, l, m);
          jet.dcoeff(k, i, j, m) = s;
        }
  return jet;
}

template <int R>
Eigen::Tensor<double, R + 1> covariant_derivative(const FieldJet<R>& field, const Tensor3& coeff) {
  const Eigen::Index d = coeff.dimension(0);
  Eigen::Tensor<double, R + 1> out = zero_tensor<R + 1>(d);
  for_each_index<R>(d, [&](const std::array<Eigen::Index, R>& idx) {
    for (Eigen::Index m = 0; m < d; ++m) {
      double v = field.gradient(append<R>(idx, m));
      for (std::size_t slot = 0; slot < static_cast<std::size_t>(R); ++slot) {
        auto moved = idx;
        for (Eigen::Index s = 0; s < d; ++s) {
          moved[slot] = s;
          v -= coeff(s, m, idx[slot]) * field.value(moved);
        }
      }
      out(prepend<R>(m, idx)) = v;
    }
  });
  return out;
}

Matrix covariant_derivative_vector(const Vector& v, const Matrix& dv, const Tensor3& coeff) {
  const auto d = v.size();
  Matrix out(d, d);
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index k = 0; k < d; ++k) {
      double s = dv(k, m);
      for (Eigen::Index j = 0; j < d; ++j) s += coeff(k, m, j) * v(j);
      out(m, k) = s;
    }
  return out;
}

Tensor3 torsion_from_coefficients(const Tensor3& coeff, const Matrix& g) {
  const auto d = g.rows();
  Tensor3 t(d, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) s += g(l, k) * (coeff(k, i, j) - coeff(k, j, i));
        t(i, j, l) = s;
      }
  return t;
}

Tensor3 torsion_at(const MetricSpec& spec, std::span<const double> point) {
  const MetricValue mv = metric_at(spec, point);
  return torsion_from_coefficients(full_connection_at(spec, point).coefficients(), mv.g);
}

Tensor3 twistor_free_torsion(const Matrix& g, const Vector& xi_up, const Tensor3& S) {
  const auto d = g.rows();
  const Vector xi = g * xi_up;
  Tensor3 t(d, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l) t(i, j, l) = xi(i) * g(j, l) - xi(j) * g(i, l) + S(i, j, l);
  return t;
}

CurvatureValue curvature_from_jet(const ConnectionJet& jet) {
  const int d = jet.dim();
  const Tensor3& c = jet.coeff;
  CurvatureValue r{zero_tensor<4>(d), zero_tensor<4>(d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = jet.dcoeff(l, j, k, i) - jet.dcoeff(l, i, k, j);
          for (int m = 0; m < d; ++m) s += c(l, i, m) * c(m, j, k) - c(l, j, m) * c(m, i, k);
          r.up(i, j, k, l) = s;
        }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int n = 0; n < d; ++n) s += jet.metric.g(l, n) * r.up(i, j, k, n);
          r.lowered(i, j, k, l) = s;
        }
  return r;
}

CurvatureValue curvature_at(const MetricSpec& spec, std::span<const double> point, bool use_full) {
  return curvature_from_jet(connection_jet_at(spec, point, use_full));
}

template <int R>
Eigen::Tensor<double, R + 1> exterior_derivative(const FieldJet<R>& form) {
  const Eigen::Index d = form.value.dimension(0);
  Eigen::Tensor<double, R + 1> out = zero_tensor<R + 1>(d);
  for_each_index<R + 1>(d, [&](const std::array<Eigen::Index, R + 1>& idx) {
    double s = 0.0;
    for (std::size_t m = 0; m <= static_cast<std::size_t>(R); ++m) {
      std::array<Eigen::Index, R + 1> rest{};
      std::size_t pos = 0;
      for (std::size_t q = 0; q <= static_cast<std::size_t>(R); ++q)
        if (q != m) rest[pos++] = idx[q];
      rest[static_cast<std::size_t>(R)] = idx[m];  // derivative direction
      s += ((m % 2 == 0) ? 1.0 : -1.0) * form.gradient(rest);
    }
    out(idx) = s;
  });
  return out;
}

Tensor5 fd_nabla_curvature(const MetricSpec& spec, std::span<const double> point, double step, bool use_full) {
  if (!inside_domain(spec, point, step)) {
    throw PreconditionError("fd_nabla_curvature: point closer than one step to the domain boundary");
  }
  const int d = spec.dim;
  const ConnectionJet here = connection_jet_at(spec, point, use_full);
  const CurvatureValue r0 = curvature_from_jet(here);
  std::vector<double> x(point.begin(), point.end());
  Tensor5 out = zero_tensor<5>(d);
  for (int m = 0; m < d; ++m) {
    const double x0 = x[static_cast<std::size_t>(m)];
    x[static_cast<std::size_t>(m)] = x0 + step;
    const Tensor4 plus = curvature_at(spec, x, use_full).lowered;
    x[static_cast<std::size_t>(m)] = x0 - step;
    const Tensor4 minus = curvature_at(spec, x, use_full).lowered;
    x[static_cast<std::size_t>(m)] = x0;
    for_each_index<4>(d, [&](const std::array<Eigen::Index, 4>& idx) {
      double v = (plus(idx) - minus(idx)) / (2.0 * step);
      for (std::size_t slot = 0; slot < 4; ++slot) {
        auto moved = idx;
        for (Eigen::Index s = 0; s < d; ++s) {
          moved[slot] = s;
          v -= here.coeff(s, m, idx[slot]) * r0.lowered(moved);
        }
      }
      out(prepend<4>(m, idx)) = v;
    });
  }
  return out;
}

template FieldJet<1> field_jet<1>(const CovariantField&, const MetricSpec&, std::span<const double>);
template FieldJet<2> field_jet<2>(const CovariantField&, const MetricSpec&, std::span<const double>);
template FieldJet<3> field_jet<3>(const CovariantField&, const MetricSpec&, std::span<const double>);
template FieldJet<4> field_jet<4>(const CovariantField&, const MetricSpec&, std::span<const double>);
template Eigen::Tensor<double, 2> covariant_derivative<1>(const FieldJet<1>&, const Tensor3&);
template Eigen::Tensor<double, 3> covariant_derivative<2>(const FieldJet<2>&, const Tensor3&);
template Eigen::Tensor<double, 4> covariant_derivative<3>(const FieldJet<3>&, const Tensor3&);
template Eigen::Tensor<double, 5> covariant_derivative<4>(const FieldJet<4>&, const Tensor3&);
template Eigen::Tensor<double, 2> exterior_derivative<1>(const FieldJet<1>&);
template Eigen::Tensor<double, 3> exterior_derivative<2>(const FieldJet<2>&);
template Eigen::Tensor<double, 4> exterior_derivative<3>(const FieldJet<3>&);

}  // namespace geoverify
