#include "geoverify/torsion.hpp"

#include <algorithm>
#include <cmath>

namespace geoverify {

namespace {

Tensor4 cyclic_first_three(const Tensor4& t) {
  const auto d = t.dimension(0);
  Tensor4 out(d, d, d, d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y)
      for (Eigen::Index z = 0; z < d; ++z)
        for (Eigen::Index w = 0; w < d; ++w) out(x, y, z, w) = t(x, y, z, w) + t(y, z, x, w) + t(z, x, y, w);
  return out;
}

/// result(X,Y,Z,W) = a(a(X,Y), Z, W) with the middle index raised by g_inv.
Tensor4 compose(const Tensor3& a, const Matrix& g_inv) {
  const auto d = g_inv.rows();
  Matrix flat_left(d * d, d);   // (XY, n)
  Matrix flat_right(d, d * d);  // (m, ZW)
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y)
      for (Eigen::Index n = 0; n < d; ++n) {
        flat_left(x * d + y, n) = a(x, y, n);
        flat_right(n, x * d + y) = a(n, x, y);
      }
  const Matrix prod = flat_left * g_inv * flat_right;
  Tensor4 out(d, d, d, d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y)
      for (Eigen::Index z = 0; z < d; ++z)
        for (Eigen::Index w = 0; w < d; ++w) out(x, y, z, w) = prod(x * d + y, z * d + w);
  return out;
}

}  // namespace

FourForm::FourForm(int dim) : dim_(dim) {
  std::size_t count = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k)
        for (int l = k + 1; l < dim; ++l) ++count;
  values_.assign(count, 0.0);
}

std::size_t FourForm::slot(int i, int j, int k, int l) const {
  // Lexicographic rank of the increasing tuple (i,j,k,l).
  std::size_t s = 0;
  for (int a = 0; a < dim_; ++a)
    for (int b = a + 1; b < dim_; ++b)
      for (int c = b + 1; c < dim_; ++c)
        for (int e = c + 1; e < dim_; ++e) {
          if (a == i && b == j && c == k && e == l) return s;
          ++s;
        }
  return s;
}

FourForm FourForm::from_tensor(const Tensor4& t) {
  const int d = static_cast<int>(t.dimension(0));
  FourForm f(d);
  std::size_t s = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
          std::array<int, 4> idx{i, j, k, l};
          double acc = 0.0;
          std::sort(idx.begin(), idx.end());
          do {
            acc += permutation_sign<4>(idx) * t(idx[0], idx[1], idx[2], idx[3]);
          } while (std::next_permutation(idx.begin(), idx.end()));
          f.values_[s++] = acc / 24.0;
        }
  return f;
}

double FourForm::at(int i, int j, int k, int l) const {
  std::array<int, 4> idx{i, j, k, l};
  const int sign = permutation_sign<4>(idx);
  if (sign == 0) return 0.0;
  std::sort(idx.begin(), idx.end());
  return sign * values_[slot(idx[0], idx[1], idx[2], idx[3])];
}

Tensor4 FourForm::full() const {
  Tensor4 t = zero_tensor<4>(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) t(i, j, k, l) = at(i, j, k, l);
  return t;
}

double FourForm::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Tensor3 vectorial_torsion(const Matrix& g, const Vector& xi_up) {
  return twistor_free_torsion(g, xi_up, zero_tensor<3>(g.rows()));
}

TorsionDecomposition decompose_torsion(const Tensor3& T, const Matrix& g) {
  const auto d = g.rows();
  if (d < 2) throw PreconditionError("decompose_torsion: dimension must be at least 2");
  const double scale = std::max(1.0, max_abs<3>(T));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l)
        if (std::abs(T(i, j, l) + T(j, i, l)) > 1e-10 * scale) {
          throw PreconditionError("decompose_torsion: T is not antisymmetric in its first two slots");
        }
  const Matrix g_inv = invert_metric(g);
  // The trace g^{il} T_ilj of (X ^ Y)xi equals -(d-1) xi_j.
  Vector xi_low = Vector::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index l = 0; l < d; ++l) s += g_inv(i, l) * T(i, j, l);
    xi_low(j) = -s / static_cast<double>(d - 1);
  }
  TorsionDecomposition out;
  out.xi = g_inv * xi_low;
  out.skew = Tensor3(d, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l) out.skew(i, j, l) = (T(i, j, l) + T(j, l, i) + T(l, i, j)) / 3.0;
  out.twist = T - vectorial_torsion(g, out.xi) - out.skew;
  return out;
}

double tensor_inner(const Tensor3& a, const Tensor3& b, const Matrix& g_inv) {
  const auto d = g_inv.rows();
  // Raise the slots of b one at a time.
  Tensor3 r1(d, d, d), r2(d, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l) {
        double s = 0.0;
        for (Eigen::Index n = 0; n < d; ++n) s += g_inv(i, n) * b(n, j, l);
        r1(i, j, l) = s;
      }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l) {
        double s = 0.0;
        for (Eigen::Index n = 0; n < d; ++n) s += g_inv(j, n) * r1(i, n, l);
        r2(i, j, l) = s;
      }
  double total = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l) {
        double s = 0.0;
        for (Eigen::Index n = 0; n < d; ++n) s += g_inv(l, n) * r2(i, j, n);
        total += a(i, j, l) * s;
      }
  return total;
}

Tensor4 sigma_tau_tensor(const Tensor3& tau, const Matrix& g_inv) {
  return cyclic_first_three(compose(tau, g_inv));
}

FourForm sigma_tau(const Tensor3& tau, const Matrix& g) {
  return FourForm::from_tensor(sigma_tau_tensor(tau, invert_metric(g)));
}

Matrix form_endomorphism(const Tensor3& tau, const Matrix& g_inv, int m) {
  const auto d = g_inv.rows();
  Matrix out(d, d);
  for (Eigen::Index s = 0; s < d; ++s)
    for (Eigen::Index i = 0; i < d; ++i) {
      double v = 0.0;
      for (Eigen::Index n = 0; n < d; ++n) v += g_inv(s, n) * tau(m, i, n);
      out(s, i) = v;
    }
  return out;
}

template <int R>
Eigen::Tensor<double, R> form_action(const Matrix& lambda, const Eigen::Tensor<double, R>& omega) {
  const auto d = lambda.rows();
  Eigen::Tensor<double, R> out = zero_tensor<R>(d);
  for_each_index<R>(d, [&](const std::array<Eigen::Index, R>& idx) {
    double v = 0.0;
    for (std::size_t slot = 0; slot < static_cast<std::size_t>(R); ++slot) {
      auto moved = idx;
      for (Eigen::Index s = 0; s < d; ++s) {
        moved[slot] = s;
        v -= lambda(s, idx[slot]) * omega(moved);
      }
    }
    out(idx) = v;
  });
  return out;
}

template Eigen::Tensor<double, 1> form_action<1>(const Matrix&, const Eigen::Tensor<double, 1>&);
template Eigen::Tensor<double, 2> form_action<2>(const Matrix&, const Eigen::Tensor<double, 2>&);
template Eigen::Tensor<double, 3> form_action<3>(const Matrix&, const Eigen::Tensor<double, 3>&);
template Eigen::Tensor<double, 4> form_action<4>(const Matrix&, const Eigen::Tensor<double, 4>&);

bool is_g_antisymmetric(const Matrix& lambda, const Matrix& g, double tol) {
  const Matrix gl = g * lambda;
  return (gl + gl.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, gl.cwiseAbs().maxCoeff());
}

double torsion_norm(const Tensor3& S, const Matrix& g) {
  return tensor_inner(S, S, invert_metric(g)) / 6.0;
}

IdentityResiduals identity_suite(const MetricSpec& spec, std::span<const std::vector<double>> points) {
  if (spec.xi) throw PreconditionError("identity_suite: spec must carry skew torsion only");
  const int d = spec.dim;
  IdentityResiduals res;
  const CovariantField tau_field = spec.S ? CovariantField::three_form(d, *spec.S) : CovariantField(d, 3);
  for (const auto& x : points) {
    const MetricValue mv = metric_at(spec, x);
    const FieldJet<3> tau = field_jet<3>(tau_field, spec, x);
    const ConnectionValue conn = full_connection_at(spec, x);
    const Tensor4 nabla = covariant_derivative<3>(tau, conn.coefficients());
    const Tensor4 nabla_g = covariant_derivative<3>(tau, conn.gamma);
    const Tensor4 sigma = sigma_tau_tensor(tau.value, mv.g_inv);
    const Tensor4 dtau = exterior_derivative<3>(tau);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) {
            const double rhs1 = nabla(a, b, c, e) + nabla(b, c, a, e) + nabla(c, a, b, e) - nabla(e, a, b, c) +
                                2.0 * sigma(a, b, c, e);
            res.d_tau = std::max(res.d_tau, std::abs(dtau(a, b, c, e) - rhs1));
            const double rhs2 = nabla_g(a, b, c, e) - 0.5 * sigma(a, b, c, e);
            res.nabla_tau = std::max(res.nabla_tau, std::abs(nabla(a, b, c, e) - rhs2));
          }
    for (int m = 0; m < d; ++m) {
      const Tensor3 act = form_action<3>(form_endomorphism(tau.value, mv.g_inv, m), tau.value);
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e)
            res.action = std::max(res.action, std::abs(act(b, c, e) + sigma(m, b, c, e)));
    }
  }
  return res;
}

Lemma1Result lemma1_check(const MetricSpec& spec, std::span<const std::vector<double>> points, double threshold) {
  if (spec.xi) throw PreconditionError("lemma1_check: spec must carry skew torsion only");
  const int d = spec.dim;
  Lemma1Result r;
  const CovariantField tau_field = spec.S ? CovariantField::three_form(d, *spec.S) : CovariantField(d, 3);
  for (const auto& x : points) {
    const MetricValue mv = metric_at(spec, x);
    const FieldJet<3> tau = field_jet<3>(tau_field, spec, x);
    const ConnectionValue conn = full_connection_at(spec, x);
    r.nabla_tau = std::max(r.nabla_tau, max_abs<4>(covariant_derivative<3>(tau, conn.coefficients())));
    r.nabla_g_tau = std::max(r.nabla_g_tau, max_abs<4>(covariant_derivative<3>(tau, conn.gamma)));
    r.sigma = std::max(r.sigma, sigma_tau(tau.value, mv.g).max_abs());
    r.d_tau = std::max(r.d_tau, max_abs<4>(exterior_derivative<3>(tau)));
  }
  r.cond1 = r.nabla_tau < threshold && r.d_tau < threshold;
  r.cond2 = r.nabla_tau < threshold && r.sigma < threshold;
  r.cond3 = r.nabla_g_tau < threshold && r.sigma < threshold;
  return r;
}

TorsionParallelism torsion_parallelism_at(const MetricSpec& spec, std::span<const double> point) {
  const ConnectionValue conn = full_connection_at(spec, point);
  const Tensor3 coeff = conn.coefficients();
  const TorsionJet t = torsion_jet_at(spec, point);
  TorsionParallelism out;
  out.nabla_xi = covariant_derivative_vector(t.xi, t.dxi, coeff).cwiseAbs().maxCoeff();
  out.nabla_S = max_abs<4>(covariant_derivative<3>(FieldJet<3>{t.S, t.dS}, coeff));
  return out;
}

BianchiResult bianchi_residual(const MetricSpec& spec, std::span<const std::vector<double>> points) {
  const int d = spec.dim;
  BianchiResult out;
  for (const auto& x : points) {
    const ConnectionJet jet = connection_jet_at(spec, x, true);
    const Tensor4 lhs = cyclic_first_three(curvature_from_jet(jet).lowered);
    const Matrix& g = jet.metric.g;
    const Matrix& g_inv = jet.metric.g_inv;
    const TorsionJet t = torsion_jet_at(spec, x);
    const Vector xi_low = g * t.xi;

    const Matrix nabla_xi = covariant_derivative_vector(t.xi, t.dxi, jet.coeff);  // (m,k)
    const Tensor4 nabla_S = covariant_derivative<3>(FieldJet<3>{t.S, t.dS}, jet.coeff);
    out.parallel_torsion = std::max({out.parallel_torsion, nabla_xi.cwiseAbs().maxCoeff(), max_abs<4>(nabla_S)});

    // Component display: S(S(X,Y),Z) + g(X,xi) S(Y,Z) + S(xi,Y,Z) X, cyclic in X,Y,Z.
    const Tensor4 ss = compose(t.S, g_inv);
    Tensor4 display(d, d, d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int w = 0; w < d; ++w) {
            double s_xi = 0.0;
            for (int k = 0; k < d; ++k) s_xi += t.xi(k) * t.S(k, b, c);
            display(a, b, c, w) = ss(a, b, c, w) + xi_low(a) * t.S(b, c, w) + s_xi * g(a, w);
          }
    display = cyclic_first_three(display);

    // Unconditional form with nabla T.
    const Tensor3 T = twistor_free_torsion(g, t.xi, t.S);
    const Matrix nabla_xi_low = nabla_xi * g;  // (m, i) = g_ik (nabla_m xi)^k
    Tensor4 general = compose(T, g_inv);
    for (int m = 0; m < d; ++m)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int l = 0; l < d; ++l)
            general(m, i, j, l) += nabla_xi_low(m, i) * g(j, l) - nabla_xi_low(m, j) * g(i, l) + nabla_S(m, i, j, l);
    general = cyclic_first_three(general);

    out.display = std::max(out.display, max_abs_diff<4>(lhs, display));
    out.general = std::max(out.general, max_abs_diff<4>(lhs, general));
  }
  out.asserted = out.parallel_torsion < 1e-8;
  return out;
}

}  // namespace geoverify
