#include "geoverify/checks.hpp"

#include <algorithm>
#include <cmath>

#include "geoverify/connection.hpp"
#include "geoverify/torsion.hpp"

namespace geoverify {

void vector_jet(const std::vector<Expr>& field, const MetricSpec& spec, std::span<const double> point, Vector& v,
                Matrix& dv) {
  const int d = spec.dim;
  v = Vector::Zero(d);
  dv = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const Jet2 j = eval_jet2(field[static_cast<std::size_t>(k)], point, spec.params);
    v(k) = j.value;
    for (int m = 0; m < d; ++m) dv(k, m) = j.gradient(m);
  }
}

namespace residuals {

namespace {

template <class F>
double over_points(Points points, F&& f) {
  double worst = 0.0;
  for (const auto& x : points) worst = std::max(worst, f(std::span<const double>(x)));
  return worst;
}

const std::vector<Expr>& require_xi(const MetricSpec& spec) {
  if (!spec.xi) throw PreconditionError("spec '" + spec.name + "' has no xi field");
  return *spec.xi;
}

const std::vector<Expr>& require_p0(const MetricSpec& spec) {
  if (!spec.p0) throw PreconditionError("spec '" + spec.name + "' has no p0 field");
  return *spec.p0;
}

void require_skew_only(const MetricSpec& spec) {
  if (spec.xi) throw PreconditionError("spec '" + spec.name + "' carries xi; the skew identities need xi = 0");
}

/// Lowered B(m,l) = g(nabla^g_m p, e_l) for p = xi, plus the ingredients.
struct KundtData {
  Matrix g;
  Vector p;
  Matrix B;
  Tensor3 S;
  Matrix screen;  // n x n restriction of B to e_1..e_n
};

KundtData kundt_data(const MetricSpec& spec, std::span<const double> x) {
  const auto& xi = require_xi(spec);
  KundtData k;
  const ConnectionValue lc = christoffels_at(spec, x);
  const MetricValue mv = metric_at(spec, x);
  Matrix dp;
  vector_jet(xi, spec, x, k.p, dp);
  k.g = mv.g;
  k.B = covariant_derivative_vector(k.p, dp, lc.gamma) * k.g;
  k.S = torsion_jet_at(spec, x).S;
  const WittFrame f = witt_frame(k.g, k.p);
  k.screen = f.e.transpose() * k.B * f.e;
  return k;
}

}  // namespace

double signature(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const Signature s = signature_at(spec, x);
    bool ok = s.n_zero == 0;
    if (spec.signature == SignatureKind::Lorentzian) ok = ok && s.n_neg == 1;
    if (spec.signature == SignatureKind::Riemannian) ok = ok && s.n_neg == 0;
    return ok ? 0.0 : 1.0;
  });
}

double metric_compat(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const MetricValue mv = metric_at(spec, x);
    Eigen::Tensor<double, 2> g(spec.dim, spec.dim);
    for (int i = 0; i < spec.dim; ++i)
      for (int j = 0; j < spec.dim; ++j) g(i, j) = mv.g(i, j);
    const FieldJet<2> jet{g, mv.dg};
    return max_abs<3>(covariant_derivative<2>(jet, full_connection_at(spec, x).coefficients()));
  });
}

double torsion_closed_form(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const TorsionJet t = torsion_jet_at(spec, x);
    const MetricValue mv = metric_at(spec, x);
    return max_abs_diff<3>(torsion_at(spec, x), twistor_free_torsion(mv.g, t.xi, t.S));
  });
}

double twistor_free(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const TorsionJet t = torsion_jet_at(spec, x);
    const MetricValue mv = metric_at(spec, x);
    const TorsionDecomposition dec = decompose_torsion(torsion_at(spec, x), mv.g);
    return std::max({max_abs<3>(dec.twist), (dec.xi - t.xi).cwiseAbs().maxCoeff(), max_abs_diff<3>(dec.skew, t.S)});
  });
}

double nabla_xi(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) { return torsion_parallelism_at(spec, x).nabla_xi; });
}

double nabla_S(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) { return torsion_parallelism_at(spec, x).nabla_S; });
}

double bianchi_display(const MetricSpec& spec, Points points) { return bianchi_residual(spec, points).display; }

double bianchi_general(const MetricSpec& spec, Points points) { return bianchi_residual(spec, points).general; }

double lc_bianchi(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const Tensor4 R = curvature_at(spec, x, false).lowered;
    const int d = spec.dim;
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int w = 0; w < d; ++w)
            worst = std::max(worst, std::abs(R(a, b, c, w) + R(b, c, a, w) + R(c, a, b, w)));
    return worst;
  });
}

double kundt_p_condition(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const KundtData k = kundt_data(spec, x);
    const int d = spec.dim;
    const Vector p_low = k.g * k.p;
    double worst = 0.0;
    for (int m = 0; m < d; ++m)
      for (int l = 0; l < d; ++l) {
        double s_mpl = 0.0;
        for (int j = 0; j < d; ++j) s_mpl += k.S(m, j, l) * k.p(j);
        worst = std::max(worst, std::abs(k.B(m, l) + p_low(m) * p_low(l) + 0.5 * s_mpl));
      }
    return worst;
  });
}

double kundt_geodesic(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const KundtData k = kundt_data(spec, x);
    return (k.B.transpose() * k.p).cwiseAbs().maxCoeff();
  });
}

double kundt_expansion(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) { return std::abs(kundt_data(spec, x).screen.trace()); });
}

double kundt_shear(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const Matrix b = kundt_data(spec, x).screen;
    if (b.rows() == 0) return 0.0;
    Matrix sym = 0.5 * (b + b.transpose());
    sym.diagonal().array() -= b.trace() / static_cast<double>(b.rows());
    return sym.cwiseAbs().maxCoeff();
  });
}

double kundt_twist(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    const Matrix b = kundt_data(spec, x).screen;
    if (b.rows() == 0) return 0.0;
    return (0.5 * (b - b.transpose())).cwiseAbs().maxCoeff();
  });
}

double parallel_p0(const MetricSpec& spec, Points points) {
  const auto& p0 = require_p0(spec);
  return over_points(points, [&](std::span<const double> x) {
    Vector v;
    Matrix dv;
    vector_jet(p0, spec, x, v, dv);
    return covariant_derivative_vector(v, dv, christoffels_at(spec, x).gamma).cwiseAbs().maxCoeff();
  });
}

double p0_exact(const MetricSpec& spec, Points points) {
  const auto& p0 = require_p0(spec);
  if (!spec.phi) throw PreconditionError("spec '" + spec.name + "' has no phi potential");
  return over_points(points, [&](std::span<const double> x) {
    const Vector p_low = metric_at(spec, x).g * eval_vector(p0, spec, x);
    const Jet2 phi = eval_jet2(*spec.phi, x, spec.params);
    const double e = std::exp(phi.value);
    double worst = 0.0;
    for (int i = 0; i < spec.dim; ++i) worst = std::max(worst, std::abs(p_low(i) - e * phi.gradient(i)));
    return worst;
  });
}

double nabla_R_fd(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) { return max_abs<5>(fd_nabla_curvature(spec, x)); });
}

double torsion_norm_zero(const MetricSpec& spec, Points points) {
  return over_points(points, [&](std::span<const double> x) {
    return std::abs(torsion_norm(torsion_jet_at(spec, x).S, metric_at(spec, x).g));
  });
}

double identity_dT1(const MetricSpec& spec, Points points) {
  require_skew_only(spec);
  return identity_suite(spec, points).d_tau;
}

double identity_dT2(const MetricSpec& spec, Points points) {
  require_skew_only(spec);
  return identity_suite(spec, points).nabla_tau;
}

double identity_action(const MetricSpec& spec, Points points) {
  require_skew_only(spec);
  return identity_suite(spec, points).action;
}

double lemma1_uniform(const MetricSpec& spec, Points points) {
  require_skew_only(spec);
  return lemma1_check(spec, points).uniform() ? 0.0 : 1.0;
}

double lemma1_holds(const MetricSpec& spec, Points points) {
  require_skew_only(spec);
  const Lemma1Result r = lemma1_check(spec, points);
  return std::max({r.nabla_tau, r.d_tau, r.sigma, r.nabla_g_tau});
}

}  // namespace residuals

const std::vector<CheckDef>& check_registry() {
  namespace r = residuals;
  static const std::vector<CheckDef> registry = {
      {"bianchi_display", "cyclic curvature sum against the parallel-torsion component formula",
       "𝔖R(X,Y)Z = 𝔖S(S(X,Y),Z) + 𝔖g(X,ξ)S(Y,Z) + 𝔖S(ξ,Y,Z)X", 1e-7, r::bianchi_display},
      {"bianchi_general", "cyclic curvature sum against T(T(X,Y),Z) + (nabla_X T)(Y,Z)",
       "𝔖R(X,Y)Z = 𝔖[T(T(X,Y),Z) + (∇_X T)(Y,Z)]", 1e-7, r::bianchi_general},
      {"identity_action", "action of tau(X) on tau against sigma_tau", "(τ(X)·τ)(Y,Z,V) = −σ_τ(X,Y,Z,V)",
       1e-10, r::identity_action},
      {"identity_dT1", "exterior derivative of tau through nabla tau and sigma_tau",
       "dτ(X,Y,Z,V) = 𝔖(∇_Xτ)(Y,Z,V) − (∇_Vτ)(X,Y,Z) + 2σ_τ(X,Y,Z,V)", 1e-7, r::identity_dT1},
      {"identity_dT2", "nabla tau against the Levi-Civita derivative", "∇τ = ∇^gτ − ½σ_τ", 1e-7,
       r::identity_dT2},
      {"kundt_expansion", "screen trace of nabla^g p", "tr(∇^g p)|_E = 0", 1e-9, r::kundt_expansion},
      {"kundt_geodesic", "p is a Levi-Civita geodesic field", "∇^g_p p = 0", 1e-9, r::kundt_geodesic},
      {"kundt_p_condition", "Levi-Civita derivative of p against the torsion formula",
       "∇^g_X p = −g(X,p)p − ½S(X,p)", 1e-9, r::kundt_p_condition},
      {"kundt_shear", "traceless symmetric screen part of nabla^g p", "sym₀(∇^g p)|_E = 0", 1e-9,
       r::kundt_shear},
      {"kundt_twist", "antisymmetric screen part of nabla^g p", "alt(∇^g p)|_E = 0", 1e-9, r::kundt_twist},
      {"lc_bianchi", "first Bianchi identity of the Levi-Civita curvature", "𝔖R^g(X,Y)Z = 0", 1e-9, r::lc_bianchi},
      {"lemma1_holds", "largest of |nabla tau|, |d tau|, |sigma_tau|, |nabla^g tau|",
       "∇τ = 0, dτ = 0, σ_τ = 0, ∇^gτ = 0", 1e-8, r::lemma1_holds},
      {"lemma1_uniform", "the three parallelism conditions on tau agree",
       "(∇τ = 0 ∧ dτ = 0) ⇔ (∇τ = 0 ∧ σ_τ = 0) ⇔ (∇^gτ = 0 ∧ σ_τ = 0)", 0.0,
       r::lemma1_uniform},
      {"metric_compat", "full connection preserves g", "∇g = 0", 1e-10, r::metric_compat},
      {"nabla_R_fd", "finite-difference covariant derivative of the curvature", "∇R = 0", 1e-5, r::nabla_R_fd},
      {"nabla_S", "skew torsion is parallel", "∇S = 0", 1e-9, r::nabla_S},
      {"nabla_xi", "vectorial torsion generator is parallel", "∇ξ = 0", 1e-9, r::nabla_xi},
      {"p0_exact", "p0 is the gradient of the potential", "p₀♭ = d(e^φ)", 1e-9, r::p0_exact},
      {"parallel_p0", "p0 is Levi-Civita parallel", "∇^g p₀ = 0", 1e-9, r::parallel_p0},
      {"signature", "declared signature at every sample", "sign(g) = (1, 0, dim−1) when Lorentzian", 0.0,
       r::signature},
      {"torsion_closed_form", "torsion from connection coefficients", "T(X,Y) = (X ∧ Y)ξ + S(X,Y)", 1e-10,
       r::torsion_closed_form},
      {"torsion_norm_zero", "skew torsion is degenerate", "‖S‖² = 0", 1e-9, r::torsion_norm_zero},
      {"twistor_free", "twistorial part vanishes and the declared xi, S are recovered",
       "T = (X ∧ Y)ξ + S, Q = 0", 1e-10, r::twistor_free},
  };
  return registry;
}

const CheckDef& find_check(const std::string& id) {
  for (const auto& c : check_registry())
    if (c.id == id) return c;
  throw ParseError("unknown check id '" + id + "'");
}

std::vector<std::string> default_checks(const MetricSpec& spec) {
  std::vector<std::string> ids = {"signature", "metric_compat", "torsion_closed_form", "bianchi_general"};
  if (!spec.has_torsion()) ids.push_back("lc_bianchi");
  if (spec.S && !spec.xi) {
    ids.insert(ids.end(), {"identity_dT1", "identity_dT2", "identity_action", "lemma1_uniform"});
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace geoverify
