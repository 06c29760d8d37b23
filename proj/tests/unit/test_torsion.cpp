#include "doctest.h"

#include <cmath>

#include "geoverify/catalog.hpp"
#include "geoverify/lorentz.hpp"
#include "geoverify/torsion.hpp"
#include "random_specs.hpp"

using namespace geoverify;
using namespace geoverify::testing;

namespace {

Tensor3 numeric_three_form(SplitMix64& rng, int d) {
  Tensor3 t = zero_tensor<3>(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        const double v = rng.uniform(-1, 1);
        t(i, j, k) = t(j, k, i) = t(k, i, j) = v;
        t(j, i, k) = t(i, k, j) = t(k, j, i) = -v;
      }
  return t;
}

Matrix random_lorentz_gram(SplitMix64& rng, int d) {
  const Matrix P = Matrix::Identity(d, d) + 0.2 * random_matrix(rng, d, d);
  Matrix eta = Matrix::Identity(d, d);
  eta(0, 0) = -1;
  return P.transpose() * eta * P;
}

Tensor3 basis_three_form(int d, int i, int j, int k) {
  Vector a = Vector::Unit(d, i), b = Vector::Unit(d, j), c = Vector::Unit(d, k);
  return wedge3(a, b, c);
}

double trace_residual(const Tensor3& Q, const Matrix& gi) {
  const int d = static_cast<int>(gi.rows());
  double worst = 0.0;
  for (int j = 0; j < d; ++j) {
    double tr = 0.0;
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) tr += gi(i, l) * Q(i, j, l);
    worst = std::max(worst, std::abs(tr));
  }
  return worst;
}

double cyclic_residual(const Tensor3& Q) {
  double worst = 0.0;
  for_each_index<3>(Q.dimension(0), [&](const std::array<Eigen::Index, 3>& i) {
    worst = std::max(worst, std::abs(Q(i[0], i[1], i[2]) + Q(i[1], i[2], i[0]) + Q(i[2], i[0], i[1])));
  });
  return worst;
}

}  // namespace

TEST_CASE("decomposition of zero") {
  const Matrix g = Matrix::Identity(4, 4);
  const TorsionDecomposition dec = decompose_torsion(zero_tensor<3>(4), g);
  CHECK(dec.xi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs(dec.skew) == 0.0);
  CHECK(max_abs(dec.twist) == 0.0);
}

TEST_CASE("decomposition round trip from (xi, S)") {
  SplitMix64 rng(21);
  for (int n = 0; n < 40; ++n) {
    const int d = 3 + n % 4;
    const Matrix g = random_lorentz_gram(rng, d);
    const Vector xi = random_vec(rng, d);
    const Tensor3 S = numeric_three_form(rng, d);
    const Tensor3 T = twistor_free_torsion(g, xi, S);
    const TorsionDecomposition dec = decompose_torsion(T, g);
    CHECK((dec.xi - xi).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(max_abs_diff<3>(dec.skew, S) < 1e-10);
    CHECK(max_abs(dec.twist) < 1e-10);
    const Tensor3 V = vectorial_torsion(g, xi);
    const TorsionDecomposition pure = decompose_torsion(V, g);
    CHECK((pure.xi - xi).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs(pure.skew) < 1e-12);
  }
}

TEST_CASE("decomposition is a projector triple with orthogonal parts") {
  SplitMix64 rng(22);
  for (int n = 0; n < 40; ++n) {
    const int d = 3 + n % 4;
    const Matrix g = random_lorentz_gram(rng, d);
    const Matrix gi = g.inverse();
    Tensor3 T = zero_tensor<3>(d);
    for_each_index<3>(d, [&](const std::array<Eigen::Index, 3>& i) {
      if (i[0] < i[1]) {
        const double v = rng.uniform(-1, 1);
        T(i[0], i[1], i[2]) = v;
        T(i[1], i[0], i[2]) = -v;
      }
    });
    const TorsionDecomposition dec = decompose_torsion(T, g);
    const Tensor3 V = vectorial_torsion(g, dec.xi);
    Tensor3 re = V + dec.skew + dec.twist;
    CHECK(max_abs_diff<3>(re, T) < 1e-12);
    CHECK(trace_residual(dec.twist, gi) < 1e-10);
    CHECK(cyclic_residual(dec.twist) < 1e-10);
    CHECK(std::abs(tensor_inner(V, dec.skew, gi)) < 1e-9);
    CHECK(std::abs(tensor_inner(V, dec.twist, gi)) < 1e-9);
    CHECK(std::abs(tensor_inner(dec.skew, dec.twist, gi)) < 1e-9);

    // Pure twistor input comes back unchanged.
    const TorsionDecomposition tw = decompose_torsion(dec.twist, g);
    CHECK(tw.xi.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(max_abs(tw.skew) < 1e-10);
    CHECK(max_abs_diff<3>(tw.twist, dec.twist) < 1e-10);
  }
}

TEST_CASE("decomposition rejects tensors that are not antisymmetric in the first pair") {
  Tensor3 T = zero_tensor<3>(3);
  T(0, 1, 2) = 1.0;
  CHECK_THROWS_AS(decompose_torsion(T, Matrix::Identity(3, 3)), PreconditionError);
}

TEST_CASE("sigma_tau battery") {
  SplitMix64 rng(23);
  for (int n = 0; n < 10; ++n) {
    const FourForm s = sigma_tau(numeric_three_form(rng, 3), random_lorentz_gram(rng, 3));
    CHECK(s.components().empty());
    CHECK(max_abs(s.full()) == 0.0);
  }
  const LiePointData su = lie_point_data("su2xsu2");
  CHECK(sigma_tau(su.tau, su.inner).max_abs() < 1e-12);
  const LiePointData su2 = lie_point_data("su2");
  CHECK(sigma_tau(su2.tau, su2.inner).max_abs() == 0.0);
  CHECK(max_abs(lie_point_data("abelian(5)").tau) == 0.0);

  // Brute-force oracle: the only nonzero increasing component is (1,2,3,4) = 1.
  const Tensor3 tau = basis_three_form(5, 0, 1, 2) + basis_three_form(5, 0, 3, 4);
  const FourForm s = sigma_tau(tau, Matrix::Identity(5, 5));
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k)
        for (int l = k + 1; l < 5; ++l) {
          const double want = (i == 1 && j == 2 && k == 3 && l == 4) ? 1.0 : 0.0;
          CHECK(std::abs(s.at(i, j, k, l) - want) < 1e-12);
        }
  CHECK(s.at(2, 1, 3, 4) == -s.at(1, 2, 3, 4));
}

TEST_CASE("sigma_tau is a 4-form") {
  SplitMix64 rng(24);
  for (int d = 4; d <= 6; ++d) {
    const Tensor3 tau = numeric_three_form(rng, d);
    const Matrix g = random_lorentz_gram(rng, d);
    const Tensor4 raw = sigma_tau_tensor(tau, g.inverse());
    double worst = 0.0;
    for_each_index<4>(d, [&](const std::array<Eigen::Index, 4>& i) {
      const double v = raw(i[0], i[1], i[2], i[3]);
      worst = std::max({worst, std::abs(v + raw(i[1], i[0], i[2], i[3])), std::abs(v + raw(i[0], i[2], i[1], i[3])),
                        std::abs(v + raw(i[0], i[1], i[3], i[2]))});
    });
    CHECK(worst < 1e-12);
    CHECK(max_abs_diff<4>(raw, sigma_tau(tau, g).full()) < 1e-12);
  }
}

TEST_CASE("form action") {
  const Matrix g = Matrix::Identity(3, 3);
  const Matrix L = wedge_endomorphism(Vector::Unit(3, 0), Vector::Unit(3, 1), g);
  Eigen::Tensor<double, 2> w12(3, 3), w13(3, 3);
  w12.setZero();
  w13.setZero();
  w12(0, 1) = 1;
  w12(1, 0) = -1;
  w13(0, 2) = 1;
  w13(2, 0) = -1;
  CHECK(max_abs(form_action<2>(L, w12)) == 0.0);
  // Oracle: (e1^e2).(e^1^e^3) = e^2^e^3.
  const Eigen::Tensor<double, 2> r = form_action<2>(L, w13);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double want = (i == 1 && j == 2) ? 1.0 : (i == 2 && j == 1) ? -1.0 : 0.0;
      CHECK(r(i, j) == doctest::Approx(want));
    }
  CHECK(is_g_antisymmetric(L, g));
  CHECK_FALSE(is_g_antisymmetric(Matrix::Identity(3, 3), g));
}

TEST_CASE("(tau(X) . tau) = -sigma_tau(X, ...)") {
  SplitMix64 rng(25);
  for (int n = 0; n < 20; ++n) {
    const int d = 3 + n % 4;
    const Matrix g = random_lorentz_gram(rng, d);
    const Matrix gi = g.inverse();
    const Tensor3 tau = numeric_three_form(rng, d);
    const Tensor4 sig = sigma_tau(tau, g).full();
    double worst = 0.0;
    for (int m = 0; m < d; ++m) {
      const Matrix L = form_endomorphism(tau, gi, m);
      CHECK(is_g_antisymmetric(L, g));
      const Tensor3 act = form_action<3>(L, tau);
      for_each_index<3>(d, [&](const std::array<Eigen::Index, 3>& i) {
        worst = std::max(worst, std::abs(act(i[0], i[1], i[2]) + sig(m, i[0], i[1], i[2])));
      });
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("identity suite on random skew torsion") {
  SplitMix64 rng(26);
  for (int dim = 3; dim <= 6; ++dim) {
    MetricSpec s = random_lorentzian(rng, dim);
    s.S = random_three_form(rng, s);
    const IdentityResiduals r = identity_suite(s, sample_points(s, rng, 20));
    CHECK(r.d_tau < 1e-7);
    CHECK(r.nabla_tau < 1e-7);
    CHECK(r.action < 1e-10);
  }
  MetricSpec zero = random_lorentzian(rng, 4);
  zero.S = std::vector<ThreeFormEntry>{};
  const IdentityResiduals r0 = identity_suite(zero, sample_points(zero, rng, 5));
  CHECK(r0.d_tau == 0.0);
  CHECK(r0.nabla_tau == 0.0);
  CHECK(r0.action == 0.0);

  MetricSpec flat = flat_space(5, true, "x");
  flat.S = std::vector<ThreeFormEntry>{{{0, 1, 2}, Expr::constant(0.7)}, {{1, 3, 4}, Expr::constant(-1.3)},
                                       {{0, 2, 4}, Expr::constant(0.4)}};
  const IdentityResiduals rc = identity_suite(flat, sample_points(flat, rng, 5));
  CHECK(rc.d_tau < 1e-12);
  CHECK(rc.nabla_tau < 1e-12);
  CHECK(rc.action < 1e-12);

  MetricSpec with_xi = flat;
  with_xi.xi = std::vector<Expr>(5, Expr::constant(1.0));
  CHECK_THROWS_AS(identity_suite(with_xi, sample_points(flat, rng, 1)), PreconditionError);
}

TEST_CASE("equivalence pattern for parallel skew torsion") {
  SplitMix64 rng(27);
  const MetricSpec ws = build_entry("walker_skew");
  const Lemma1Result a = lemma1_check(ws, sample_points(ws, rng, 20));
  CHECK(a.cond1);
  CHECK(a.cond2);
  CHECK(a.cond3);

  MetricSpec flat = flat_space(5, false, "x");
  flat.S = std::vector<ThreeFormEntry>{{{0, 1, 2}, Expr::constant(1.0)}};
  const Lemma1Result b = lemma1_check(flat, sample_points(flat, rng, 20));
  CHECK((b.cond1 && b.cond2 && b.cond3));

  MetricSpec rnd = random_lorentzian(rng, 4);
  rnd.S = random_three_form(rng, rnd);
  const Lemma1Result c = lemma1_check(rnd, sample_points(rnd, rng, 20));
  CHECK_FALSE(c.cond1);
  CHECK_FALSE(c.cond2);
  CHECK_FALSE(c.cond3);
  CHECK(c.uniform());
}

TEST_CASE("bianchi residuals") {
  SplitMix64 rng(28);
  for (int dim = 3; dim <= 5; ++dim) {
    const MetricSpec s = random_lorentzian(rng, dim);
    CHECK(bianchi_residual(s, sample_points(s, rng, 10)).general < 1e-9);
  }
  const MetricSpec k = kundt3(1.0, "sin(x)*u");
  const BianchiResult bk = bianchi_residual(k, sample_points(k, rng, 20));
  CHECK(bk.asserted);
  CHECK(bk.display < 1e-7);
  CHECK(bk.general < 1e-7);
  const MetricSpec pw = build_entry("plane_wave");
  const BianchiResult bp = bianchi_residual(pw, sample_points(pw, rng, 20));
  CHECK(bp.asserted);
  CHECK(bp.display < 1e-7);

  // The unconditional form also holds for non-parallel random torsion.
  MetricSpec r = random_lorentzian(rng, 4);
  r.xi = random_vector_field(rng, r, 0.5);
  r.S = random_three_form(rng, r, 0.5);
  const BianchiResult br = bianchi_residual(r, sample_points(r, rng, 10));
  CHECK_FALSE(br.asserted);
  CHECK(br.general < 1e-7);
}

TEST_CASE("torsion norm") {
  // p^omega with p isotropic and omega on the screen: degenerate.
  const Tensor3 pw = wedge1_2(lower(Vector::Unit(4, 0), witt_gram(2)), [] {
    Matrix w = Matrix::Zero(4, 4);
    w(1, 2) = 1;
    w(2, 1) = -1;
    return w;
  }());
  CHECK(std::abs(torsion_norm(pw, witt_gram(2))) < 1e-15);
  CHECK(torsion_norm(basis_three_form(3, 0, 1, 2), Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  // Oracle: ||a Vol||^2 on Minkowski_3 = -a^2.
  Matrix eta = Matrix::Identity(3, 3);
  eta(0, 0) = -1;
  CHECK(torsion_norm(2.0 * basis_three_form(3, 0, 1, 2), eta) == doctest::Approx(-4.0));
}
