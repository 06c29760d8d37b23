#include "doctest.h"

#include <cmath>

#include "geoverify/lorentz.hpp"
#include "geoverify/torsion.hpp"
#include "random_specs.hpp"

using namespace geoverify;
using namespace geoverify::testing;

namespace {

LorentzBivector random_bivector(SplitMix64& rng, int n, bool with_a) {
  LorentzBivector b(n);
  if (with_a) b.a = rng.uniform(-1, 1);
  const Matrix M = random_matrix(rng, n, n);
  b.A = M - M.transpose();
  b.X = random_vec(rng, n);
  return b;
}

// Dimension of { L in span : L . tau = 0 } by SVD of the stacked action map.
int brute_force_annihilator_dim(const PointThreeForm& tau, const std::vector<Matrix>& span) {
  const int d = static_cast<int>(tau.dimension(0));
  Matrix M(d * d * d, static_cast<int>(span.size()));
  for (std::size_t c = 0; c < span.size(); ++c) {
    const Tensor3 a = form_action<3>(span[c], tau);
    for (int i = 0; i < d * d * d; ++i) M(i, static_cast<int>(c)) = a.data()[i];
  }
  if (span.empty()) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  int rank = 0;
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * std::max(1.0, top)) ++rank;
  return static_cast<int>(span.size()) - rank;
}

Tensor3 random_witt_form(SplitMix64& rng, int d) {
  Tensor3 t = zero_tensor<3>(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        const double v = rng.uniform() < 0.5 ? 0.0 : rng.uniform(-1, 1);
        t(i, j, k) = t(j, k, i) = t(k, i, j) = v;
        t(j, i, k) = t(i, k, j) = t(k, j, i) = -v;
      }
  return t;
}

}  // namespace

TEST_CASE("stabilizer dimensions") {
  for (int n = 0; n <= 6; ++n) {
    CHECK(stabilizer_basis(StabilizerKind::Line, n).size() == static_cast<std::size_t>(1 + n * (n - 1) / 2 + n));
    CHECK(stabilizer_basis(StabilizerKind::Vector, n).size() == static_cast<std::size_t>(n * (n - 1) / 2 + n));
  }
  CHECK(stabilizer_basis(StabilizerKind::Line, 3).size() == 7);
  CHECK(stabilizer_basis(StabilizerKind::Vector, 3).size() == 6);
  CHECK(stabilizer_basis(StabilizerKind::Vector, 0).empty());
}

TEST_CASE("bivector matrices") {
  LorentzBivector b(2);
  b.a = 1.0;
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = 1;
  want(3, 3) = -1;
  CHECK(bivector_matrix(b) == want);

  SplitMix64 rng(31);
  for (int n = 0; n <= 5; ++n) {
    const Matrix G = witt_gram(n);
    for (int t = 0; t < 5; ++t) {
      const LorentzBivector r = random_bivector(rng, n, true);
      const Matrix m = bivector_matrix(r);
      CHECK(is_g_antisymmetric_matrix(m, G));
      const LorentzBivector back = matrix_bivector(m);
      CHECK(back.a == r.a);
      CHECK(back.A == r.A);
      CHECK(back.X == r.X);
    }
  }
  Matrix bad = Matrix::Zero(4, 4);
  bad(3, 0) = 1.0;
  CHECK_THROWS_AS(matrix_bivector(bad), PreconditionError);
}

TEST_CASE("matrix action agrees with the wedge expansion") {
  // -a p^q + A + p^X with (X^Y)Z = g(X,Z)Y - g(Y,Z)X in Witt coordinates.
  SplitMix64 rng(32);
  for (int n = 1; n <= 4; ++n) {
    const WittFrame f = standard_witt_frame(n);
    const Matrix G = witt_gram(n);
    for (int t = 0; t < 5; ++t) {
      const LorentzBivector b = random_bivector(rng, n, true);
      Matrix expanded = -b.a * wedge_endomorphism(f.p, f.q, G);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) expanded += b.A(j, i) * wedge_endomorphism(f.e.col(i), f.e.col(j), G);
      expanded += wedge_endomorphism(f.p, f.e * b.X, G);
      const Vector v = random_vec(rng, n + 2);
      CHECK(((bivector_matrix(b) - expanded) * v).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("stabilizer bases are g-antisymmetric and closed") {
  for (int n = 0; n <= 6; ++n) {
    for (StabilizerKind k : {StabilizerKind::Line, StabilizerKind::Vector}) {
      const auto mats = as_matrices(stabilizer_basis(k, n));
      for (const auto& m : mats) CHECK(is_g_antisymmetric_matrix(m, witt_gram(n)));
      if (!mats.empty()) CHECK(commutator_closure_residual(mats) < 1e-10);
    }
  }
}

TEST_CASE("annihilator examples") {
  const int n = 3;
  const auto line = as_matrices(stabilizer_basis(StabilizerKind::Line, n));
  CHECK(annihilator(zero_tensor<3>(n + 2), line).size() == line.size());

  // so(3) acting on the screen fixes the screen volume form.
  std::vector<Matrix> so3;
  for (const auto& b : stabilizer_basis(StabilizerKind::Vector, n))
    if (b.X.cwiseAbs().maxCoeff() == 0.0) so3.push_back(bivector_matrix(b));
  CHECK(so3.size() == 3);
  const WittFrame f = standard_witt_frame(n);
  const Tensor3 vol = wedge3(f.e.col(0), f.e.col(1), f.e.col(2));
  CHECK(annihilator(vol, so3).size() == 3);

  // p-flat ^ e^1 ^ e^2 inside the vector stabilizer; p-flat sits on the q slot.
  const auto vec = as_matrices(stabilizer_basis(StabilizerKind::Vector, n));
  const Tensor3 pe12 = wedge3(witt_gram(n) * f.p, f.e.col(0), f.e.col(1));
  const auto ann = annihilator(pe12, vec);
  CHECK(static_cast<int>(ann.size()) == brute_force_annihilator_dim(pe12, vec));
  for (const auto& L : ann) CHECK(max_abs(form_action<3>(L, pe12)) < 1e-10);
}

TEST_CASE("annihilator matches brute-force null space on seeded forms") {
  SplitMix64 rng(33);
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 4;
    const auto basis = as_matrices(stabilizer_basis(t % 2 ? StabilizerKind::Line : StabilizerKind::Vector, n));
    const Tensor3 tau = random_witt_form(rng, n + 2);
    const auto ann = annihilator(tau, basis);
    CHECK(static_cast<int>(ann.size()) == brute_force_annihilator_dim(tau, basis));
    for (const auto& L : ann) CHECK(max_abs(form_action<3>(L, tau)) < 1e-10);
  }
}

TEST_CASE("classify shape") {
  const int n = 5;
  const WittFrame f = standard_witt_frame(n);
  const Matrix G = witt_gram(n);
  const Vector pflat = G * f.p;
  Matrix omega = Matrix::Zero(n + 2, n + 2);
  omega(1, 2) = 1;
  omega(2, 1) = -1;

  const Tensor3 pw = wedge1_2(pflat, omega);
  const ShapeResult a = classify_shape(pw);
  CHECK(a.shape == TorsionShape::PWedgeOmega);
  CHECK(a.omega(0, 1) == doctest::Approx(1.0));
  CHECK(std::abs(a.norm) < 1e-15);
  CHECK(a.residual < 1e-12);

  const Tensor3 e345 = wedge3(f.e.col(2), f.e.col(3), f.e.col(4));
  const Tensor3 mixed = pw + e345;
  const ShapeResult b = classify_shape(mixed);
  CHECK(b.shape == TorsionShape::PWedgeOmegaPlusE);
  CHECK(b.norm > 0.0);
  CHECK(max_abs_diff<3>(wedge1_2(pflat, [&] {
                          Matrix w = Matrix::Zero(n + 2, n + 2);
                          w.block(1, 1, n, n) = b.omega;
                          return w;
                        }()) + b.omega_E,
                        mixed) < 1e-12);

  const Tensor3 q12 = wedge3(G * f.q, f.e.col(0), f.e.col(1));
  CHECK(classify_shape(q12).shape == TorsionShape::Other);
  CHECK(classify_shape(zero_tensor<3>(n + 2)).shape == TorsionShape::Zero);
}

TEST_CASE("invariant subspaces") {
  const int n = 3;
  const auto vec = as_matrices(stabilizer_basis(StabilizerKind::Vector, n));
  const WittFrame f = standard_witt_frame(n);
  CHECK(invariant_subspace_check(vec, f.p));
  Matrix pperp(n + 2, n + 1);
  pperp.col(0) = f.p;
  pperp.rightCols(n) = f.e;
  CHECK(invariant_subspace_check(vec, pperp));

  SplitMix64 rng(34);
  std::vector<Matrix> gens;
  for (int i = 0; i < 3; ++i) gens.push_back(random_matrix(rng, 5, 5));
  CHECK_FALSE(invariant_subspace_check(gens, random_matrix(rng, 5, 2)));
}

TEST_CASE("screen projection") {
  const int n = 3;
  const WittFrame f = standard_witt_frame(n);
  const Matrix G = witt_gram(n);
  CHECK(screen_project(f.p, f, G).cwiseAbs().maxCoeff() == 0.0);
  const Vector v = f.e.col(1) + 5.0 * f.p;
  CHECK(screen_project(v, f, G) == Vector::Unit(n, 1));
  CHECK_THROWS_AS(screen_project(f.q, f, G), PreconditionError);
  SplitMix64 rng(35);
  for (int t = 0; t < 10; ++t) {
    const Vector c = random_vec(rng, n);
    CHECK((screen_project(screen_lift(c, f, rng.uniform(-3, 3)), f, G) - c).cwiseAbs().maxCoeff() < 1e-14);
  }
}
