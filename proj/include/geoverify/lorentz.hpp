#pragma once

#include <string>
#include <vector>

#include "geoverify/geometry.hpp"

namespace geoverify {

/// Element -a p^q + A + p^X of so(1,n+1), written in the Witt basis p, e_1..e_n, q.
///
/// In matrix form (acting on column vectors of Witt coordinates) this is
///   [ a  -X^t  0 ]
///   [ 0   A    X ]
///   [ 0   0   -a ]
/// which is exactly the stabilizer of the line Rp.
struct LorentzBivector {
  double a = 0.0;
  Matrix A;  // n x n, antisymmetric
  Vector X;  // n

  LorentzBivector() = default;
  explicit LorentzBivector(int n) : A(Matrix::Zero(n, n)), X(Vector::Zero(n)) {}
  int n() const { return static_cast<int>(X.size()); }
};

/// Antisymmetric 3-tensor in Witt coordinates; covariant, so p-flat sits on the q slot.
using PointThreeForm = Tensor3;

enum class StabilizerKind { Line, Vector };

Matrix bivector_matrix(const LorentzBivector& b);
/// Inverse of bivector_matrix; throws PreconditionError outside the stabilizer block shape.
LorentzBivector matrix_bivector(const Matrix& m, double tol = 1e-12);

/// Line: Rp^q + so(n) + p^R^n. Vector: so(n) + p^R^n.
std::vector<LorentzBivector> stabilizer_basis(StabilizerKind kind, int n);
std::vector<Matrix> as_matrices(const std::vector<LorentzBivector>& basis);

/// Endomorphism Z -> g(X,Z)Y - g(Y,Z)X as a matrix.
Matrix wedge_endomorphism(const Vector& x, const Vector& y, const Matrix& g);

bool is_g_antisymmetric_matrix(const Matrix& m, const Matrix& g, double tol = 1e-12);

/// Full antisymmetric tensors of a^b^c and a^omega (omega a 2-form matrix).
Tensor3 wedge3(const Vector& a, const Vector& b, const Vector& c);
Tensor3 wedge1_2(const Vector& a, const Matrix& omega);

/// Basis of { L in span(subalg) : L . tau = 0 }.
std::vector<Matrix> annihilator(const PointThreeForm& tau, const std::vector<Matrix>& subalg, double tol = 1e-10);

/// Max |[A,B] - proj_span [A,B]| over all pairs of the basis.
double commutator_closure_residual(const std::vector<Matrix>& basis);

enum class TorsionShape { Zero, PWedgeOmega, PWedgeOmegaPlusE, Other };
std::string to_string(TorsionShape s);

struct ShapeResult {
  TorsionShape shape = TorsionShape::Other;
  Matrix omega;          // n x n screen 2-form
  PointThreeForm omega_E;  // 3-form supported on e_1..e_n (full Witt index range)
  double residual = 0.0;   // |S - (p^omega + omega_E)|
  double norm = 0.0;       // signed (1/3!) S_ijk S^ijk
};

/// Shape of S relative to the first Witt vector p; `n` is inferred from S.
ShapeResult classify_shape(const PointThreeForm& S, double tol = 1e-10);

/// True when every generator maps span(columns of `subspace`) into itself.
bool invariant_subspace_check(const std::vector<Matrix>& gens, const Matrix& subspace, double tol = 1e-10);

/// Coefficients of v on e_1..e_n; v must lie in p-perp.
Vector screen_project(const Vector& v, const WittFrame& frame, const Matrix& g, double tol = 1e-10);
Vector screen_lift(const Vector& coeffs, const WittFrame& frame, double p_component = 0.0);

/// The Witt frame of witt_gram(n) itself (standard basis vectors).
WittFrame standard_witt_frame(int n);

}  // namespace geoverify
