#pragma once

#include <span>
#include <vector>

#include "geoverify/connection.hpp"

namespace geoverify {

/// Split of a torsion tensor into vectorial, skew-symmetric and twistorial parts.
///
/// `xi` is contravariant; all tensors are lowered and satisfy
/// T = (X ^ Y)xi + skew + twist with twist traceless and cyclic-free.
struct TorsionDecomposition {
  Vector xi;
  Tensor3 skew;
  Tensor3 twist;
};

/// Antisymmetric 4-tensor stored on increasing index tuples.
class FourForm {
 public:
  FourForm() = default;
  explicit FourForm(int dim);

  /// Antisymmetrizes an arbitrary 4-tensor.
  static FourForm from_tensor(const Tensor4& t);

  int dim() const { return dim_; }
  double at(int i, int j, int k, int l) const;
  Tensor4 full() const;
  double max_abs() const;
  /// Stored components, lexicographic over i<j<k<l.
  const std::vector<double>& components() const { return values_; }

 private:
  int dim_ = 0;
  std::vector<double> values_;
  std::size_t slot(int i, int j, int k, int l) const;
};

/// Pure vectorial torsion (X ^ Y)xi, lowered.
Tensor3 vectorial_torsion(const Matrix& g, const Vector& xi_up);

TorsionDecomposition decompose_torsion(const Tensor3& T, const Matrix& g);

/// g-contraction <A,B> = A_ijl B^ijl of two 3-tensors.
double tensor_inner(const Tensor3& a, const Tensor3& b, const Matrix& g_inv);

/// Cyclic sum over the first three slots of tau(tau(X,Y),Z,V), before antisymmetrization.
Tensor4 sigma_tau_tensor(const Tensor3& tau, const Matrix& g_inv);
FourForm sigma_tau(const Tensor3& tau, const Matrix& g);

/// Endomorphism tau(X) for X = e_m: result(s,i) = (tau(e_m) e_i)^s.
Matrix form_endomorphism(const Tensor3& tau, const Matrix& g_inv, int m);

/// (Lambda . omega)(X_1..X_k) = -sum_i omega(..., Lambda X_i, ...); lambda(s,i) = (Lambda e_i)^s.
template <int R>
Eigen::Tensor<double, R> form_action(const Matrix& lambda, const Eigen::Tensor<double, R>& omega);

/// Checks form_action's precondition g(Lambda X, Y) = -g(X, Lambda Y).
bool is_g_antisymmetric(const Matrix& lambda, const Matrix& g, double tol = 1e-10);

/// Signed square (1/3!) S_ijk S^ijk.
double torsion_norm(const Tensor3& S, const Matrix& g);

struct IdentityResiduals {
  double d_tau = 0.0;       // exterior-derivative identity
  double nabla_tau = 0.0;   // nabla tau = nabla^g tau - sigma/2
  double action = 0.0;      // (tau(X) . tau) = -sigma(X, ...)
};

/// Residuals of the skew-torsion identities for nabla = nabla^g + tau/2, where
/// tau is `spec.S` (xi must be absent).
IdentityResiduals identity_suite(const MetricSpec& spec, std::span<const std::vector<double>> points);

struct Lemma1Result {
  bool cond1 = false;  // nabla tau = 0 and d tau = 0
  bool cond2 = false;  // nabla tau = 0 and sigma = 0
  bool cond3 = false;  // nabla^g tau = 0 and sigma = 0
  double nabla_tau = 0.0;
  double d_tau = 0.0;
  double sigma = 0.0;
  double nabla_g_tau = 0.0;
  bool uniform() const { return cond1 == cond2 && cond2 == cond3; }
};

Lemma1Result lemma1_check(const MetricSpec& spec, std::span<const std::vector<double>> points,
                          double threshold = 1e-8);

struct BianchiResult {
  double parallel_torsion = 0.0;  // max of |nabla xi|, |nabla S|
  double display = 0.0;           // against the S(S(X,Y),Z) component display
  double general = 0.0;           // against the unconditional T(T(X,Y),Z) + (nabla_X T)(Y,Z) form
  bool asserted = false;          // torsion parallel, so `display` is meaningful
};

BianchiResult bianchi_residual(const MetricSpec& spec, std::span<const std::vector<double>> points);

/// Pointwise pieces shared by the checks: nabla xi (vector) and nabla S.
struct TorsionParallelism {
  double nabla_xi = 0.0;
  double nabla_S = 0.0;
};
TorsionParallelism torsion_parallelism_at(const MetricSpec& spec, std::span<const double> point);

}  // namespace geoverify
