#pragma once

#include <string>
#include <vector>

#include "geoverify/geometry.hpp"
#include "geoverify/tensor_util.hpp"

namespace geoverify {

/// Covariant tensor field of rank k with Expr components stored row-major
/// (last index fastest).
struct CovariantField {
  int dim = 0;
  int rank = 0;
  std::vector<Expr> components;

  CovariantField() = default;
  CovariantField(int dim_, int rank_);

  Expr& at(std::initializer_list<int> idx);
  const Expr& at(std::initializer_list<int> idx) const;

  static CovariantField metric(const MetricSpec& spec);
  static CovariantField one_form(std::vector<Expr> comps);
  static CovariantField two_form(int dim, const std::vector<TwoFormEntry>& entries);
  static CovariantField three_form(int dim, const std::vector<ThreeFormEntry>& entries);
};

/// Values and first partials of a covariant field at a point; the last index of
/// `gradient` is the derivative direction.
template <int R>
struct FieldJet {
  Eigen::Tensor<double, R> value;
  Eigen::Tensor<double, R + 1> gradient;
};

template <int R>
FieldJet<R> field_jet(const CovariantField& field, const MetricSpec& spec, std::span<const double> point);

/// Vector field xi and 3-form S of a spec, with first partials; zero when absent.
///
/// dxi(k,m) = d_m xi^k and dS(i,j,k,m) = d_m S_ijk; S is the full antisymmetric tensor.
struct TorsionJet {
  Vector xi;
  Matrix dxi;
  Tensor3 S;
  Tensor4 dS;
};

TorsionJet torsion_jet_at(const MetricSpec& spec, std::span<const double> point);

/// Connection coefficients at a point: nabla_{d_i} d_j = (gamma(k,i,j) + A(k,i,j)) d_k.
///
/// gamma is the Levi-Civita part; A realizes X ^ xi + S(X)/2 with
/// (X ^ Y)Z = g(X,Z)Y - g(Y,Z)X, so g(A(e_i)e_j, e_l) = g_ij xi_l - xi_j g_il + S_ijl/2.
struct ConnectionValue {
  Tensor3 gamma;
  Tensor3 A;
  Tensor3 coefficients() const { return gamma + A; }
};

/// Coefficients together with their first partials dcoeff(k,i,j,m) = d_m C^k_ij.
struct ConnectionJet {
  MetricValue metric;
  Tensor3 coeff;
  Tensor4 dcoeff;
  int dim() const { return metric.dim(); }
};

/// R(e_i,e_j)e_k has components up(i,j,k,l); lowered(i,j,k,l) = g(R(e_i,e_j)e_k, e_l).
struct CurvatureValue {
  Tensor4 up;
  Tensor4 lowered;
};

ConnectionValue christoffels_at(const MetricSpec& spec, std::span<const double> point);
ConnectionValue full_connection_at(const MetricSpec& spec, std::span<const double> point);
ConnectionJet connection_jet_at(const MetricSpec& spec, std::span<const double> point, bool use_full);

/// Lowered contorsion g(A(e_i)e_j, e_l) from the closed form.
Tensor3 contorsion_lowered(const Matrix& g, const Vector& xi_up, const Tensor3& S);

/// (nabla_m omega)_{j1..jR} stored at (m, j1, ..., jR).
template <int R>
Eigen::Tensor<double, R + 1> covariant_derivative(const FieldJet<R>& field, const Tensor3& coeff);

template <int R>
Eigen::Tensor<double, R + 1> covariant_derivative(const MetricSpec& spec, const CovariantField& field,
                                                  std::span<const double> point, bool use_full) {
  const ConnectionValue c = use_full ? full_connection_at(spec, point) : christoffels_at(spec, point);
  return covariant_derivative<R>(field_jet<R>(field, spec, point), c.coefficients());
}

/// result(m,k) = (nabla_m V)^k for a vector field with values v and partials dv(k,m).
Matrix covariant_derivative_vector(const Vector& v, const Matrix& dv, const Tensor3& coeff);

/// Lowered torsion T(i,j,l) = g(nabla_i e_j - nabla_j e_i, e_l) from the coefficients.
Tensor3 torsion_at(const MetricSpec& spec, std::span<const double> point);
Tensor3 torsion_from_coefficients(const Tensor3& coeff, const Matrix& g);

/// Closed form (X ^ Y)xi + S(X,Y), lowered: T_ijl = xi_i g_jl - xi_j g_il + S_ijl.
Tensor3 twistor_free_torsion(const Matrix& g, const Vector& xi_up, const Tensor3& S);

CurvatureValue curvature_from_jet(const ConnectionJet& jet);
CurvatureValue curvature_at(const MetricSpec& spec, std::span<const double> point, bool use_full);

/// (d omega)_{i0..iR} = sum_m (-1)^m d_{i_m} omega_{i0..^i_m..iR}.
template <int R>
Eigen::Tensor<double, R + 1> exterior_derivative(const FieldJet<R>& form);

template <int R>
Eigen::Tensor<double, R + 1> exterior_derivative(const MetricSpec& spec, const CovariantField& form,
                                                 std::span<const double> point) {
  if (form.rank >= spec.dim) throw PreconditionError("exterior_derivative: form degree must be below dim");
  return exterior_derivative<R>(field_jet<R>(form, spec, point));
}

/// Full-connection covariant derivative of the lowered curvature by central
/// differences: result(m,i,j,k,l) = (nabla_m R)(e_i,e_j,e_k,e_l).
Tensor5 fd_nabla_curvature(const MetricSpec& spec, std::span<const double> point, double step = 1e-4,
                           bool use_full = true);

}  // namespace geoverify
