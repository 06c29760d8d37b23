#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unsupported/Eigen/CXX11/Tensor>
#include <utility>
#include <vector>

#include "geoverify/expr.hpp"
#include "geoverify/random.hpp"

namespace geoverify {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Tensor3 = Eigen::Tensor<double, 3>;
using Tensor4 = Eigen::Tensor<double, 4>;
using Tensor5 = Eigen::Tensor<double, 5>;

/// One stored component i < j < k of an antisymmetric 3-form.
struct ThreeFormEntry {
  std::array<int, 3> index;
  Expr expr;
};

/// One stored component i < j of an antisymmetric 2-form.
struct TwoFormEntry {
  std::array<int, 2> index;
  Expr expr;
};

enum class SignatureKind { Lorentzian, Riemannian, Any };

/// Reference back to the catalog constructor that produced a spec.
struct CatalogRef {
  std::string entry;
  std::map<std::string, std::string> params;
};

/// A coordinate chart carrying a metric and optional torsion data (vector xi, 3-form S).
///
/// `metric` holds all dim*dim entries with (i,j) and (j,i) sharing one Expr.
/// `p0` and `phi` are the auxiliary parallel null field and potential used by
/// the isotropic constructions; they are optional for bare metrics.
struct MetricSpec {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  ParamMap params;
  std::vector<Expr> metric;
  std::optional<std::vector<Expr>> xi;
  std::optional<std::vector<ThreeFormEntry>> S;
  std::vector<std::pair<double, double>> domain;
  std::optional<std::vector<std::string>> manifest;
  std::optional<std::vector<Expr>> p0;
  std::optional<Expr> phi;
  std::optional<CatalogRef> catalog;
  SignatureKind signature = SignatureKind::Lorentzian;
  std::vector<std::string> notes;  // conventions worth surfacing in reports

  MetricSpec() = default;
  MetricSpec(std::string name, std::vector<std::string> coords, ParamMap params = {});

  const Expr& g(int i, int j) const { return metric[static_cast<std::size_t>(i * dim + j)]; }
  void set_g(int i, int j, Expr e);
  void set_g(int i, int j, std::string_view text) { set_g(i, j, parse(text)); }

  std::vector<std::string> param_names() const;
  /// Parses `text` in this chart.
  Expr parse(std::string_view text) const;

  bool has_torsion() const { return xi.has_value() || S.has_value(); }

  /// Throws ParseError when the structural invariants do not hold.
  void validate() const;
};

/// Metric and its exact first and second partial derivatives at a point.
///
/// dg(i,j,k) = d_k g_ij, d2g(i,j,k,l) = d_l d_k g_ij.
struct MetricValue {
  Matrix g;
  Matrix g_inv;
  Tensor3 dg;
  Tensor4 d2g;
  int dim() const { return static_cast<int>(g.rows()); }
};

struct Signature {
  int n_neg = 0;
  int n_zero = 0;
  int n_pos = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Witt frame p, e_1..e_n, q: g(p,q)=1, g(e_i,e_j)=delta_ij, all other products zero.
struct WittFrame {
  Vector p;
  Matrix e;  // columns e_1..e_n
  Vector q;
  /// Columns p, e_1, ..., e_n, q.
  Matrix basis() const;
};

MetricValue metric_at(const MetricSpec& spec, std::span<const double> point);

/// Inverse by full-pivot elimination; throws DegenerateMetricError when |det g|
/// falls below 1e-12 relative to the entry scale.
Matrix invert_metric(const Matrix& g);

Signature signature_of(const Matrix& g);
Signature signature_at(const MetricSpec& spec, std::span<const double> point);
inline bool is_lorentzian(const Signature& s) { return s.n_neg == 1 && s.n_zero == 0; }

Vector lower(const Vector& v, const Matrix& g);
/// Raises a covector using the metric itself (solves g v = omega).
Vector raise(const Vector& omega, const Matrix& g);

WittFrame witt_frame(const Matrix& g, const Vector& p);
WittFrame witt_frame_at(const MetricSpec& spec, std::span<const double> point, const Vector& p);

/// Witt Gram matrix of R^{1,n+1} in the basis p, e_1..e_n, q.
Matrix witt_gram(int n);

/// Uniform sample inside the domain box, keeping `margin` away from every face.
std::vector<double> sample_point(const MetricSpec& spec, SplitMix64& rng, double margin = 0.0);
bool inside_domain(const MetricSpec& spec, std::span<const double> point, double margin = 0.0);

/// Evaluates a vector of expressions (values only).
Vector eval_vector(const std::vector<Expr>& exprs, const MetricSpec& spec, std::span<const double> point);

}  // namespace geoverify
