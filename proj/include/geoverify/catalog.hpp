#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "geoverify/geometry.hpp"

namespace geoverify {

using ParamStrings = std::map<std::string, std::string>;

struct ParamInfo {
  std::string name;
  std::string default_value;
  std::string help;
};

struct CatalogEntry {
  std::string name;
  std::string tag;      // the classification result the entry instantiates
  std::string summary;  // metric and torsion in one line
  std::vector<ParamInfo> params;
  std::function<MetricSpec(const ParamStrings&)> build;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& find_entry(const std::string& name);

/// Fills defaults, rejects unknown keys, builds, and stamps `spec.catalog`.
MetricSpec build_entry(const std::string& name, const ParamStrings& params = {});

// ---------------------------------------------------------------------------
// Constructors.  All of them validate their numerical preconditions on a fixed
// internal sample and throw PreconditionError when one fails.

/// Flat R^n (Riemannian) or Minkowski R^{1,n-1} with coords y1..yn.
MetricSpec flat_space(int n, bool lorentzian, const std::string& prefix = "y");

/// eps dt^2 + e^{2 eps t} g_N with xi = d_t and S = e^{3 eps t} tau_N.
MetricSpec warped_product(int eps, const MetricSpec& base, const std::vector<ThreeFormEntry>& tau_N);

/// 2dvdu + 2avdxdu + dx^2 + (-2ve^{-ax} + C) du^2, xi = p = e^{-ax} d_v, S = -a dv^dx^du.
MetricSpec kundt3(double a, const std::string& C = "0");

struct PlaneWaveMode {
  bool homogeneous = true;
  Matrix A;            // homogeneous: H = A(e^{-u rate F}x, e^{-u rate F}x)
  double rate = 1.0;
  std::string H;       // generic profile in x1..xn (and u)
};

/// 2dvdu + sum (dx^i)^2 + (H + 2v) du^2, xi = -d_v, S = du ^ sum_{i<j} F_ij dx^i ^ dx^j.
MetricSpec plane_wave(int n, const Matrix& F, const PlaneWaveMode& mode);

/// The torsion-free plane-wave metric carrying p0 = -e^{-u} d_v and phi = -u.
MetricSpec plane_wave_metric(int n, const Matrix& F, const PlaneWaveMode& mode);

/// 2dvdu + b + H du^2 over flat b = R^m, with p0 = d_v and phi = ln u on u in [u_min, u_max].
MetricSpec walker(int m, const std::string& H, double u_min = 0.5, double u_max = 2.0);

/// xi = e^{-phi} p0 and S = e^{-phi} p0-flat ^ omega on the chart of m0.
MetricSpec deg_isotropic(const MetricSpec& m0, const std::vector<TwoFormEntry>& omega);

/// g0 + e^{2 phi} g_N with xi = e^{-phi} p0 and S = e^{-phi} tau0 + e^{3 phi} tau_N.
MetricSpec nondeg_isotropic_product(const MetricSpec& m0, const std::vector<TwoFormEntry>& omega,
                                    const MetricSpec& N, const std::vector<ThreeFormEntry>& tau_N);

/// Structure constants c(i,j,k) = coefficient of e_k in [e_i,e_j], an ad-invariant
/// inner product, and tau(X,Y,Z) = <[X,Y],Z>.
struct LiePointData {
  std::string name;
  Tensor3 structure;
  Matrix inner;
  Tensor3 tau;
};

/// `name` is su2, su2xsu2 or abelian(n).
LiePointData lie_point_data(const std::string& name);

/// Rotation e^{-uF} as expressions in the coordinate `u` (F antisymmetric).
std::vector<std::vector<Expr>> rotation_exprs(const Matrix& F, const Expr& u);

}  // namespace geoverify
