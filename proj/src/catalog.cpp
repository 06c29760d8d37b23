#include "geoverify/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "geoverify/checks.hpp"
#include "geoverify/connection.hpp"
#include "geoverify/torsion.hpp"

namespace geoverify {

namespace {

constexpr double kPreTol = 1e-8;

Expr lit(double v) { return Expr::constant(v); }

Expr coord(const MetricSpec& s, const std::string& name) {
  const auto it = std::find(s.coords.begin(), s.coords.end(), name);
  if (it == s.coords.end()) throw PreconditionError("no coordinate '" + name + "' in chart '" + s.name + "'");
  return Expr::coordinate(static_cast<int>(it - s.coords.begin()), name);
}

Expr move_into(const Expr& e, const MetricSpec& target) {
  const auto params = target.param_names();
  return rebind(e, target.coords, params);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

std::vector<std::vector<double>> probe_points(const MetricSpec& s, int count = 12) {
  SplitMix64 rng = SplitMix64(0x67656F7665726966ULL).split("probe:" + s.name);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < count; ++i) pts.push_back(sample_point(s, rng, 1e-3));
  return pts;
}

/// Parses an expression in a sub-chart so that undeclared coordinates are rejected.
Expr parse_in(const std::string& text, std::vector<std::string> coords, const MetricSpec& target,
              const std::string& what) {
  const auto params = target.param_names();
  try {
    const Expr e = Expr::parse(text, coords, params);
    return move_into(e, target);
  } catch (const ParseError& err) {
    throw PreconditionError(what + ": " + err.what());
  }
}

bool all_zero(const std::vector<ThreeFormEntry>& f) {
  return std::all_of(f.begin(), f.end(), [](const ThreeFormEntry& e) { return e.expr.is_zero(); });
}

std::vector<ThreeFormEntry> drop_zero(std::vector<ThreeFormEntry> f) {
  std::erase_if(f, [](const ThreeFormEntry& e) { return e.expr.is_zero(); });
  return f;
}

/// Full antisymmetric Expr matrix from stored i<j entries.
std::vector<std::vector<Expr>> two_form_matrix(int d, const std::vector<TwoFormEntry>& entries) {
  std::vector<std::vector<Expr>> w(static_cast<std::size_t>(d), std::vector<Expr>(static_cast<std::size_t>(d)));
  for (const auto& e : entries) {
    const auto [i, j] = e.index;
    require(0 <= i && i < j && j < d, "two-form entries need increasing indices inside the chart");
    w[i][j] = w[i][j] + e.expr;
    w[j][i] = w[j][i] - e.expr;
  }
  return w;
}

std::vector<Expr> flat_of(const MetricSpec& s, const std::vector<Expr>& v) {
  std::vector<Expr> out(static_cast<std::size_t>(s.dim));
  for (int i = 0; i < s.dim; ++i)
    for (int j = 0; j < s.dim; ++j) out[i] = out[i] + s.g(i, j) * v[j];
  return out;
}

/// a ^ omega for a 1-form and 2-form of Exprs, stored on i<j<k.
std::vector<ThreeFormEntry> wedge_expr(const std::vector<Expr>& a, const std::vector<std::vector<Expr>>& w) {
  const int d = static_cast<int>(a.size());
  std::vector<ThreeFormEntry> out;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        Expr e = a[i] * w[j][k] + a[j] * w[k][i] + a[k] * w[i][j];
        if (!e.is_zero()) out.push_back({{i, j, k}, e});
      }
  return out;
}

/// Residuals that must vanish before an isotropic construction applies.
void check_isotropic_data(const MetricSpec& m0, const std::vector<ThreeFormEntry>& tau0) {
  require(m0.p0.has_value() && m0.phi.has_value(), "isotropic construction needs p0 and phi on '" + m0.name + "'");
  const auto pts = probe_points(m0);
  MetricSpec bare = m0;
  bare.xi.reset();
  bare.S.reset();
  for (const auto& x : pts) {
    const Vector p = eval_vector(*m0.p0, m0, x);
    const Matrix g = metric_at(m0, x).g;
    require(std::abs(p.dot(g * p)) <= kPreTol, "p0 is not isotropic on '" + m0.name + "'");
  }
  require(residuals::parallel_p0(bare, pts) <= kPreTol, "p0 is not parallel on '" + m0.name + "'");
  require(residuals::p0_exact(bare, pts) <= kPreTol, "p0-flat differs from d(e^phi) on '" + m0.name + "'");
  if (!tau0.empty()) {
    MetricSpec with_tau = bare;
    with_tau.S = tau0;
    require(lemma1_check(with_tau, pts).nabla_g_tau <= kPreTol, "tau0 is not parallel on '" + m0.name + "'");
  }
}

void check_skew_base(const MetricSpec& base, const std::vector<ThreeFormEntry>& tau) {
  if (tau.empty()) return;
  MetricSpec with_tau = base;
  with_tau.xi.reset();
  with_tau.S = tau;
  const Lemma1Result r = lemma1_check(with_tau, probe_points(base));
  require(r.sigma <= kPreTol, "sigma of tau_N does not vanish on '" + base.name + "'");
  require(r.nabla_g_tau <= kPreTol, "tau_N is not parallel on '" + base.name + "'");
}

void check_signature(const MetricSpec& s, SignatureKind kind, const std::string& what) {
  for (const auto& x : probe_points(s)) {
    const Signature sig = signature_at(s, x);
    const bool ok = sig.n_zero == 0 && (kind == SignatureKind::Lorentzian ? sig.n_neg == 1 : sig.n_neg == 0);
    require(ok, what);
  }
}

ParamMap merged(const ParamMap& a, const ParamMap& b) {
  ParamMap out = a;
  for (const auto& [k, v] : b) {
    const auto it = out.find(k);
    require(it == out.end() || it->second == v, "parameter '" + k + "' clashes between charts");
    out[k] = v;
  }
  return out;
}

// --- string parameters ----------------------------------------------------

double get_double(const ParamStrings& p, const std::string& key) {
  const std::string& s = p.at(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("bad parameter " + key + "=" + s + ": expected a number");
  }
  return v;
}

int get_int(const ParamStrings& p, const std::string& key) {
  const double v = get_double(p, key);
  if (v != std::floor(v) || std::abs(v) > 64) throw ParseError("bad parameter " + key + ": expected a small integer");
  return static_cast<int>(v);
}

std::vector<double> get_list(const ParamStrings& p, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(p.at(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    ParamStrings one{{key, item}};
    out.push_back(get_double(one, key));
  }
  return out;
}

Matrix rotation_generator(int n, double f) {
  Matrix F = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; i += 2) {
    F(i, i + 1) = f;
    F(i + 1, i) = -f;
  }
  return F;
}

Matrix square_from_list(const std::vector<double>& vals, int n, const std::string& key) {
  Matrix M = Matrix::Zero(n, n);
  if (static_cast<int>(vals.size()) == n) {
    for (int i = 0; i < n; ++i) M(i, i) = vals[i];
  } else if (static_cast<int>(vals.size()) == n * n) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = vals[i * n + j];
  } else {
    throw ParseError("bad parameter " + key + ": expected " + std::to_string(n) + " or " + std::to_string(n * n) +
                     " numbers");
  }
  return M;
}

PlaneWaveMode plane_wave_mode(const ParamStrings& p, int n) {
  PlaneWaveMode mode;
  const std::string& m = p.at("mode");
  if (m == "homogeneous") {
    mode.homogeneous = true;
    mode.A = square_from_list(get_list(p, "A"), n, "A");
    mode.rate = get_double(p, "rate");
  } else if (m == "generic") {
    mode.homogeneous = false;
    mode.H = p.at("H");
  } else {
    throw ParseError("bad parameter mode=" + m + ": expected homogeneous or generic");
  }
  return mode;
}

Matrix plane_wave_F(const ParamStrings& p, int n) {
  if (!p.at("F").empty()) return square_from_list(get_list(p, "F"), n, "F");
  return rotation_generator(n, get_double(p, "f"));
}

std::vector<ThreeFormEntry> unit_three_form(double c, int offset) {
  if (c == 0.0) return {};
  return {{{offset, offset + 1, offset + 2}, lit(c)}};
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::vector<Expr>> rotation_exprs(const Matrix& F, const Expr& u) {
  const auto n = F.rows();
  require(F.cols() == n, "F must be square");
  const double scale = std::max(1.0, F.cwiseAbs().maxCoeff());
  require((F + F.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "F must be antisymmetric");
  std::vector<std::vector<Expr>> E(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  if (n == 0) return E;
  // F = Q T Q^t with T block diagonal (F is normal); exponentiate block by block.
  const Eigen::RealSchur<Matrix> schur(F);
  const Matrix& T = schur.matrixT();
  const Matrix& Q = schur.matrixU();
  Matrix fixed = Matrix::Zero(n, n);
  struct Block {
    double w;
    Matrix c_cos, c_sin;
  };
  std::vector<Block> blocks;
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && std::abs(T(i + 1, i)) > 1e-12 * scale) {
      const Matrix M = T.block(i, i, 2, 2);
      const double w = std::sqrt(-M(0, 1) * M(1, 0));
      const Matrix Qb = Q.middleCols(i, 2);
      Matrix Mc = M;
      Mc.diagonal().array() -= 0.5 * M.trace();
      // e^{-uM} = cos(wu) I - sin(wu) M / w for the traceless block.
      blocks.push_back({w, Qb * Qb.transpose(), -Qb * (Mc / w) * Qb.transpose()});
      i += 2;
    } else {
      fixed += Q.col(i) * Q.col(i).transpose();
      i += 1;
    }
  }
  auto term = [](double c, const Expr& f) { return std::abs(c) < 1e-15 ? lit(0.0) : lit(c) * f; };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Expr e = std::abs(fixed(i, j)) < 1e-15 ? lit(0.0) : lit(fixed(i, j));
      for (const auto& b : blocks) {
        e = e + term(b.c_cos(i, j), cos(lit(b.w) * u)) + term(b.c_sin(i, j), sin(lit(b.w) * u));
      }
      E[i][j] = e;
    }
  return E;
}

MetricSpec flat_space(int n, bool lorentzian, const std::string& prefix) {
  require(n >= 1, "flat space needs n >= 1");
  std::vector<std::string> coords;
  for (int i = 0; i < n; ++i) coords.push_back(prefix + std::to_string(i + 1));
  MetricSpec s(lorentzian ? "minkowski" + std::to_string(n) : "euclidean" + std::to_string(n), coords);
  for (int i = 0; i < n; ++i) s.set_g(i, i, lit(lorentzian && i == 0 ? -1.0 : 1.0));
  s.signature = lorentzian ? SignatureKind::Lorentzian : SignatureKind::Riemannian;
  return s;
}

MetricSpec warped_product(int eps, const MetricSpec& base, const std::vector<ThreeFormEntry>& tau_N) {
  require(eps == 1 || eps == -1, "warped_product: eps must be +1 or -1");
  require(std::find(base.coords.begin(), base.coords.end(), "t") == base.coords.end(),
          "warped_product: base chart already uses 't'");
  check_signature(base, eps < 0 ? SignatureKind::Riemannian : SignatureKind::Lorentzian,
                  eps < 0 ? "warped_product: eps = -1 needs a Riemannian base"
                          : "warped_product: eps = +1 needs a Lorentzian base");
  check_skew_base(base, tau_N);

  std::vector<std::string> coords{"t"};
  coords.insert(coords.end(), base.coords.begin(), base.coords.end());
  MetricSpec s("warped_product", coords, base.params);
  const Expr t = Expr::coordinate(0, "t");
  s.set_g(0, 0, lit(eps));
  const Expr w2 = exp(lit(2.0 * eps) * t);
  for (int i = 0; i < base.dim; ++i)
    for (int j = i; j < base.dim; ++j) s.set_g(i + 1, j + 1, w2 * move_into(base.g(i, j), s));
  s.domain[0] = {-1.0, 1.0};
  for (int i = 0; i < base.dim; ++i) s.domain[i + 1] = base.domain[i];
  std::vector<Expr> xi(static_cast<std::size_t>(s.dim), lit(0.0));
  xi[0] = lit(1.0);
  s.xi = xi;
  const Expr w3 = exp(lit(3.0 * eps) * t);
  std::vector<ThreeFormEntry> S;
  for (const auto& e : tau_N) S.push_back({{e.index[0] + 1, e.index[1] + 1, e.index[2] + 1}, w3 * move_into(e.expr, s)});
  S = drop_zero(S);
  if (!S.empty()) s.S = S;
  s.params["eps"] = eps;
  s.validate();
  return s;
}

MetricSpec kundt3(double a, const std::string& C) {
  require(a != 0.0, "kundt3: a must be nonzero");
  MetricSpec s("kundt3", {"v", "x", "u"}, {{"a", a}});
  const Expr v = coord(s, "v"), x = coord(s, "x");
  const Expr pa = Expr::parameter("a");
  const Expr c = parse_in(C, {"x", "u"}, s, "kundt3: C must be a function of (x,u)");
  s.set_g(0, 2, lit(1.0));
  s.set_g(1, 1, lit(1.0));
  s.set_g(1, 2, pa * v);
  s.set_g(2, 2, lit(-2.0) * v * exp(-(pa * x)) + c);
  s.xi = std::vector<Expr>{exp(-(pa * x)), lit(0.0), lit(0.0)};
  // sqrt|det g| = 1 here, so Vol_g = dv^dx^du in coordinate order.
  s.S = std::vector<ThreeFormEntry>{{{0, 1, 2}, -pa}};
  s.manifest = std::vector<std::string>{"bianchi_display", "kundt_expansion", "kundt_geodesic", "kundt_p_condition",
                                        "kundt_shear",     "kundt_twist",     "metric_compat",  "nabla_S",
                                        "nabla_xi",        "signature",       "twistor_free"};
  s.notes.push_back("Vol_g = sqrt|det g| dv^dx^du in coordinate order; S = -a Vol_g (volume_sign = -1)");
  s.validate();
  return s;
}

MetricSpec plane_wave_metric(int n, const Matrix& F, const PlaneWaveMode& mode) {
  require(n >= 2 && n % 2 == 0, "plane_wave: n must be even and at least 2");
  require(F.rows() == n && F.cols() == n, "plane_wave: F must be n x n");
  std::vector<std::string> coords{"v"};
  std::vector<std::string> profile_coords;
  for (int i = 0; i < n; ++i) {
    coords.push_back("x" + std::to_string(i + 1));
    profile_coords.push_back(coords.back());
  }
  coords.push_back("u");
  profile_coords.push_back("u");
  MetricSpec s("plane_wave", coords);
  const Expr v = coord(s, "v"), u = coord(s, "u");
  const auto E = rotation_exprs(mode.rate * F, u);  // also rejects a non-antisymmetric F

  Expr H;
  if (mode.homogeneous) {
    require(mode.A.rows() == n && mode.A.cols() == n, "plane_wave: A must be n x n");
    require((mode.A - mode.A.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "plane_wave: A must be symmetric");
    std::vector<Expr> y(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) y[k] = y[k] + E[k][j] * Expr::coordinate(j + 1, coords[j + 1]);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        if (mode.A(k, l) != 0.0) H = H + lit(mode.A(k, l)) * y[k] * y[l];
  } else {
    H = parse_in(mode.H, profile_coords, s, "plane_wave: H must be a function of (x, u)");
  }
  s.set_g(0, n + 1, lit(1.0));
  for (int i = 1; i <= n; ++i) s.set_g(i, i, lit(1.0));
  s.set_g(n + 1, n + 1, H + lit(2.0) * v);
  std::vector<Expr> p0(static_cast<std::size_t>(s.dim), lit(0.0));
  p0[0] = -exp(-u);
  s.p0 = p0;
  s.phi = -u;
  s.manifest = std::vector<std::string>{"lc_bianchi", "metric_compat", "p0_exact", "parallel_p0", "signature"};
  s.validate();
  return s;
}

MetricSpec plane_wave(int n, const Matrix& F, const PlaneWaveMode& mode) {
  MetricSpec s = plane_wave_metric(n, F, mode);
  std::vector<Expr> xi(static_cast<std::size_t>(s.dim), lit(0.0));
  xi[0] = lit(-1.0);
  s.xi = xi;
  std::vector<ThreeFormEntry> S;
  // du ^ dx^i ^ dx^j = dx^i ^ dx^j ^ du.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (F(i, j) != 0.0) S.push_back({{i + 1, j + 1, n + 1}, lit(F(i, j))});
  if (!S.empty()) s.S = S;
  std::vector<std::string> manifest{"bianchi_display", "metric_compat", "nabla_S",           "nabla_xi",
                                    "p0_exact",        "parallel_p0",   "signature",         "torsion_norm_zero",
                                    "twistor_free"};
  if (mode.homogeneous) manifest.push_back("nabla_R_fd");
  std::sort(manifest.begin(), manifest.end());
  s.manifest = manifest;
  s.validate();
  return s;
}

MetricSpec walker(int m, const std::string& H, double u_min, double u_max) {
  require(m >= 0, "walker: base dimension must be non-negative");
  require(u_min > 0.0 && u_min < u_max, "walker: the u-interval must lie inside (0, inf)");
  std::vector<std::string> coords{"v"};
  std::vector<std::string> profile_coords;
  for (int i = 0; i < m; ++i) {
    coords.push_back("x" + std::to_string(i + 1));
    profile_coords.push_back(coords.back());
  }
  coords.push_back("u");
  profile_coords.push_back("u");
  MetricSpec s("walker", coords);
  const Expr u = coord(s, "u");
  s.set_g(0, m + 1, lit(1.0));
  for (int i = 1; i <= m; ++i) s.set_g(i, i, lit(1.0));
  s.set_g(m + 1, m + 1, parse_in(H, profile_coords, s, "walker: H must be a function of the base and u"));
  s.domain[static_cast<std::size_t>(m + 1)] = {u_min, u_max};
  std::vector<Expr> p0(static_cast<std::size_t>(s.dim), lit(0.0));
  p0[0] = lit(1.0);
  s.p0 = p0;
  s.phi = log(u);
  s.manifest = std::vector<std::string>{"lc_bianchi", "metric_compat", "p0_exact", "parallel_p0", "signature"};
  s.validate();
  return s;
}

MetricSpec deg_isotropic(const MetricSpec& m0, const std::vector<TwoFormEntry>& omega) {
  require(m0.p0.has_value() && m0.phi.has_value(), "deg_isotropic: m0 needs p0 and phi");
  const auto tau0 = wedge_expr(flat_of(m0, *m0.p0), two_form_matrix(m0.dim, omega));
  check_isotropic_data(m0, tau0);
  MetricSpec s = m0;
  s.name = "deg_isotropic";
  const Expr w = exp(-*m0.phi);
  std::vector<Expr> xi;
  for (const auto& c : *m0.p0) xi.push_back(w * c);
  s.xi = xi;
  std::vector<ThreeFormEntry> S;
  for (const auto& e : tau0) S.push_back({e.index, w * e.expr});
  S = drop_zero(S);
  if (S.empty()) {
    s.S.reset();
  } else {
    s.S = S;
  }
  s.manifest = std::vector<std::string>{"bianchi_display", "metric_compat", "nabla_S",           "nabla_xi",
                                        "p0_exact",        "parallel_p0",   "signature",         "torsion_norm_zero",
                                        "twistor_free"};
  s.validate();
  return s;
}

MetricSpec nondeg_isotropic_product(const MetricSpec& m0, const std::vector<TwoFormEntry>& omega, const MetricSpec& N,
                                    const std::vector<ThreeFormEntry>& tau_N) {
  require(!tau_N.empty() && !all_zero(tau_N), "nondeg_isotropic_product: tau_N = 0 belongs to deg_isotropic");
  require(m0.p0.has_value() && m0.phi.has_value(), "nondeg_isotropic_product: m0 needs p0 and phi");
  check_signature(N, SignatureKind::Riemannian, "nondeg_isotropic_product: N must be Riemannian");
  check_skew_base(N, tau_N);
  const auto tau0 = wedge_expr(flat_of(m0, *m0.p0), two_form_matrix(m0.dim, omega));
  check_isotropic_data(m0, tau0);
  for (const auto& c : N.coords) {
    require(std::find(m0.coords.begin(), m0.coords.end(), c) == m0.coords.end(),
            "nondeg_isotropic_product: coordinate '" + c + "' appears in both charts");
  }

  std::vector<std::string> coords = m0.coords;
  coords.insert(coords.end(), N.coords.begin(), N.coords.end());
  MetricSpec s("nondeg_isotropic_product", coords, merged(m0.params, N.params));
  const int d0 = m0.dim;
  const Expr phi = move_into(*m0.phi, s);
  for (int i = 0; i < d0; ++i)
    for (int j = i; j < d0; ++j) s.set_g(i, j, move_into(m0.g(i, j), s));
  const Expr w2 = exp(lit(2.0) * phi);
  for (int i = 0; i < N.dim; ++i)
    for (int j = i; j < N.dim; ++j) s.set_g(d0 + i, d0 + j, w2 * move_into(N.g(i, j), s));
  for (int i = 0; i < d0; ++i) s.domain[i] = m0.domain[i];
  for (int i = 0; i < N.dim; ++i) s.domain[d0 + i] = N.domain[i];

  const Expr w = exp(-phi);
  std::vector<Expr> xi(static_cast<std::size_t>(s.dim), lit(0.0));
  std::vector<Expr> p0(static_cast<std::size_t>(s.dim), lit(0.0));
  for (int i = 0; i < d0; ++i) {
    p0[i] = move_into((*m0.p0)[i], s);
    xi[i] = w * p0[i];
  }
  s.xi = xi;
  s.p0 = p0;
  s.phi = phi;
  std::vector<ThreeFormEntry> S;
  for (const auto& e : tau0) S.push_back({e.index, w * move_into(e.expr, s)});
  const Expr w3 = exp(lit(3.0) * phi);
  for (const auto& e : tau_N) {
    S.push_back({{e.index[0] + d0, e.index[1] + d0, e.index[2] + d0}, w3 * move_into(e.expr, s)});
  }
  s.S = drop_zero(S);
  s.manifest = std::vector<std::string>{"bianchi_display", "metric_compat", "nabla_S",     "nabla_xi",
                                        "p0_exact",        "parallel_p0",   "signature",   "twistor_free"};
  s.validate();
  return s;
}

LiePointData lie_point_data(const std::string& name) {
  LiePointData out;
  out.name = name;
  auto su2_into = [](Tensor3& c, int offset) {
    // [e_i, e_j] = eps_ijk e_k
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const std::array<int, 3> idx{i, j, k};
          c(offset + i, offset + j, offset + k) = permutation_sign<3>(idx);
        }
  };
  int dim = 0;
  if (name == "su2") {
    dim = 3;
    out.structure = zero_tensor<3>(dim);
    su2_into(out.structure, 0);
  } else if (name == "su2xsu2") {
    dim = 6;
    out.structure = zero_tensor<3>(dim);
    su2_into(out.structure, 0);
    su2_into(out.structure, 3);
  } else if (name.starts_with("abelian(") && name.ends_with(")")) {
    const std::string num = name.substr(8, name.size() - 9);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec != std::errc() || ptr != num.data() + num.size() || n < 1 || n > kMaxDim) {
      throw ParseError("lie_point_data: bad abelian dimension in '" + name + "'");
    }
    dim = n;
    out.structure = zero_tensor<3>(dim);
  } else {
    throw ParseError("lie_point_data: unknown algebra '" + name + "'");
  }
  out.inner = Matrix::Identity(dim, dim);
  out.tau = Tensor3(dim, dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        double v = 0.0;
        for (int m = 0; m < dim; ++m) v += out.structure(i, j, m) * out.inner(m, k);
        out.tau(i, j, k) = v;
      }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"minkowski", "flat Lorentzian reference, no torsion", "-dx1^2 + dx2^2 + ... + dxn^2",
       {{"dim", "4", "dimension"}},
       [](const ParamStrings& p) {
         MetricSpec s = flat_space(get_int(p, "dim"), true, "x");
         s.name = "minkowski";
         return s;
       }},
      {"de_sitter", "vectorial torsion with nabla xi = 0: eps dt^2 + e^{2 eps t} g_N, tau_N = 0",
       "-dt^2 + e^{-2t} sum dy^2 (flat slicing), xi = d_t",
       {{"n", "3", "spatial dimension"}},
       [](const ParamStrings& p) {
         MetricSpec s = warped_product(-1, flat_space(get_int(p, "n"), false), {});
         s.name = "de_sitter";
         s.manifest = std::vector<std::string>{"bianchi_display", "metric_compat", "nabla_xi",
                                               "signature",       "twistor_free"};
         return s;
       }},
      {"warped_product", "non-isotropic parallel xi: warped product with S = e^{3 eps t} tau_N",
       "eps dt^2 + e^{2 eps t} g_N, xi = d_t, tau_N = c dy1^dy2^dy3 (flat R^n, or Minkowski if eps = 1)",
       {{"eps", "-1", "sign of g(xi, xi)"}, {"n", "3", "base dimension"}, {"c", "1", "tau_N coefficient"}},
       [](const ParamStrings& p) {
         const int eps = get_int(p, "eps");
         const int n = get_int(p, "n");
         const double c = get_double(p, "c");
         require(n >= 3 || c == 0.0, "warped_product: tau_N needs n >= 3");
         MetricSpec s = warped_product(eps, flat_space(n, eps > 0), unit_three_form(c, 0));
         s.manifest = std::vector<std::string>{"bianchi_display", "metric_compat", "nabla_S",
                                               "nabla_xi",        "signature",     "twistor_free"};
         return s;
       }},
      {"kundt3", "dimension 3, isotropic parallel xi with S = a Vol_g, a != 0: Kundt metric with p = e^{-ax} d_v",
       "2dvdu + 2avdxdu + dx^2 + (-2ve^{-ax} + C(x,u)) du^2",
       {{"a", "1", "nonzero torsion scale"}, {"C", "0", "arbitrary function of (x,u)"}},
       [](const ParamStrings& p) { return kundt3(get_double(p, "a"), p.at("C")); }},
      {"plane_wave", "degenerate isotropic torsion: singular homogeneous plane wave",
       "2dvdu + sum dx^2 + (H + 2v) du^2, xi = -d_v, S = du ^ sum F_ij dx^i ^ dx^j",
       {{"n", "2", "even transverse dimension"},
        {"f", "1", "rotation rate; F = f times the standard complex structure"},
        {"F", "", "explicit row-major F (overrides f)"},
        {"mode", "homogeneous", "homogeneous | generic"},
        {"A", "1,2", "homogeneous mode: diagonal or row-major symmetric A"},
        {"rate", "1", "homogeneous mode: H = A(e^{-u rate F}x, e^{-u rate F}x)"},
        {"H", "x1^4", "generic mode: profile H(x, u)"}},
       [](const ParamStrings& p) {
         const int n = get_int(p, "n");
         return plane_wave(n, plane_wave_F(p, n), plane_wave_mode(p, n));
       }},
      {"walker", "Walker metric with parallel isotropic p0 = d_v", "2dvdu + sum dx^2 + H du^2, phi = ln u",
       {{"m", "2", "base dimension"},
        {"H", "x1^2*u", "profile H(x, u)"},
        {"u_min", "0.5", "lower u bound (> 0)"},
        {"u_max", "2", "upper u bound"}},
       [](const ParamStrings& p) {
         return walker(get_int(p, "m"), p.at("H"), get_double(p, "u_min"), get_double(p, "u_max"));
       }},
      {"deg_isotropic_walker", "isotropic xi with ||S|| = 0: xi = e^{-phi} p0, S = e^{-phi} p0-flat ^ omega",
       "Walker chart, phi = ln u, omega = w dx1^dx2",
       {{"m", "2", "base dimension (>= 2)"}, {"w", "1", "omega coefficient"}, {"H", "0", "profile H(x, u)"}},
       [](const ParamStrings& p) {
         const int m = get_int(p, "m");
         require(m >= 2, "deg_isotropic_walker: m must be at least 2");
         MetricSpec s = deg_isotropic(walker(m, p.at("H")), {{{1, 2}, lit(get_double(p, "w"))}});
         s.name = "deg_isotropic_walker";
         return s;
       }},
      {"deg_isotropic_plane_wave", "isotropic xi with ||S|| = 0 over the plane wave (p0 = -e^{-u} d_v, phi = -u)",
       "plane-wave metric, omega = -F, so S = du ^ F",
       {{"n", "2", "even transverse dimension"},
        {"f", "1", "rotation rate"},
        {"F", "", "explicit row-major F (overrides f)"},
        {"mode", "homogeneous", "homogeneous | generic"},
        {"A", "1,2", "homogeneous mode: diagonal or row-major symmetric A"},
        {"rate", "1", "homogeneous mode: H = A(e^{-u rate F}x, e^{-u rate F}x)"},
        {"H", "x1^4", "generic mode: profile H(x, u)"}},
       [](const ParamStrings& p) {
         const int n = get_int(p, "n");
         const Matrix F = plane_wave_F(p, n);
         std::vector<TwoFormEntry> omega;
         for (int i = 0; i < n; ++i)
           for (int j = i + 1; j < n; ++j)
             if (F(i, j) != 0.0) omega.push_back({{i + 1, j + 1}, lit(-F(i, j))});
         MetricSpec s = deg_isotropic(plane_wave_metric(n, F, plane_wave_mode(p, n)), omega);
         s.name = "deg_isotropic_plane_wave";
         return s;
       }},
      {"nondeg_isotropic_product", "isotropic xi with ||S|| != 0: g0 + e^{2 phi} g_N",
       "Walker g0 (phi = ln u) times flat R^k, S = e^{3 phi} c dy1^dy2^dy3",
       {{"base_dim", "0", "Walker base dimension (0 gives 2dvdu)"},
        {"H", "0", "Walker profile H(x, u)"},
        {"k", "3", "dimension of N (>= 3)"},
        {"c", "1", "tau_N coefficient (nonzero)"}},
       [](const ParamStrings& p) {
         const int k = get_int(p, "k");
         require(k >= 3, "nondeg_isotropic_product: k must be at least 3");
         const MetricSpec m0 = walker(get_int(p, "base_dim"), p.at("H"));
         return nondeg_isotropic_product(m0, {}, flat_space(k, false), unit_three_form(get_double(p, "c"), 0));
       }},
      {"lorentz3_volume", "skew torsion with sigma_tau = 0: volume form on R^{1,2}", "Minkowski3, tau = a dx1^dx2^dx3",
       {{"a", "1", "torsion scale"}},
       [](const ParamStrings& p) {
         MetricSpec s = flat_space(3, true, "x");
         s.name = "lorentz3_volume";
         s.params["a"] = get_double(p, "a");
         s.S = std::vector<ThreeFormEntry>{{{0, 1, 2}, Expr::parameter("a")}};
         s.manifest = std::vector<std::string>{"bianchi_display", "identity_action", "identity_dT1", "identity_dT2",
                                               "lemma1_holds",    "lemma1_uniform",  "metric_compat", "nabla_S"};
         return s;
       }},
      {"walker_skew", "skew torsion p-flat ^ omega with a parallel screen 2-form",
       "Walker chart, tau = w du^dx1^dx2",
       {{"m", "2", "base dimension (>= 2)"}, {"w", "1", "omega coefficient"}, {"H", "x1^2*u", "profile H(x, u)"}},
       [](const ParamStrings& p) {
         const int m = get_int(p, "m");
         require(m >= 2, "walker_skew: m must be at least 2");
         MetricSpec s = walker(m, p.at("H"));
         s.name = "walker_skew";
         s.S = std::vector<ThreeFormEntry>{{{1, 2, m + 1}, lit(get_double(p, "w"))}};
         s.manifest = std::vector<std::string>{"identity_action", "identity_dT1",   "identity_dT2", "lemma1_holds",
                                               "lemma1_uniform",  "metric_compat",  "nabla_S",      "parallel_p0",
                                               "signature",       "torsion_norm_zero"};
         return s;
       }},
  };
  return entries;
}

const CatalogEntry& find_entry(const std::string& name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return e;
  throw ParseError("unknown catalog entry '" + name + "'");
}

MetricSpec build_entry(const std::string& name, const ParamStrings& params) {
  const CatalogEntry& entry = find_entry(name);
  ParamStrings full;
  for (const auto& info : entry.params) full[info.name] = info.default_value;
  for (const auto& [k, v] : params) {
    if (!full.count(k)) throw ParseError("bad parameter '" + k + "' for catalog entry '" + name + "'");
    full[k] = v;
  }
  MetricSpec s = entry.build(full);
  s.catalog = CatalogRef{name, full};
  return s;
}

}  // namespace geoverify
