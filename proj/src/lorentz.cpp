#include "geoverify/lorentz.hpp"

#include <algorithm>
#include <cmath>

#include "geoverify/torsion.hpp"

namespace geoverify {

Matrix bivector_matrix(const LorentzBivector& b) {
  const int n = b.n();
  Matrix m = Matrix::Zero(n + 2, n + 2);
  m(0, 0) = b.a;
  m(n + 1, n + 1) = -b.a;
  if (n > 0) {
    m.block(0, 1, 1, n) = -b.X.transpose();
    m.block(1, 1, n, n) = b.A;
    m.block(1, n + 1, n, 1) = b.X;
  }
  return m;
}

LorentzBivector matrix_bivector(const Matrix& m, double tol) {
  const auto d = m.rows();
  if (d < 2 || m.cols() != d) throw PreconditionError("matrix_bivector: expected a square matrix of size n+2");
  const int n = static_cast<int>(d) - 2;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  auto bad = [&](double v) { return std::abs(v) > tol * scale; };
  // Lower-left blocks must vanish and the diagonal/antisymmetric pattern must hold.
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < r; ++c) {
      const bool inside_A = r >= 1 && r <= n && c >= 1 && c <= n;
      if (!inside_A && bad(m(r, c))) throw PreconditionError("matrix_bivector: not in stabilizer shape");
    }
  if (bad(m(0, n + 1)) || bad(m(0, 0) + m(n + 1, n + 1))) {
    throw PreconditionError("matrix_bivector: not in stabilizer shape");
  }
  LorentzBivector b(n);
  b.a = m(0, 0);
  if (n > 0) {
    b.A = m.block(1, 1, n, n);
    b.X = m.block(1, n + 1, n, 1);
    if ((b.A + b.A.transpose()).cwiseAbs().maxCoeff() > tol * scale ||
        (m.block(0, 1, 1, n).transpose() + b.X).cwiseAbs().maxCoeff() > tol * scale) {
      throw PreconditionError("matrix_bivector: not in stabilizer shape");
    }
  }
  return b;
}

std::vector<LorentzBivector> stabilizer_basis(StabilizerKind kind, int n) {
  std::vector<LorentzBivector> out;
  if (kind == StabilizerKind::Line) {
    LorentzBivector b(n);
    b.a = 1.0;
    out.push_back(b);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      LorentzBivector b(n);
      b.A(i, j) = -1.0;  // e_i ^ e_j sends e_i to e_j
      b.A(j, i) = 1.0;
      out.push_back(b);
    }
  for (int i = 0; i < n; ++i) {
    LorentzBivector b(n);
    b.X(i) = 1.0;
    out.push_back(b);
  }
  return out;
}

std::vector<Matrix> as_matrices(const std::vector<LorentzBivector>& basis) {
  std::vector<Matrix> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(bivector_matrix(b));
  return out;
}

Matrix wedge_endomorphism(const Vector& x, const Vector& y, const Matrix& g) {
  // Column k is (X^Y)e_k = g(X,e_k) Y - g(Y,e_k) X.
  return y * (g * x).transpose() - x * (g * y).transpose();
}

bool is_g_antisymmetric_matrix(const Matrix& m, const Matrix& g, double tol) {
  const Matrix gm = g * m;
  return (gm + gm.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, gm.cwiseAbs().maxCoeff());
}

Tensor3 wedge3(const Vector& a, const Vector& b, const Vector& c) {
  const auto d = a.size();
  Tensor3 t(d, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k) {
        t(i, j, k) = a(i) * (b(j) * c(k) - b(k) * c(j)) - a(j) * (b(i) * c(k) - b(k) * c(i)) +
                     a(k) * (b(i) * c(j) - b(j) * c(i));
      }
  return t;
}

Tensor3 wedge1_2(const Vector& a, const Matrix& omega) {
  const auto d = a.size();
  Tensor3 t(d, d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k) t(i, j, k) = a(i) * omega(j, k) + a(j) * omega(k, i) + a(k) * omega(i, j);
  return t;
}

namespace {

Vector flatten(const Tensor3& t) {
  return Eigen::Map<const Vector>(t.data(), t.size());
}

}  // namespace

std::vector<Matrix> annihilator(const PointThreeForm& tau, const std::vector<Matrix>& subalg, double tol) {
  if (subalg.empty()) return {};
  Matrix lin(tau.size(), static_cast<Eigen::Index>(subalg.size()));
  for (std::size_t k = 0; k < subalg.size(); ++k) {
    lin.col(static_cast<Eigen::Index>(k)) = flatten(form_action<3>(subalg[k], tau));
  }
  Eigen::FullPivLU<Matrix> lu(lin);
  lu.setThreshold(tol);
  const Matrix kernel = lu.kernel();
  std::vector<Matrix> out;
  if (lu.rank() == lin.cols()) return out;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    Matrix m = Matrix::Zero(subalg[0].rows(), subalg[0].cols());
    for (std::size_t k = 0; k < subalg.size(); ++k) m += kernel(static_cast<Eigen::Index>(k), c) * subalg[k];
    out.push_back(m);
  }
  return out;
}

double commutator_closure_residual(const std::vector<Matrix>& basis) {
  if (basis.empty()) return 0.0;
  const auto d = basis[0].rows();
  Matrix span(d * d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    span.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vector>(basis[k].data(), d * d);
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(span);
  double worst = 0.0;
  for (const auto& x : basis)
    for (const auto& y : basis) {
      const Matrix c = x * y - y * x;
      const Vector v = Eigen::Map<const Vector>(c.data(), d * d);
      const Vector coeffs = qr.solve(v);
      worst = std::max(worst, (span * coeffs - v).cwiseAbs().maxCoeff());
    }
  return worst;
}

std::string to_string(TorsionShape s) {
  switch (s) {
    case TorsionShape::Zero:
      return "zero";
    case TorsionShape::PWedgeOmega:
      return "p^omega";
    case TorsionShape::PWedgeOmegaPlusE:
      return "p^omega+omega_E";
    case TorsionShape::Other:
      break;
  }
  return "other";
}

ShapeResult classify_shape(const PointThreeForm& S, double tol) {
  const int d = static_cast<int>(S.dimension(0));
  if (d < 2) throw PreconditionError("classify_shape: Witt dimension must be at least 2");
  const int n = d - 2;
  const int q = n + 1;
  ShapeResult r;
  r.omega = Matrix::Zero(n, n);
  r.omega_E = zero_tensor<3>(d);
  r.norm = torsion_norm(S, witt_gram(n));
  const double scale = std::max(1.0, max_abs<3>(S));
  if (max_abs<3>(S) <= tol) {
    r.shape = TorsionShape::Zero;
    return r;
  }
  // A slot filled with p only sees the q-flat leg.
  double p_leg = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) p_leg = std::max(p_leg, std::abs(S(0, j, k)));
  if (p_leg > tol * scale) {
    r.shape = TorsionShape::Other;
    r.residual = p_leg;
    return r;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.omega(i, j) = S(q, i + 1, j + 1);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) r.omega_E(i, j, k) = S(i, j, k);

  Vector p_flat = Vector::Zero(d);
  p_flat(q) = 1.0;
  Matrix omega_full = Matrix::Zero(d, d);
  if (n > 0) omega_full.block(1, 1, n, n) = r.omega;
  const Tensor3 rebuilt = wedge1_2(p_flat, omega_full) + r.omega_E;
  r.residual = max_abs_diff<3>(S, rebuilt);
  if (r.residual > tol * scale) {
    r.shape = TorsionShape::Other;
  } else if (max_abs<3>(r.omega_E) <= tol * scale) {
    r.shape = TorsionShape::PWedgeOmega;
  } else {
    r.shape = TorsionShape::PWedgeOmegaPlusE;
  }
  return r;
}

bool invariant_subspace_check(const std::vector<Matrix>& gens, const Matrix& subspace, double tol) {
  if (subspace.cols() == 0) return true;
  const Eigen::ColPivHouseholderQR<Matrix> qr(subspace);
  const auto rank = qr.rank();
  const Matrix Q = Matrix(qr.householderQ()).leftCols(rank);
  const Matrix P = Matrix::Identity(subspace.rows(), subspace.rows()) - Q * Q.transpose();
  for (const auto& m : gens) {
    const Matrix image = m * Q;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((P * image).cwiseAbs().maxCoeff() > tol * scale) return false;
  }
  return true;
}

Vector screen_project(const Vector& v, const WittFrame& frame, const Matrix& g, double tol) {
  const double gpv = frame.p.dot(g * v);
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff() * frame.p.cwiseAbs().maxCoeff() * g.cwiseAbs().maxCoeff());
  if (std::abs(gpv) > tol * scale) throw PreconditionError("screen_project: vector is not orthogonal to p");
  return frame.e.transpose() * (g * v);
}

Vector screen_lift(const Vector& coeffs, const WittFrame& frame, double p_component) {
  return frame.e * coeffs + p_component * frame.p;
}

WittFrame standard_witt_frame(int n) {
  const Matrix I = Matrix::Identity(n + 2, n + 2);
  WittFrame f;
  f.p = I.col(0);
  f.e = I.block(0, 1, n + 2, n);
  f.q = I.col(n + 1);
  return f;
}

}  // namespace geoverify
