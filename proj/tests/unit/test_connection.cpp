#include "doctest.h"

#include <cmath>

#include "geoverify/catalog.hpp"
#include "geoverify/checks.hpp"
#include "geoverify/connection.hpp"
#include "random_specs.hpp"

using namespace geoverify;
using namespace geoverify::testing;

namespace {

// Random metric with random polynomial xi and S.
MetricSpec random_torsion_spec(SplitMix64& rng, int dim) {
  MetricSpec s = random_lorentzian(rng, dim);
  s.xi = random_vector_field(rng, s, 0.5);
  s.S = random_three_form(rng, s, 0.5);
  return s;
}

double max_nabla_R(const MetricSpec& s, const std::vector<double>& pt) { return max_abs(fd_nabla_curvature(s, pt)); }

}  // namespace

TEST_CASE("christoffels of flat and de Sitter charts") {
  const MetricSpec m = flat_space(4, true);
  CHECK(max_abs(christoffels_at(m, std::vector<double>{0.1, 0.2, 0.3, 0.4}).gamma) == 0.0);

  // Oracle (sympy): Gamma^t_{y1 y1}(t=0) = -1, Gamma^y1_{t y1}(t=0) = -1.
  const MetricSpec ds = build_entry("de_sitter");
  const ConnectionValue c = christoffels_at(ds, std::vector<double>{0.0, 0.3, -0.2, 0.1});
  CHECK(std::abs(c.gamma(0, 1, 1) - (-1.0)) < 1e-8);
  CHECK(std::abs(c.gamma(1, 0, 1) - (-1.0)) < 1e-8);
  CHECK(std::abs(c.gamma(1, 1, 0) - (-1.0)) < 1e-8);

  // Oracle: eps=-1 two-dimensional warped chart, Gamma^y_{ty}(t=0.3) = -1.
  const MetricSpec w2 = warped_product(-1, flat_space(1, false), {});
  const ConnectionValue c2 = christoffels_at(w2, std::vector<double>{0.3, 0.2});
  CHECK(std::abs(c2.gamma(1, 0, 1) - (-1.0)) < 1e-8);
}

TEST_CASE("torsion-free data gives the Levi-Civita connection exactly") {
  SplitMix64 rng(3);
  const MetricSpec s = random_lorentzian(rng, 4);
  for (const auto& pt : sample_points(s, rng, 5)) {
    const ConnectionValue lc = christoffels_at(s, pt);
    const ConnectionValue full = full_connection_at(s, pt);
    CHECK(max_abs_diff<3>(lc.coefficients(), full.coefficients()) == 0.0);
    CHECK(max_abs(torsion_at(s, pt)) == 0.0);
  }
}

TEST_CASE("contorsion matches g_ij xi_l - xi_j g_il + S_ijl / 2") {
  SplitMix64 rng(4);
  for (int dim = 3; dim <= 5; ++dim) {
    const MetricSpec s = random_torsion_spec(rng, dim);
    const auto pt = sample_point(s, rng, 1e-3);
    const TorsionJet tj = torsion_jet_at(s, pt);
    const Matrix g = metric_at(s, pt).g;
    const Vector xl = g * tj.xi;
    const Tensor3 A = contorsion_lowered(g, tj.xi, tj.S);
    const ConnectionValue full = full_connection_at(s, pt);
    for_each_index<3>(dim, [&](const std::array<Eigen::Index, 3>& i) {
      const double want = g(i[0], i[1]) * xl(i[2]) - xl(i[1]) * g(i[0], i[2]) + 0.5 * tj.S(i[0], i[1], i[2]);
      CHECK(std::abs(A(i[0], i[1], i[2]) - want) < 1e-14);
      // full.A(k,i,j) is the raised version: lower the k slot.
      double low = 0.0;
      for (int k = 0; k < dim; ++k) low += g(i[2], k) * full.A(k, i[0], i[1]);
      CHECK(std::abs(low - want) < 1e-12);
    });
  }
}

TEST_CASE("metric compatibility for random connections") {
  SplitMix64 rng(6);
  for (int dim = 3; dim <= 6; ++dim) {
    const MetricSpec s = random_torsion_spec(rng, dim);
    for (const auto& pt : sample_points(s, rng, 5)) {
      const Tensor3 ng = covariant_derivative<2>(s, CovariantField::metric(s), pt, true);
      CHECK(max_abs(ng) < 1e-10);
    }
  }
}

TEST_CASE("torsion from coefficients equals the closed form") {
  SplitMix64 rng(7);
  for (int dim = 3; dim <= 6; ++dim) {
    const MetricSpec s = random_torsion_spec(rng, dim);
    for (const auto& pt : sample_points(s, rng, 5)) {
      const Tensor3 T = torsion_at(s, pt);
      const TorsionJet tj = torsion_jet_at(s, pt);
      const Tensor3 closed = twistor_free_torsion(metric_at(s, pt).g, tj.xi, tj.S);
      CHECK(max_abs_diff<3>(T, closed) < 1e-12);
      for_each_index<3>(dim, [&](const std::array<Eigen::Index, 3>& i) {
        CHECK(T(i[0], i[1], i[2]) == -T(i[1], i[0], i[2]));
      });
    }
  }
}

TEST_CASE("covariant derivative of a 1-form on Minkowski is the plain gradient") {
  SplitMix64 rng(9);
  const MetricSpec m = flat_space(4, true, "x");
  const CovariantField w = CovariantField::one_form(random_vector_field(rng, m));
  for (const auto& pt : sample_points(m, rng, 5)) {
    const Eigen::Tensor<double, 2> nw = covariant_derivative<1>(m, w, pt, false);
    const FieldJet<1> jet = field_jet<1>(w, m, pt);
    for (int mm = 0; mm < 4; ++mm)
      for (int j = 0; j < 4; ++j) CHECK(nw(mm, j) == jet.gradient(j, mm));
  }
}

TEST_CASE("kundt3: p is parallel") {
  SplitMix64 rng(10);
  const MetricSpec k = kundt3(1.0, "0");
  const auto pts = sample_points(k, rng, 100);
  CHECK(residuals::nabla_xi(k, pts) < 1e-10);
}

TEST_CASE("plane-wave torsion 3-form is parallel") {
  SplitMix64 rng(11);
  const MetricSpec pw = build_entry("plane_wave");
  const CovariantField S = CovariantField::three_form(pw.dim, *pw.S);
  for (const auto& pt : sample_points(pw, rng, 10)) {
    CHECK(max_abs(covariant_derivative<3>(pw, S, pt, true)) < 1e-10);
  }
}

TEST_CASE("curvature: flat, constant curvature, symmetries") {
  const MetricSpec m = flat_space(4, true);
  const std::vector<double> pt{0.1, 0.2, 0.3, 0.4};
  CHECK(max_abs(curvature_at(m, pt, true).lowered) == 0.0);

  // Oracle: R_ijkl = K (g_ik g_jl - g_il g_jk) with K = -1 for this chart.
  const MetricSpec ds = build_entry("de_sitter");
  SplitMix64 rng(12);
  for (const auto& p : sample_points(ds, rng, 5)) {
    const Tensor4 R = curvature_at(ds, p, false).lowered;
    const Matrix g = metric_at(ds, p).g;
    for_each_index<4>(4, [&](const std::array<Eigen::Index, 4>& i) {
      const double want = -1.0 * (g(i[0], i[2]) * g(i[1], i[3]) - g(i[0], i[3]) * g(i[1], i[2]));
      CHECK(std::abs(R(i[0], i[1], i[2], i[3]) - want) < 1e-9);
    });
  }

  for (int dim = 3; dim <= 5; ++dim) {
    const MetricSpec s = random_torsion_spec(rng, dim);
    const MetricSpec bare = random_lorentzian(rng, dim);
    for (const auto& p : sample_points(s, rng, 3)) {
      const Tensor4 R = curvature_at(s, p, true).lowered;
      const Tensor4 Rlc = curvature_at(bare, p, false).lowered;
      for_each_index<4>(dim, [&](const std::array<Eigen::Index, 4>& i) {
        CHECK(std::abs(R(i[0], i[1], i[2], i[3]) + R(i[1], i[0], i[2], i[3])) < 1e-9);
        CHECK(std::abs(R(i[0], i[1], i[2], i[3]) + R(i[0], i[1], i[3], i[2])) < 1e-9);
        CHECK(std::abs(Rlc(i[0], i[1], i[2], i[3]) + Rlc(i[0], i[1], i[3], i[2])) < 1e-9);
      });
    }
  }
}

TEST_CASE("first Bianchi identity for Levi-Civita on random metrics") {
  SplitMix64 rng(14);
  for (int dim = 3; dim <= 6; ++dim) {
    const MetricSpec s = random_lorentzian(rng, dim);
    CHECK(residuals::lc_bianchi(s, sample_points(s, rng, 10)) < 1e-9);
  }
}

TEST_CASE("exterior derivative") {
  const MetricSpec w = build_entry("walker");
  const int u = w.dim - 1;
  std::vector<Expr> du(static_cast<std::size_t>(w.dim));
  du[static_cast<std::size_t>(u)] = Expr::constant(1.0);
  SplitMix64 rng(15);
  for (const auto& pt : sample_points(w, rng, 5)) {
    CHECK(max_abs(exterior_derivative<1>(w, CovariantField::one_form(du), pt)) == 0.0);
  }

  MetricSpec plane("plane", {"x", "y"});
  plane.set_g(0, 0, "1");
  plane.set_g(1, 1, "1");
  const CovariantField xdy = CovariantField::one_form({Expr(), plane.parse("x")});
  const Eigen::Tensor<double, 2> d = exterior_derivative<1>(plane, xdy, std::vector<double>{0.3, -0.4});
  CHECK(d(0, 1) == 1.0);
  CHECK(d(1, 0) == -1.0);
  CHECK(d(0, 0) == 0.0);

  // d(d omega) = 0: quadratic omega has linear d omega, so central differences are exact up to rounding.
  const MetricSpec e4 = flat_space(4, false, "x");
  const CovariantField om = CovariantField::one_form(random_vector_field(rng, e4));
  const double h = 1e-3;
  for (const auto& pt : sample_points(e4, rng, 5)) {
    Tensor3 grad(4, 4, 4);
    for (int m = 0; m < 4; ++m) {
      auto pp = pt, pm = pt;
      pp[static_cast<std::size_t>(m)] += h;
      pm[static_cast<std::size_t>(m)] -= h;
      const Eigen::Tensor<double, 2> a = exterior_derivative<1>(e4, om, pp);
      const Eigen::Tensor<double, 2> b = exterior_derivative<1>(e4, om, pm);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) grad(i, j, m) = (a(i, j) - b(i, j)) / (2 * h);
    }
    double worst = 0.0;
    for_each_index<3>(4, [&](const std::array<Eigen::Index, 3>& i) {
      const double dd = grad(i[1], i[2], i[0]) - grad(i[0], i[2], i[1]) + grad(i[0], i[1], i[2]);
      worst = std::max(worst, std::abs(dd));
    });
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("finite-difference nabla R") {
  const MetricSpec flat = flat_space(4, true);
  CHECK(max_nabla_R(flat, {0.1, 0.2, 0.3, 0.4}) < 1e-8);

  // Frozen values from the symbolic oracle at pinned (v, x1, x2, u).
  const std::vector<double> p1{0.1, 0.2, -0.3, 0.4};
  const std::vector<double> p2{0.5, -0.5, 0.25, -0.75};
  const MetricSpec literal = build_entry("plane_wave");
  CHECK(std::abs(max_nabla_R(literal, p1) - 3.586780454498e-01) < 1e-5);
  CHECK(std::abs(max_nabla_R(literal, p2) - 4.987474933020e-01) < 1e-5);
  const MetricSpec half = build_entry("plane_wave", {{"rate", "0.5"}});
  CHECK(max_nabla_R(half, p1) < 1e-5);
  CHECK(max_nabla_R(half, p2) < 1e-5);
  const MetricSpec quartic = build_entry("plane_wave", {{"mode", "generic"}, {"H", "x1^4"}});
  CHECK(std::abs(max_nabla_R(quartic, p1) - 2.4) < 1e-5);
  CHECK(std::abs(max_nabla_R(quartic, p2) - 6.0) < 1e-5);
  CHECK(max_nabla_R(quartic, p2) > 1e-2);
}
