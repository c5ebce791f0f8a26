#include <doctest.h>

#include <cmath>

#include "qg/berezin.hpp"
#include "qg/numerics.hpp"

using namespace qg;

namespace {

double heat_factor(int m, double kappa, double t) { return std::exp(-0.5 * t * (m * m + kappa * kappa)); }
cplx heat_factor_c(int m, cplx kappa, double t) { return std::exp(-0.5 * t * (double(m * m) + kappa * kappa)); }

// Max relative entry difference on the block whose labels stay `margin` away from the cut.
double interior_diff(const MatrixXc& a, const MatrixXc& b, int margin) {
  const int n = (int)a.rows();
  double d = 0, scale = 0;
  for (int i = margin; i < n - margin; ++i)
    for (int j = margin; j < n - margin; ++j) {
      d = std::max(d, std::abs(a(i, j) - b(i, j)));
      scale = std::max(scale, std::abs(b(i, j)));
    }
  return d / std::max(1.0, scale);
}

// Berezin matrix element <e_a| Q(f) |e_b> by direct quadrature of the defining integral.
cplx berezin_element_quadrature(const U1TrigPoly& f, const U1Space& s, int a, int b) {
  const GaussRule g = gauss_legendre(200);
  const double c = s.j0 * s.t, w = 14.0 * std::sqrt(s.t) + 0.5 * s.t * std::abs(a + b);
  const double mid = c + 0.5 * s.t * (a + b);
  const int nphi = 64;
  cplx acc = 0;
  for (int i = 0; i < g.nodes.size(); ++i) {
    const double l = mid + w * g.nodes[i];
    for (int p = 0; p < nphi; ++p) {
      const double phi = 2 * pi * p / nphi;
      const EquivariantU1State v = u1_coherent(s, phi, l);
      const cplx va = v.c[a + s.cut], vb = v.c[b + s.cut];
      acc += w * g.weights[i] / nphi / std::sqrt(pi * s.t) * std::exp(-(l - c) * (l - c) / s.t) * u1_eval(f, phi, l) * va *
             std::conj(vb);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("heat multipliers") {
  const U1TrigPoly f = {{0, 0.0, 2.0}, {1, 0.0, cplx(0, 1)}, {-2, 0.5, 0.25}};
  const U1TrigPoly g = u1_berezin_smoothing(f, 0.5);
  CHECK(g[0].coeff == cplx(2.0));
  CHECK(std::abs(g[1].coeff - cplx(0, 1) * std::exp(-0.25)) < 1e-16);
  CHECK(std::abs(g[2].coeff - 0.25 * heat_factor(-2, 0.5, 0.5)) < 1e-16);
  for (int m : {0, 1, -3})
    for (double k : {0.0, 0.7, -1.9}) CHECK(std::abs(u1_wick_multiplier(m, k, 0.8) - heat_factor(m, k, 0.8)) < 1e-15);
  // Integer Laurent monomials: e^{2tab}.
  CHECK(std::abs(u1_wick_multiplier(1, cplx(0, 3), 0.4) - std::exp(2 * 0.4 * 2 * 1)) < 1e-13);
}

TEST_CASE("coherent vectors and the annihilation operator") {
  for (double t : {0.5, 1.0})
    for (double j0 : {0.0, 0.3}) {
      const U1Space s = u1_space(t, j0, 3.0);
      const MatrixXc x = u1_annihilation(s);
      for (double phi : {0.0, 1.1, -2.5})
        for (double l : {-2.0, 0.0, 0.7, 3.0}) {
          const EquivariantU1State v = u1_coherent(s, phi, l);
          const cplx xi = std::exp(cplx(-l, phi));
          CHECK((x * v.c - xi * v.c).norm() / v.c.norm() < 1e-10);
          // Overlap closed form against the series.
          const EquivariantU1State w = u1_coherent(s, 0.4, -0.3);
          const cplx ov = v.c.dot(w.c);
          CHECK(std::abs(u1_overlap(s, phi, l, 0.4, -0.3) - ov) < 1e-11 * std::abs(ov) + 1e-13);
        }
      // X X* = e^{2t} X* X.
      const MatrixXc lhs = x * x.adjoint(), rhs = std::exp(2 * t) * x.adjoint() * x;
      CHECK(interior_diff(lhs, rhs, 2) < 1e-13);
    }
}

TEST_CASE("berezin quantization of constants is the identity") {
  const U1Space s = u1_space(0.7, 0.25, 3.0);
  const MatrixXc q = u1_berezin_operator({{0, 0.0, 1.0}}, s);
  CHECK((q - MatrixXc::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff() < 1e-13);
  for (double l : {-1.0, 2.0}) {
    CHECK(std::abs(u1_lower_symbol(q, s, 0.3, l) - 1.0) < 1e-13);
    CHECK(std::abs(u1_lower_symbol_overlap({{0, 0.0, 1.0}}, s, 0.3, l) - 1.0) < 1e-10);
  }
}

TEST_CASE("closed-form berezin operator against direct quadrature") {
  const U1Space s = u1_space(0.6, 0.2, 2.0);
  const U1TrigPoly f = {{1, 0.8, cplx(0.5, -0.2)}, {-2, -0.3, 1.0}};
  const MatrixXc q = u1_berezin_operator(f, s);
  for (auto [a, b] : {std::pair{0, 0}, {1, 0}, {-1, 1}, {2, 3}, {-3, -1}}) {
    const cplx direct = berezin_element_quadrature(f, s, a, b);
    CHECK(std::abs(q(a + s.cut, b + s.cut) - direct) < 1e-10);
  }
  const U1TrigPoly mono = {u1_monomial(2, 1)};
  const MatrixXc qm = u1_berezin_operator(mono, s);
  CHECK(std::abs(qm(1 + s.cut, s.cut) - berezin_element_quadrature(mono, s, 1, 0)) < 1e-10 * std::abs(qm(1 + s.cut, s.cut)));
}

TEST_CASE("wick relation on laurent monomials") {
  for (double t : {0.5, 1.0})
    for (double j0 : {0.0, 0.4}) {
      const U1Space s = u1_space(t, j0, 2.0);
      const MatrixXc x = u1_annihilation(s);
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
          // Anti-Wick ordering is the Berezin quantization of xi^a xibar^b.
          const MatrixXc aw = u1_anti_wick(x, a, b);
          const MatrixXc qb = u1_berezin_operator({u1_monomial(a, b)}, s);
          CHECK(interior_diff(aw, qb, 4) < 1e-12);
          // Wick-ordered (X*)^b X^a has lower symbol xibar^b xi^a.
          MatrixXc w = MatrixXc::Identity(s.dim(), s.dim());
          for (int k = 0; k < b; ++k) w = w * x.adjoint();
          for (int k = 0; k < a; ++k) w = w * x;
          for (double l : {-0.5, 0.8}) {
            const cplx xi = std::exp(cplx(-l, 0.9));
            const cplx expect = std::pow(std::conj(xi), b) * std::pow(xi, a);
            CHECK(std::abs(u1_lower_symbol(w, s, 0.9, l) - expect) < 1e-11 * std::max(1.0, std::abs(expect)));
            // Lower symbol of the anti-Wick monomial: e^{2tab} xi^a xibar^b.
            const cplx lw = u1_lower_symbol(aw, s, 0.9, l);
            CHECK(std::abs(lw - u1_wick_multiplier(a - b, cplx(0, a + b), t) * std::pow(xi, a) * std::pow(std::conj(xi), b)) <
                  1e-10 * std::abs(lw));
          }
        }
    }
}

TEST_CASE("berezin smoothing of laurent modes is exact heat flow") {
  // Modes xi^a xibar^b with integer a, b: e^{i(a - b) phi - (a + b) l}.
  double worst_i = 0, worst_ii = 0;
  for (double t : {0.5, 1.0})
    for (double j0 : {0.0, 0.3}) {
      const U1Space s = u1_space(t, j0, 4.0);
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
          const U1Mode md = u1_monomial(a, b);
          const U1TrigPoly f = {md};
          const MatrixXc q = u1_berezin_operator(f, s);
          for (double phi : {0.0, 0.8, -2.1})
            for (double l : {-0.7, 0.0, 0.9}) {
              const cplx mode = u1_eval(f, phi, l);
              const cplx expect = heat_factor_c(md.m, md.kappa, t) * mode;
              worst_i = std::max(worst_i, std::abs(u1_lower_symbol_overlap(f, s, phi, l) - expect) / std::abs(mode));
              worst_ii = std::max(worst_ii, std::abs(u1_lower_symbol(q, s, phi, l) - u1_wick_multiplier(md.m, md.kappa, t) * mode) / std::abs(mode));
            }
        }
    }
  CHECK(worst_i < 1e-9);
  CHECK(worst_ii < 1e-9);
}

TEST_CASE("berezin smoothing of real fourier modes") {
  // Real frequencies carry the period factor; both routes reproduce it exactly.
  const std::vector<std::pair<int, double>> modes = {{0, 0.0}, {1, 0.0}, {-2, 0.0}, {0, 0.7}, {1, -1.3}, {3, 0.4}};
  for (double t : {0.5, 1.0})
    for (double j0 : {0.0, 0.3}) {
      const U1Space s = u1_space(t, j0, 2.0);
      for (auto [m, k] : modes) {
        const U1TrigPoly f = {{m, k, 1.0}};
        const MatrixXc q = u1_berezin_operator(f, s);
        for (double phi : {0.0, 0.8, -2.1})
          for (double l : {-1.5, 0.0, 0.9}) {
            const cplx exact = u1_lower_symbol_exact(f, s, phi, l);
            CHECK(std::abs(u1_lower_symbol_overlap(f, s, phi, l) - exact) < 1e-10);
            CHECK(std::abs(u1_lower_symbol(q, s, phi, l) - exact) < 1e-12);
            // Distance to the heat-evolved mode is the period factor's distance to 1.
            const cplx heat = heat_factor(m, k, t) * u1_eval(f, phi, l);
            CHECK(std::abs(std::abs(exact - heat) - std::abs(heat) * std::abs(u1_period_factor(m, k, s, l) - 1.0)) < 1e-13);
            if (m % 2 == 0 && k == 0) CHECK(std::abs(exact - heat) < 1e-13);
          }
      }
    }

  // cos phi at t = 1/2: e^{-1/4} cos phi up to the period factor, whose offset is below 4 e^{-2 pi^2}.
  const U1Space s = u1_space(0.5, 0.0, 2.0);
  const U1TrigPoly c = {{1, 0.0, 0.5}, {-1, 0.0, 0.5}};
  for (double phi : {0.0, 1.0, 2.5}) {
    const cplx exact = std::exp(-0.25) * std::cos(phi) * u1_period_factor(1, 0.0, s, 0.4);
    CHECK(std::abs(u1_lower_symbol_overlap(c, s, phi, 0.4) - exact) < 1e-10);
    CHECK(std::abs(u1_lower_symbol(u1_berezin_operator(c, s), s, phi, 0.4) - exact) < 1e-12);
    CHECK(std::abs(exact - std::exp(-0.25) * std::cos(phi)) < 4 * std::exp(-2 * pi * pi));
  }
  // Small t: the period factor is invisible at double precision.
  const U1Space s2 = u1_space(0.2, 0.0, 2.0);
  for (double phi : {0.0, 1.0})
    CHECK(std::abs(u1_lower_symbol(u1_berezin_operator(c, s2), s2, phi, 0.4) - std::exp(-0.1) * std::cos(phi)) < 1e-13);
}

TEST_CASE("kohn-nirenberg smoothing") {
  const U1TrigPoly f = {{1, 0.6, cplx(0.3, 0.1)}, {0, -0.9, 1.0}, {-2, 0.2, 0.5}};
  for (double t : {0.5, 1.0})
    for (double j0 : {0.0, 0.35}) {
      const U1Space s = u1_space(t, j0, 2.0);
      // Upper -> KN: the KN operator of sigma_t is the Berezin operator of f.
      const U1KNSymbol sig = u1_kn_from_upper(f, t, j0);
      CHECK(interior_diff(u1_kn_operator(sig, s), u1_berezin_operator(f, s), 0) < 1e-13);

      // KN -> lower: Gaussian-sum formula for a 3-mode symbol.
      U1KNSymbol k3;
      k3.m = {0, 1, -2};
      k3.s = {[](int k) { return cplx(1.0 / (1.0 + 0.1 * k * k)); }, [](int k) { return cplx(std::cos(0.3 * k), 0.2); },
              [](int k) { return cplx(0.0, std::exp(-0.05 * k * k)); }};
      const MatrixXc a = u1_kn_operator(k3, s);
      for (double phi : {0.0, 1.3})
        for (double l : {-1.0, 0.5, 1.7}) {
          const cplx direct = u1_lower_symbol(a, s, phi, l);
          CHECK(std::abs(u1_kn_lower_symbol_series(k3, s, phi, l) - direct) < 1e-8);
        }
    }
}

TEST_CASE("equivariant weyl elements are orthogonal on the grid") {
  const U1Space s{1.0, 0.3, 6};
  const int n = s.dim();
  double worst = 0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k : {-2, 0, 3})
        for (int kp : {-2, 0, 3}) {
          const MatrixXc a = u1_weyl_element(s, 2 * pi * p / n, k), b = u1_weyl_element(s, 2 * pi * q / n, kp);
          const cplx tr = (a.adjoint() * b).trace();
          const double expect = (p == q && k == kp) ? n : 0.0;
          worst = std::max(worst, std::abs(tr - expect));
        }
  CHECK(worst < 1e-12);
}
