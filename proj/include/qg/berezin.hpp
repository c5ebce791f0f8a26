#pragma once

#include <functional>
#include <vector>

#include "qg/core.hpp"

namespace qg {

// T*U(1) with coordinates (phi, l) and xi = e^{-l + i phi}. Modes are c e^{i(m phi + kappa l)};
// complex kappa gives the Laurent monomials xi^a xibar^b (m = a - b, kappa = i(a + b)).
struct U1Mode {
  int m = 0;
  cplx kappa = 0;
  cplx coeff = 1;
};
using U1TrigPoly = std::vector<U1Mode>;

cplx u1_eval(const U1TrigPoly& f, double phi, double l);
U1Mode u1_monomial(int a, int b, cplx coeff = 1);

// e^{(t/2) Delta_(phi,l)} f: each mode times e^{-t(m^2 + kappa^2)/2}.
U1TrigPoly u1_berezin_smoothing(const U1TrigPoly& f, double t);

// Truncated basis e^{i(j + j0) phi}, j = -cut..cut, of the equivariant space H_{j0}.
struct U1Space {
  double t = 1.0;
  double j0 = 0.0;
  int cut = 40;
  int dim() const { return 2 * cut + 1; }
  int label(int i) const { return i - cut; }
};
// Cut large enough that coherent vectors with |l| <= l_max lose < 1e-17 relative mass at the edges.
U1Space u1_space(double t, double j0, double l_max);

struct EquivariantU1State {
  double j0 = 0.0;
  int lo = 0;   // label of c[0]
  VectorXc c;
};

// Coefficients (xi e^{t j0})^{-j} e^{-t j^2 / 2} at xi = e^{-l + i phi}.
EquivariantU1State u1_coherent(const U1Space& s, double phi, double l);
// X_t = e^{-t/2} U(1) e^{-t J}, J = -i d/dphi with eigenvalues j + j0.
MatrixXc u1_annihilation(const U1Space& s);
// X^a (X*)^b: the anti-Wick monomial whose upper symbol is xi^a xibar^b.
MatrixXc u1_anti_wick(const MatrixXc& x, int a, int b);

// Berezin quantization int dphi dl / (2 pi sqrt(pi t)) f e^{-(l - j0 t)^2 / t} |xi><xi| in the truncated
// basis; the Gaussian l-integral is done in closed form, which continues analytically in (a, b).
MatrixXc u1_berezin_operator(const U1TrigPoly& f, const U1Space& s);
// <xi|A|xi> / <xi|xi>.
cplx u1_lower_symbol(const MatrixXc& a, const U1Space& s, double phi, double l);
// <xi|xi'> = theta3((i / 2 pi)(-(l + l') - i(phi - phi') + 2 j0 t) | i t / pi).
cplx u1_overlap(const U1Space& s, double phi, double l, double phip, double lp);
// Lower symbol of the Berezin quantization of f by quadrature of the overlap kernel
// (trapezoid in phi', Gauss-Legendre in l' on l +- (12 sqrt(t) + t max|Im kappa|)).
cplx u1_lower_symbol_overlap(const U1TrigPoly& f, const U1Space& s, double phi, double l, int n_phi = 64,
                             int n_l = 160);
// Exact lower symbol of Q(e^{i(m phi + kappa l)}) divided by the heat-evolved mode:
// theta3(lam/t - a | i pi/t) / theta3(lam/t | i pi/t), a = (m - i kappa)/2, lam = l - j0 t.
// It is 1 when a is an integer (Laurent monomials) and 1 + O(e^{-pi^2/t + pi |kappa|}) otherwise.
cplx u1_period_factor(int m, cplx kappa, const U1Space& s, double l);
// Sum over modes of coeff * heat multiplier * period factor * mode.
cplx u1_lower_symbol_exact(const U1TrigPoly& f, const U1Space& s, double phi, double l);
// Laurent relation e^{2 t a b} for xi^a xibar^b continued to a = (m - i kappa)/2, b = (-m - i kappa)/2.
cplx u1_wick_multiplier(int m, cplx kappa, double t);

// Kohn-Nirenberg symbol sigma(phi, k) = sum_i s_i(k) e^{i m_i phi}, (A Psi)(phi) = sum_k e^{i(k + j0) phi} sigma(phi, k) Psi^(k).
struct U1KNSymbol {
  std::vector<int> m;
  std::vector<std::function<cplx(int)>> s;
};
MatrixXc u1_kn_operator(const U1KNSymbol& sigma, const U1Space& s);
// Gaussian-sum formula sqrt2 / (2 pi theta3(l/t - j0 | i pi/t)) sum_k int dphi' sigma(phi', k)
// e^{-(l - t(k + j0))^2 / t} sum_j e^{-((phi - phi' - 2 pi j) - i(l - t(k + j0)))^2 / 2t}.
cplx u1_kn_lower_symbol_series(const U1KNSymbol& sigma, const U1Space& s, double phi, double l, int n_phi = 64);
// sigma_t(phi, k) = sqrt2 / (2 pi t) int int f(phi', l') e^{-((t(k + j0) - l')^2 + (phi - phi')^2) / 2t}
// e^{-i (phi - phi')(t(k + j0) - l') / t}, in closed form per mode.
U1KNSymbol u1_kn_from_upper(const U1TrigPoly& f, double t, double j0);

// W(phi, k) = sum_m e^{-i m phi} U(m) |k><k| restricted to the truncated basis.
MatrixXc u1_weyl_element(const U1Space& s, double phi, int k);

}  // namespace qg
