#pragma once

#include <functional>
#include <random>
#include <string>

#include "qg/repgroup.hpp"

namespace qg {

// Peter-Weyl basis of the band-limited space V_{<=band}: irreps in irreps_upto order, inside each
// irrep the pairs (a,b) row-major. The basis functions phi_{pi,ab}(g) = sqrt(d) conj(pi(g)_ab) are
// orthonormal and the coordinates of Psi are u_{pi,ab} = sqrt(d) Psihat(pi)_ab, Psihat(pi) = int Psi pi.
int pw_size(Group g, int band);
std::vector<int> pw_offsets(Group g, int band);

struct TruncatedOperator;

// sigma(pi, g) for every irrep with label <= band, sampled on a quadrature grid that integrates
// products of two functions of g-band g_band exactly. Off-grid values use the reproducing kernel.
template <typename Scalar>
struct MatrixSymbol {
  Group group = Group::SU2;
  int band = 1;
  int g_band = 1;
  Quadrature grid;
  std::vector<IrrepLabel> irreps;
  std::vector<std::vector<MatrixX<Scalar>>> values;  // [irrep][node]
};
using Symbol = MatrixSymbol<cplx>;

using SymbolFn = std::function<MatrixXc(const IrrepLabel&, const GroupElement&)>;
using ScalarFn = std::function<cplx(const GroupElement&)>;

Quadrature symbol_grid(Group g, int g_band);
Symbol make_symbol(Group g, int band, int g_band, const SymbolFn& f);
// Random coefficients on the g-Fourier side, so the g-band is exact.
Symbol random_symbol(Group g, int band, int g_band, std::mt19937_64& rng, bool hermitian = false);
Symbol identity_symbol(Group g, int band);
Symbol multiplication_symbol(Group g, int band, int g_band, const ScalarFn& f);
// i eps dpi(X), the symbol of P_X = -i eps R_X with (R_X Psi)(g) = d/dt Psi(e^{tX} g).
Symbol derivative_symbol(Group g, int band, const Vector3d& x, double eps);

// Quadrature weights w_k K(g^{-1} g_k) such that sigma(pi, g) = sum_k row_k sigma(pi, g_k).
Eigen::VectorXd interpolation_row(const Symbol& s, const GroupElement& g);
MatrixXc symbol_at(const Symbol& s, std::size_t irrep, const GroupElement& g);
// The same row for any grid that integrates products of two g_band functions exactly.
Eigen::VectorXd grid_interpolation_row(Group grp, const Quadrature& grid, int g_band, const GroupElement& g);
// Multiplication by the band-limited function with the given values on symbol_grid(g, g_band).
TruncatedOperator multiplication_operator(Group g, int g_band, const VectorXc& values, int op_band);
// Re-sample on the grid of a larger g-band (exact, the data stay band-limited).
Symbol resample(const Symbol& s, int g_band);
// Pointwise sigma(pi,g)^* and linear combinations on a common grid.
Symbol pointwise_adjoint(const Symbol& s);
Symbol axpy(cplx a, const Symbol& x, const Symbol& y);
// Largest entry modulus of the difference, compared on the grid of the larger g-band.
double symbol_distance(const Symbol& a, const Symbol& b);

struct TruncatedOperator {
  Group group = Group::SU2;
  int band = 1;
  MatrixXc matrix;
  double truncation_error = 0;  // Frobenius norm of the image that fell outside V_{<=band}
};

// (A Psi)(g) = sum_pi d_pi tr(pi(g)^* sigma(pi,g) Psihat(pi)), sigma = 0 beyond s.band.
TruncatedOperator kn_quantize(const Symbol& s, int op_band);
// sigma_A(pi, g) = pi(g) (A pi^*)(g) for labels <= band; g_band is the declared g-band of the result.
Symbol kn_symbol(const TruncatedOperator& a, int band, int g_band);
// sigma_{AB}(pi,g) = int F_A(h,g) pi(h) sigma_B(pi, h^{-1} g) dh.
Symbol kn_compose(const Symbol& a, const Symbol& b);
// sigma_{A^*}(pi,g) = (int F_A(h, hg) pi(h) dh)^*.
Symbol kn_adjoint(const Symbol& a);
// (sigma_A, sigma_B) = sum_pi d_pi int tr(sigma_A^* sigma_B) dg.
cplx hs_pairing(const Symbol& a, const Symbol& b);

// F_sigma(h, g) = sum_pi d_pi tr(pi(h)^* sigma(pi, g)).
cplx convolution_kernel_at(const Symbol& s, const GroupElement& h, const GroupElement& g);

// (U_h Psi)(g) = Psi(h^{-1} g) and (U^R_h Psi)(g) = Psi(g h) on V_{<=band}.
TruncatedOperator left_translation(Group g, int band, const GroupElement& h);
TruncatedOperator right_translation(Group g, int band, const GroupElement& h);
TruncatedOperator operator_product(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator_adjoint(const TruncatedOperator& a);
// Restriction (or zero extension) to another band.
TruncatedOperator restrict_band(const TruncatedOperator& a, int band);

// Left convolution kernel F(h,g) = sum_k delta_{h_k}(h) f_k(g) with band-limited f_k; the operator
// is (A Psi)(g) = sum_k f_k(g) Psi(h_k^{-1} g). The atoms of a kernel built from a symbol are a
// Haar quadrature closed under inversion, which keeps adjoints exact.
struct ConvolutionKernel {
  Group group = Group::SU2;
  int g_band = 1;
  Quadrature grid;
  std::vector<GroupElement> atoms;
  std::vector<VectorXc> values;  // f_k on the grid
};

// Atoms on an inversion-closed rule exact for labels <= degree.
ConvolutionKernel kernel_from_symbol(const Symbol& s, int degree);
ConvolutionKernel multiplication_kernel(Group g, int g_band, const ScalarFn& f);
// F^W(h,g) = F(h, sqrt(h)^{-1} g). Throws if an atom with mass above 1e-12 sits within
// `guard` of the square-root branch locus.
ConvolutionKernel weyl_deform(const ConvolutionKernel& k, double guard = 1e-12);
ConvolutionKernel weyl_deform(const Symbol& s, int degree);
// Weyl element F^W(pi,m,n;h)(h',g) = pi(sqrt(h)^{-1} g)_mn delta_h(h').
ConvolutionKernel weyl_element(const IrrepLabel& pi, int m, int n, const GroupElement& h);
// KN symbol int F(h,g) pi(h) dh of the kernel for labels <= band.
Symbol kernel_symbol(const ConvolutionKernel& k, int band);
TruncatedOperator kernel_quantize(const ConvolutionKernel& k, int op_band);
TruncatedOperator weyl_quantize(const Symbol& s, int op_band);

// JSON container {group, band, g_band, grid, irreps, values}; values are row-major with
// re/im interleaved. Doubles are written with 17 significant digits, so the roundtrip is exact.
std::string symbol_to_json(const Symbol& s);
Symbol symbol_from_json(const std::string& text);

}  // namespace qg
