#pragma once

#include <array>
#include <map>
#include <vector>

#include "qg/gweyl.hpp"

namespace qg {

// Local symbol on T*G = G x g* (right trivialization), stored as the finite sum
//   sigma(theta, g) = sum_terms exp(-i theta(X_site)) theta^power c(g),   X_site = spacing * site.
// Power-free terms are the lattice samples of inverse-Fourier data (coefficient = trapezoid weight
// times sigma-check); terms at the origin with a power are the polynomial symbols (derivatives of a
// delta at 0). Products, theta-derivatives and Poisson brackets stay inside this form exactly.
// U(1) uses only the first coordinate of site and power.
struct LocalSymbol {
  using Key = std::array<int, 6>;  // site[3], power[3]
  Group group = Group::U1;
  double spacing = 0.25;  // lattice spacing h_X
  int k = 1;              // epsilon = 1/k
  int g_band = 1;
  Quadrature grid;        // symbol_grid(group, g_band)
  std::map<Key, VectorXc> terms;

  double eps() const { return 1.0 / k; }
};

enum class LocalVariant { KN, Weyl };

int lie_dim(Group g);
// Volume of G in the Riemannian normalization used for dX: 2pi (U1), 16pi^2 (SU2).
double lie_volume(Group g);
// j(X)^2: Jacobian of exp against the Haar measure (1 for U1).
double exp_jacobian(Group g, const Vector3d& x);
// Radius of the injectivity set U = exp^{-1}(G \ {-1}).
double injectivity_radius(Group g);

LocalSymbol local_zero(Group g, int g_band, double spacing = 0.25, int k = 1);
Vector3d site_point(const LocalSymbol& s, const LocalSymbol::Key& key);
// Adds c to the coefficient of exp(-i theta(X_site)) theta^power.
void add_term(LocalSymbol& s, const std::array<int, 3>& site, const std::array<int, 3>& power, const VectorXc& c);
// Adds lattice data: sigma-check(X_site, g) with the trapezoid weight h^n / vol.
void add_lattice_sample(LocalSymbol& s, const std::array<int, 3>& site, const VectorXc& check);
VectorXc sample_function(const LocalSymbol& s, const ScalarFn& f);

// sigma = f(g) and sigma = theta(X).
LocalSymbol local_function(Group g, int g_band, const ScalarFn& f);
LocalSymbol local_momentum(Group g, const Vector3d& x);
// Real symbol with Gaussian-enveloped lattice data inside |X| <= radius and random band-limited
// g-dependence.
LocalSymbol random_bump(Group g, int g_band, double spacing, double radius, double width, std::mt19937_64& rng);
// Real polynomial symbol of the given degree in theta with random band-limited coefficients.
LocalSymbol random_polynomial(Group g, int degree, int g_band, std::mt19937_64& rng);

cplx local_evaluate(const LocalSymbol& s, const Vector3d& theta, const GroupElement& g);
LocalSymbol local_resample(const LocalSymbol& s, int g_band);
LocalSymbol local_axpy(cplx a, const LocalSymbol& x, const LocalSymbol& y);
LocalSymbol local_product(const LocalSymbol& a, const LocalSymbol& b);
LocalSymbol local_conjugate(const LocalSymbol& s);
LocalSymbol local_dtheta(const LocalSymbol& s, int a);
LocalSymbol local_times_theta(const LocalSymbol& s, int a);
// (R_X sigma)(theta, g) = d/dt sigma(theta, exp(tX) g).
LocalSymbol local_right_derivative(const LocalSymbol& s, const Vector3d& x);
// sigma(theta, g) -> sigma(factor theta, g).
LocalSymbol local_rescale(const LocalSymbol& s, double factor);
// Largest coefficient modulus of the difference (on the grid of the larger g-band).
double local_distance(const LocalSymbol& a, const LocalSymbol& b);
// R_X f for band-limited values on symbol_grid(g, g_band).
VectorXc right_derivative(Group g, int g_band, const VectorXc& values, const Vector3d& x);

// <d_theta sigma, R tau> - <R sigma, d_theta tau> + {sigma, tau}_-, {f,f'}_-(theta) = -theta([d f, d f']).
LocalSymbol poisson_bracket(const LocalSymbol& a, const LocalSymbol& b);

// (H(phi) sigma)(theta, g) = int dX exp(-i theta(X)) phi(X) sigma-check(X, g) on the lattice.
LocalSymbol kernel_cutoff(const std::function<cplx(const Vector3d&)>& phi, const LocalSymbol& s);

// Throws if a term sits outside epsilon^{-1} U.
void check_support(const LocalSymbol& s);
// Atomic kernel of the lattice part: atoms exp(eps X_site), values j(eps X)^2 c(g).
ConvolutionKernel local_kernel(const LocalSymbol& s, LocalVariant variant);
// Q_eps(sigma) on V_{<=op_band}.
TruncatedOperator local_quantize(const LocalSymbol& s, LocalVariant variant, int op_band);
// Weyl operator from the geodesic-midpoint kernel K(h, g) = eps^{-n} sigma-check(eps^{-1} X_{gh^{-1}},
// exp(-X_{gh^{-1}}/2) g), integrated directly on a Haar quadrature (lattice terms only).
TruncatedOperator midpoint_quantize(const LocalSymbol& s, int op_band);

struct SemiclassicalFit {
  std::vector<double> eps;
  std::vector<double> moyal;        // ||Q(s)Q(t) - Q(st - (i eps/2){s,t})||
  std::vector<double> dirac;        // ||(i/eps)[Q(s),Q(t)] - Q({s,t})||
  std::vector<double> von_neumann;  // ||(Q(s)Q(t) + Q(t)Q(s))/2 - Q(st)||
  double moyal_slope = 0;
  double dirac_slope = 0;
  double von_neumann_slope = 0;
};
// Residuals are operator norms on inputs from V_{<=in_band}; outputs are kept exactly.
SemiclassicalFit semiclassical_order_fit(const LocalSymbol& a, const LocalSymbol& b, const std::vector<int>& k_list,
                                         int in_band, LocalVariant variant = LocalVariant::Weyl);

}  // namespace qg
