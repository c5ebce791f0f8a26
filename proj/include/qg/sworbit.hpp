#pragma once

#include <string>
#include <vector>

#include "qg/numerics.hpp"
#include "qg/repgroup.hpp"

namespace qg {

// Coadjoint orbit of the SU(2) irrep of dimension n = 2j+1, realized as the sphere of radius j.
// Points are (beta, alpha) polar angles; the section is g_theta = exp(alpha tau_z) exp(beta tau_y).
// The momentum map is J(v)_k = i (v, dpi(tau_k) v), which is -2 pi times the 1/(2 pi i)
// normalization, so J(v_theta) = j n(theta) exactly.
struct OrbitSpec {
  int n = 2;
  SphereRule rule;
  std::vector<double> weight;       // Liouville weights, sum = n
  std::vector<VectorXc> coherent;   // v_theta at every node
  MatrixXc harmonics;               // Y_lm(theta_k), l <= 2j, orthonormal for the unit-mass measure

  double spin() const { return 0.5 * (n - 1); }
  std::size_t size() const { return weight.size(); }
};

// Harmonic column index of (l, m), m = l, l-1, ..., -l.
inline int harmonic_index(int l, int m) { return l * l + (l - m); }

// exactness < 0 selects 4j + 2.
OrbitSpec orbit_spec(int n, int exactness = -1);

GroupElement orbit_section(double beta, double alpha);
Vector3d orbit_direction(double beta, double alpha);
std::pair<double, double> orbit_angles(const Vector3d& direction);
// All Y_lm with l <= l_max at one point: Y_lm = sqrt(2l+1) conj(D^l(g_theta)_{m,0}).
VectorXc orbit_harmonics(int l_max, double beta, double alpha);

VectorXc orbit_coherent(int n, double beta, double alpha);
Vector3d momentum_map(const VectorXc& v);
// Ad*_g theta under the identification of g* with g by the invariant product.
Vector3d coadjoint(const GroupElement& g, const Vector3d& theta);

struct OrbitField {
  int n = 2;
  VectorXc values;  // on the nodes of the matching OrbitSpec
};

OrbitField orbit_field(const OrbitSpec& s, const std::function<cplx(double, double)>& f);
double orbit_integral_abs2(const OrbitField& f, const OrbitSpec& s);
cplx orbit_integral(const OrbitField& f, const OrbitSpec& s);
// Coefficients against Y_lm for l <= l_max (l_max < 0 selects 2j).
VectorXc harmonic_coefficients(const OrbitField& f, const OrbitSpec& s, int l_max = -1);
double max_abs_diff(const OrbitField& a, const OrbitField& b);

OrbitField lower_symbol(const MatrixXc& a, const OrbitSpec& s);
cplx lower_symbol_at(const MatrixXc& a, double beta, double alpha);

// k_l for l = 0..2j from the overlap kernel |(v_north, v_theta)|^2 on the orbit grid.
std::vector<double> sw_kernel_spectrum(const OrbitSpec& s);
// Same eigenvalue from the zonal integral n/2 int ((1+x)/2)^{2j} P_l(x) dx on Gauss-Legendre nodes.
double kernel_eigenvalue(double j, int l);
// Closed form (2j+1)/(2l+1) C(j,j; j,-j | l,0)^2.
double kernel_eigenvalue_cg(double j, int l);

// K^power acting on the l <= 2j part of f; higher harmonics are dropped.
OrbitField kernel_power(const OrbitField& f, const OrbitSpec& s, const std::vector<double>& k, double power);
OrbitField upper_symbol(const MatrixXc& a, const OrbitSpec& s, const std::vector<double>& k);

struct SWOperatorField {
  int n = 2;
  std::vector<double> k;          // kernel spectrum
  std::vector<MatrixXc> coeff;    // k_l^{-1/2} int conj(Y_lm) P_theta, per harmonic index
  std::vector<MatrixXc> delta;    // Delta(theta_k) at the nodes
};

SWOperatorField sw_operator(const OrbitSpec& s);
MatrixXc sw_operator_at(const SWOperatorField& d, double beta, double alpha);

OrbitField sw_symbol(const MatrixXc& a, const SWOperatorField& d);
cplx sw_symbol_at(const MatrixXc& a, const SWOperatorField& d, double beta, double alpha);
// Projects onto l <= 2j first; the L2 norm of the removed part goes to *discarded.
MatrixXc sw_quantize(const OrbitField& w, const OrbitSpec& s, const SWOperatorField& d, double* discarded = nullptr);
// The triple-trace double integral, evaluated by integrating over theta' and theta'' separately.
OrbitField sw_twisted_product(const OrbitField& a, const OrbitField& b, const OrbitSpec& s, const SWOperatorField& d);

// E(g; pi, theta) = tr(Delta(theta) pi(g)).
OrbitField swf_kernel(const GroupElement& g, const SWOperatorField& d);
cplx swf_kernel_at(const GroupElement& g, const SWOperatorField& d, double beta, double alpha);

// Orbit data for every irrep of dimension 1..band.
struct OrbitCalculus {
  OrbitSpec spec;
  SWOperatorField delta;
};
std::vector<OrbitCalculus> orbit_calculi(int band);

// F_SW[Psi](pi_n, .) for n = 1..band. Throws if Psi carries irreps beyond the band.
std::vector<OrbitField> swf_transform(const std::function<cplx(const GroupElement&)>& psi, int band,
                                      const std::vector<OrbitCalculus>& c);
cplx swf_inverse_at(const std::vector<OrbitField>& f, const std::vector<OrbitCalculus>& c, const GroupElement& g);
// sum_pi d_pi int |F|^2 dmu.
double swf_norm2(const std::vector<OrbitField>& f, const std::vector<OrbitCalculus>& c);
// F_SW,eps[Psi](pi_n) = F_SW[Psi](pi_{k(n-1)+1}), eps = 1/k. For k > 1 the scaled weight kj must be integral.
OrbitField momentum_scaled_swf(const std::vector<OrbitField>& f, int n, int k);

// |(v_{kj}, pi_{kj}(g) v_{kj}) - (v_j, pi_j(g) v_j)^k|.
double cartan_power_residual(double j, int k, const GroupElement& g);

// Q^B(f) = int f(theta) P_theta dmu.
MatrixXc berezin_quantize(const OrbitField& f, const OrbitSpec& s);

struct KRateFit {
  std::vector<double> j, residual;  // ||K_j f - f||_inf on a sphere grid
  double slope = 0;                 // of log residual against log(1/j)
};
KRateFit k_rate_fit(const std::function<cplx(double, double)>& f, int f_band, const std::vector<double>& j_list);

// CSV rows beta, alpha, re, im and JSON {n, spin, coefficients: [[l, m, re, im], ...]}.
std::string orbit_field_csv(const OrbitField& f, const OrbitSpec& s);
std::string harmonics_json(const OrbitField& f, const OrbitSpec& s);

}  // namespace qg
