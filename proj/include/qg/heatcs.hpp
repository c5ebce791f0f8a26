#pragma once

#include "qg/numerics.hpp"
#include "qg/repgroup.hpp"

namespace qg {

// Third Jacobi theta function theta3(z|tau) = sum_n exp(i pi tau n^2 + 2 pi i n z).
cplx theta3(cplx z, cplx tau);
cplx theta3_dz(cplx z, cplx tau);
// The same values multiplied by exp(-pi (Im z)^2 / Im tau), which removes the
// Gaussian growth in Im z and keeps large arguments finite.
cplx theta3_scaled(cplx z, cplx tau);
cplx theta3_dz_scaled(cplx z, cplx tau);

struct HeatParams {
  Group group = Group::SU2;
  double t = 1.0;
  int truncation = 0;  // largest label kept
};

// Chooses the truncation so that d e^{-t lambda/2} (Lambda+1) < 1e-16 for every dropped label,
// including the exponential growth factor `growth` of characters at complex arguments.
HeatParams make_heat_params(Group g, double t, double growth = 0.0);

double heat_kernel(const HeatParams& p, const GroupElement& g);
// rho_t on the complexification: U(1) argument w in C^*, SU(2) argument in SL(2,C).
cplx heat_kernel_c(const HeatParams& p, cplx w);
cplx heat_kernel_c(const HeatParams& p, const Matrix2cd& m);

// z = g e^{iX}. For U(1) only X[0] is used and z = e^{i angle} e^{-X[0]}.
struct PolarPoint {
  GroupElement g;
  Vector3d x = Vector3d::Zero();
};

// (Psi_z, Psi_z') = rho_{2t}(z'^{-1} zbar) with zbar = g e^{-iX}.
cplx coherent_overlap(const HeatParams& p, const PolarPoint& z, const PolarPoint& zp);

struct ResolutionU1 {
  double value = 0;  // C_t^{-1}
  double error = 0;
};
// C_t^{-1} = int sqrt(t/pi) e^{-(l + t j)^2 / t} / theta3(l/t | i pi/t) dl; independent of j.
ResolutionU1 resolution_constant_u1(double t, int shift_j = 0, double tol = 1e-12);

struct ResolutionSU2 {
  double value = 0;
  double imag_residual = 0;
  double error = 0;
  int evaluations = 0;
};
// I(t,n) = 2 pi i int p^2 e^{-(p - t n/2)^2/t} / (e^{-p^2/t} theta3'(p/2 pi i | i t/4 pi)) dp.
// The window |p - tn/2| <= 12 sqrt(t) is split into `panels` Gauss-Kronrod panels (plus a cut at
// p = 0); with adaptive = false each panel gets a single 15-point rule.
ResolutionSU2 resolution_integral_su2(double t, int n, double tol = 1e-12, int panels = 16, bool adaptive = true);

struct SchurResult {
  MatrixXc a;
  double residual = 0;
};
// (A^t_pi)_{n'n} = int_g rho_{2t}(e^{2iX})^{-1} e^{-t lambda_pi} pi(e^{2iX})_{n'n} dX on a
// spherical product grid (radial Gauss-Legendre x sphere rule of degree `sphere_degree`).
SchurResult schur_residual_su2(double t, int n, int radial_nodes = 160, int sphere_degree = 0);

// (2 pi t)^3 ||Psi_{Phi(g,X)}||^2 nu_t(X) sigma(X), where nu_t is the density with respect to
// the complex Haar measure; tends to 1 as t -> 0 for every X.
double measure_equiv_ratio(double t, const Vector3d& x);

}  // namespace qg
