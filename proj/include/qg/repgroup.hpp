#pragma once

#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "qg/core.hpp"

namespace qg {

enum class Group { U1, SU2 };

const char* group_name(Group g);
Group parse_group(const std::string& s);

// U(1): j in Z. SU(2): n = 2j+1 >= 1, the dimension.
struct IrrepLabel {
  Group group = Group::SU2;
  int label = 1;
  friend bool operator==(const IrrepLabel&, const IrrepLabel&) = default;
};

int dim(const IrrepLabel& pi);
double casimir(const IrrepLabel& pi);
double spin(const IrrepLabel& pi);  // (n-1)/2 for SU(2), j for U(1)

// Irreps with label up to `band`: U(1) -band..band, SU(2) 1..band.
std::vector<IrrepLabel> irreps_upto(Group g, int band);
// How far a product with a band-b function can move an irrep label.
int band_spread(Group g, int band);
// Band of the pointwise product of two functions of bands a and b.
int band_product(Group g, int a, int b);

// Angle for U(1); unit quaternion for SU(2) under
//   q = (w,x,y,z)  <->  w 1 + x(-i sx) + y(-i sy) + z(-i sz),
// which is a group isomorphism for the Hamilton product.
struct GroupElement {
  Group group = Group::SU2;
  double angle = 0.0;
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
};

GroupElement identity(Group g);
GroupElement u1_element(double angle);
GroupElement su2_element(const Eigen::Quaterniond& q);
GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

// Lie algebra: U(1) uses X[0]; SU(2) uses coordinates in tau_k = -i sigma_k / 2.
GroupElement exp_map(Group g, const Vector3d& x);
// Principal logarithm; SU(2) angle |X| in [0, 2pi], U(1) angle in (-pi, pi].
Vector3d log_map(const GroupElement& g);
// sqrt(g) = exp(log(g)/2); throws near -1 (SU(2)) or angle pi (U(1)).
GroupElement group_sqrt(const GroupElement& g, double guard = 1e-12);
// Ad_g X (rotation of X by g for SU(2); identity for U(1)).
Vector3d adjoint(const GroupElement& g, const Vector3d& x);
// ad_X Y = [X, Y] = X cross Y in the tau basis.
inline Vector3d lie_bracket(const Vector3d& x, const Vector3d& y) { return x.cross(y); }

Matrix2cd su2_matrix(const GroupElement& g);
Matrix2cd tau_matrix(int k);
Matrix2cd lie_matrix(const Vector3d& x);  // sum_k x_k tau_k

// g = exp(alpha tau_z) exp(beta tau_y) exp(gamma tau_z).
GroupElement from_euler_zyz(double alpha, double beta, double gamma);
// Inverse of the above with beta in [0, pi]; at the poles the split between
// alpha and gamma is fixed by setting gamma-difference (beta=0) or sum (beta=pi) to zero.
Eigen::Vector3d to_euler_zyz(const GroupElement& g);

GroupElement random_element(Group g, std::mt19937_64& rng);

// Representation matrices. For SU(2) the basis is the weight basis ordered
// m = j, j-1, ..., -j (highest weight first).
MatrixXc rep_matrix(const IrrepLabel& pi, const GroupElement& g);
// Holomorphic extension to SL(2, C) (and GL(2, C)) for SU(2) irreps of dimension n.
MatrixXc rep_matrix(int n, const Matrix2cd& m);
// One column of rep_matrix(n, m).
VectorXc rep_column(int n, const Matrix2cd& m, int col);
// Derived representation dpi(X).
MatrixXc lie_rep(const IrrepLabel& pi, const Vector3d& x);
MatrixXc lie_rep(int n, const Matrix2cd& a);

cplx character(const IrrepLabel& pi, const GroupElement& g);
// chi_n on a complex 2x2 matrix of determinant 1, via the trace recurrence.
cplx character(int n, const Matrix2cd& m);
// chi_n(diag(e^s, e^-s)) = sinh(n s)/sinh(s) for complex s, with the series at s -> 0.
cplx character_sinh(int n, cplx s);

// Condon-Shortley coefficient <j1 m1; j2 m2 | j3 m3>. Arguments must be half-integers.
double clebsch_gordan(double j1, double j2, double j3, double m1, double m2, double m3);

struct Quadrature {
  Group group = Group::SU2;
  std::vector<GroupElement> nodes;
  std::vector<double> weights;
  int exactness_degree = 0;
  std::size_t size() const { return nodes.size(); }
};

inline constexpr int max_quadrature_degree = 96;

// Exact for sum_k w_k pi(g_k)_mn conj(pi'(g_k)_m'n') whenever both labels are within
// `degree` (|j| <= degree for U(1), n <= degree for SU(2)). Weights sum to 1 (vol G = 1).
Quadrature group_quadrature(Group g, int degree);
// Smallest degree whose rule integrates every single matrix element of label <= band.
int degree_for_band(Group g, int band);

double verma_norm_sq(double lambda, int k);

}  // namespace qg
