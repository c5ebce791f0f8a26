#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qg/core.hpp"

namespace qg {

struct GaussRule {
  Eigen::VectorXd nodes;    // on [-1, 1], ascending
  Eigen::VectorXd weights;  // sum to 2
};

// Golub-Welsch: eigen-decomposition of the Jacobi matrix of Legendre polynomials.
GaussRule gauss_legendre(int n);

template <typename Scalar>
struct IntegralResult {
  Scalar value{};
  double error = 0;
  int evaluations = 0;
};

namespace detail {

struct Kronrod15 {
  static constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                   0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <typename Scalar, typename F>
std::pair<Scalar, double> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Scalar fc = f(c);
  Scalar kron = fc * Kronrod15::wgk[7];
  Scalar gauss = fc * Kronrod15::wg[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = h * Kronrod15::xgk[k];
    Scalar s = f(c - dx) + f(c + dx);
    kron += s * Kronrod15::wgk[k];
    if (k % 2 == 1) gauss += s * Kronrod15::wg[k / 2];
  }
  return {kron * h, std::abs(kron - gauss) * h};
}

template <typename Scalar, typename F>
void gk_recurse(F& f, double a, double b, double tol, int depth, IntegralResult<Scalar>& acc) {
  auto [v, e] = gk15<Scalar>(f, a, b);
  acc.evaluations += 15;
  if (e <= tol || depth >= 40 || std::abs(b - a) < 1e-14) {
    acc.value += v;
    acc.error += e;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_recurse<Scalar>(f, a, m, 0.5 * tol, depth + 1, acc);
  gk_recurse<Scalar>(f, m, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) with bisection until the local estimate meets abs_tol.
template <typename Scalar = double, typename F>
IntegralResult<Scalar> integrate(F&& f, double a, double b, double abs_tol = 1e-13) {
  IntegralResult<Scalar> acc;
  detail::gk_recurse<Scalar>(f, a, b, abs_tol, 0, acc);
  return acc;
}

// Product rule on S^2 exact for spherical harmonics of degree <= l_max:
// Gauss-Legendre in cos(beta) times uniform alpha. Weights sum to 1.
struct SphereRule {
  std::vector<double> beta, alpha, weight;
  int exactness = 0;
  std::size_t size() const { return weight.size(); }
};
SphereRule sphere_rule(int l_max);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Largest singular value.
double operator_norm(const MatrixXc& a);

}  // namespace qg
