#include "qg/heatcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qg {

namespace {

// Centered q-series: terms exp(i pi tau m^2 + 2 pi i m z - E*) where E* = pi y^2/a is the
// maximum of the real exponent, reached at m* = -y/a. Returns (theta, theta') both scaled.
std::pair<cplx, cplx> theta_direct(cplx z, cplx tau) {
  const double a = tau.imag(), y = z.imag();
  const double mstar = -y / a;
  const double estar = pi * y * y / a;
  // envelope exp(-pi a (m - m*)^2) < 1e-18 beyond this radius
  const int radius = static_cast<int>(std::ceil(std::sqrt(41.5 / (pi * a)))) + 1;
  const long m0 = std::lround(mstar);
  cplx th = 0.0, dth = 0.0;
  for (long m = m0 - radius; m <= m0 + radius; ++m) {
    const double md = static_cast<double>(m);
    const cplx term = std::exp(I * pi * tau * md * md + 2.0 * pi * I * md * z - estar);
    th += term;
    dth += 2.0 * pi * I * md * term;
  }
  return {th, dth};
}

std::pair<cplx, cplx> theta_scaled_pair(cplx z, cplx tau) {
  require(tau.imag() > 0, "theta3: Im(tau) must be positive");
  const cplx taup = -1.0 / tau;
  if (taup.imag() <= tau.imag()) return theta_direct(z, tau);
  // theta(z|tau) = (-i tau)^{-1/2} e^{-i pi z^2/tau} theta(z/tau | -1/tau)
  const cplx zp = z / tau;
  auto [th, dth] = theta_direct(zp, taup);
  const double a = tau.imag(), y = z.imag();
  const cplx expo = -I * pi * z * z / tau - pi * y * y / a + pi * zp.imag() * zp.imag() / taup.imag();
  const cplx pref = std::exp(expo) / std::sqrt(-I * tau);
  return {pref * th, pref * (-2.0 * pi * I * z / tau * th + dth / tau)};
}

}  // namespace

cplx theta3_scaled(cplx z, cplx tau) { return theta_scaled_pair(z, tau).first; }
cplx theta3_dz_scaled(cplx z, cplx tau) { return theta_scaled_pair(z, tau).second; }

cplx theta3(cplx z, cplx tau) {
  const double y = z.imag();
  return theta3_scaled(z, tau) * std::exp(pi * y * y / tau.imag());
}

cplx theta3_dz(cplx z, cplx tau) {
  const double y = z.imag();
  return theta3_dz_scaled(z, tau) * std::exp(pi * y * y / tau.imag());
}

HeatParams make_heat_params(Group g, double t, double growth) {
  require(t > 0, "heat kernel: t must be positive");
  HeatParams p{g, t, 0};
  for (int l = 1;; ++l) {
    const IrrepLabel pi_l{g, l};
    const double d = dim(pi_l);
    const double bound = d * d * std::exp(-0.5 * t * casimir(pi_l) + growth * l) * (l + 1);
    if (bound < 1e-16 && 0.5 * t * l > growth) {
      p.truncation = l;
      return p;
    }
    require(l < 100000, "make_heat_params: truncation did not converge");
  }
}

double heat_kernel(const HeatParams& p, const GroupElement& g) {
  require(p.group == g.group, "heat_kernel: group mismatch");
  double s = 0.0;
  if (p.group == Group::U1) {
    for (int j = -p.truncation; j <= p.truncation; ++j) s += std::exp(-0.5 * p.t * j * j) * std::cos(j * g.angle);
    return s;
  }
  for (int n = 1; n <= p.truncation; ++n) {
    const IrrepLabel pi_n{Group::SU2, n};
    s += n * std::exp(-0.5 * p.t * casimir(pi_n)) * character(pi_n, g).real();
  }
  return s;
}

cplx heat_kernel_c(const HeatParams& p, cplx w) {
  require(p.group == Group::U1, "heat_kernel_c: U(1) argument for non-U(1) params");
  // sum_j e^{-t j^2/2} w^j = theta3(log w / 2 pi i | i t / 2 pi)
  return theta3(std::log(w) / (2.0 * pi * I), I * p.t / (2.0 * pi));
}

cplx heat_kernel_c(const HeatParams& p, const Matrix2cd& m) {
  require(p.group == Group::SU2, "heat_kernel_c: SL(2,C) argument for non-SU(2) params");
  const cplx tr = m.trace();
  // |chi_n| <= n e^{(n-1)|Re s|} with tr = 2 cosh s
  const double growth = std::abs(std::acosh(0.5 * tr).real());
  cplx prev = 0.0, cur = 1.0, sum = 0.0;
  for (int n = 1;; ++n) {
    const double weight = n * std::exp(-0.125 * p.t * (double(n) * n - 1));
    sum += weight * cur;
    const double tail = weight * (n + 1) * std::exp(growth * n);
    if (n > 4.0 * growth / p.t + 2 && tail < 1e-17 * std::max(1.0, std::abs(sum))) break;
    require(n < 200000, "heat_kernel_c: series did not converge");
    const cplx next = tr * cur - prev;
    prev = cur;
    cur = next;
  }
  return sum;
}

namespace {

Matrix2cd exp_i_lie(const Vector3d& x, double sign) {
  // exp(sign * i X) = cosh(r/2) + sign sinh(r/2) xhat.sigma, since i tau_k = sigma_k / 2
  const double r = x.norm();
  Matrix2cd out = std::cosh(0.5 * r) * Matrix2cd::Identity();
  if (r > 0) {
    const Vector3d u = x / r;
    Matrix2cd s;
    s << u[2], cplx(u[0], -u[1]), cplx(u[0], u[1]), -u[2];
    out += sign * std::sinh(0.5 * r) * s;
  }
  return out;
}

}  // namespace

cplx coherent_overlap(const HeatParams& p, const PolarPoint& z, const PolarPoint& zp) {
  HeatParams p2 = p;
  p2.t = 2 * p.t;
  if (p.group == Group::U1) {
    const cplx w = std::exp(I * (z.g.angle - zp.g.angle)) * std::exp(z.x[0] + zp.x[0]);
    return heat_kernel_c(p2, w);
  }
  // zp^{-1} zbar = e^{-i X'} g'^{-1} g e^{-i X}
  const Matrix2cd m = exp_i_lie(zp.x, -1.0) * su2_matrix(inverse(zp.g)) * su2_matrix(z.g) * exp_i_lie(z.x, -1.0);
  return heat_kernel_c(p2, m);
}

ResolutionU1 resolution_constant_u1(double t, int shift_j, double tol) {
  require(t > 0, "resolution_constant_u1: t must be positive");
  const double c = -t * shift_j, w = 14.0 * std::sqrt(t);
  auto f = [&](double l) {
    const cplx th = theta3(l / t, I * pi / t);
    return std::sqrt(t / pi) * std::exp(-(l + t * shift_j) * (l + t * shift_j) / t) / th.real();
  };
  ResolutionU1 out;
  const int panels = 32;
  for (int k = 0; k < panels; ++k) {
    const double a = c - w + 2 * w * k / panels, b = a + 2 * w / panels;
    auto r = integrate<double>(f, a, b, tol / panels);
    out.value += r.value;
    out.error += r.error;
  }
  require(out.error < 1e3 * tol, "resolution_constant_u1: quadrature did not converge, achieved error " +
                                     std::to_string(out.error));
  return out;
}

namespace {

// S(p) = sum_m m e^{-(p - t m/2)^2/t} = e^{-p^2/t} theta3'(p/2 pi i | i t/4 pi) / (2 pi i).
cplx s_of_p(double p, double t) {
  if (std::abs(p) < 0.5) {
    // pairwise form e^{-p^2/t} sum_{m>=1} 2 m e^{-t m^2/4} sinh(m p), exact near p = 0
    double s = 0.0;
    for (int m = 1;; ++m) {
      const double term = 2.0 * m * std::exp(-0.25 * t * m * m) * std::sinh(m * p);
      s += term;
      if (0.25 * t * m * m > 45.0 + m * std::abs(p)) break;
    }
    return std::exp(-p * p / t) * s;
  }
  return theta3_dz_scaled(p / (2.0 * pi * I), I * t / (4.0 * pi)) / (2.0 * pi * I);
}

}  // namespace

ResolutionSU2 resolution_integral_su2(double t, int n, double tol, int min_panels, bool adaptive) {
  require(t > 0 && n >= 1, "resolution_integral_su2: need t > 0 and n >= 1");
  require(min_panels >= 1, "resolution_integral_su2: need at least one panel");
  const double c = 0.5 * t * n, w = 12.0 * std::sqrt(t);
  auto f = [&](double p) -> cplx {
    if (p == 0.0) return 0.0;
    // 2 pi i p^2 e^{..} / (e^{-p^2/t} theta3') = p^2 e^{..} / S(p)
    return p * p * std::exp(-(p - c) * (p - c) / t) / s_of_p(p, t);
  };
  std::vector<double> cuts;
  for (int k = 0; k <= min_panels; ++k) cuts.push_back(c - w + 2 * w * k / min_panels);
  if (c - w < 0 && 0 < c + w) {
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
  }
  ResolutionSU2 out;
  cplx total = 0.0;
  const double scale = t * t * t * n / 8.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 0) continue;
    if (adaptive) {
      auto r = integrate<cplx>(f, cuts[k], cuts[k + 1], tol * scale / min_panels);
      total += r.value;
      out.error += r.error;
      out.evaluations += r.evaluations;
    } else {
      auto [v, e] = detail::gk15<cplx>(f, cuts[k], cuts[k + 1]);
      total += v;
      out.error += e;
      out.evaluations += 15;
    }
  }
  out.value = total.real();
  out.imag_residual = std::abs(total.imag());
  return out;
}

namespace {

// log rho_{2t}(e^{2iX}) for |X| = r, where e^{2iX} has eigenvalues e^{+-r}.
// The series is summed relative to e^{r^2/t} so that large r stays finite.
double log_rho2_e2ix(double t, double r) {
  double s = 0.0;
  for (int n = 1;; ++n) {
    // n chi_n(e^{2iX}) e^{-t(n^2-1)/4 - r^2/t}, exponent combined before exp
    double log_term = std::log(double(n)) - 0.25 * t * (double(n) * n - 1) - r * r / t;
    if (r < 1e-8)
      log_term += std::log(double(n));
    else
      log_term += (n - 1) * r + std::log(-std::expm1(-2.0 * n * r) / -std::expm1(-2.0 * r));
    const double term = std::exp(log_term);
    s += term;
    if (n > 2.0 * r / t + 4 && term < 1e-18 * s) break;
    require(n < 1000000, "log_rho2_e2ix: series did not converge");
  }
  return std::log(s) + r * r / t;
}

}  // namespace

SchurResult schur_residual_su2(double t, int n, int radial_nodes, int sphere_degree) {
  require(t > 0 && n >= 1, "schur_residual_su2: need t > 0 and n >= 1");
  if (sphere_degree <= 0) sphere_degree = n + 1;
  const double big_r = t * n + 12.0 * std::sqrt(t) + 2.0;
  const GaussRule gl = gauss_legendre(radial_nodes);
  const SphereRule sph = sphere_rule(sphere_degree);
  const double lam = casimir({Group::SU2, n});
  MatrixXc a = MatrixXc::Zero(n, n);
  for (int ir = 0; ir < radial_nodes; ++ir) {
    const double r = 0.5 * big_r * (gl.nodes[ir] + 1.0);
    const double wr = 0.5 * big_r * gl.weights[ir] * r * r;
    const double log_rho = log_rho2_e2ix(t, r);
    for (std::size_t k = 0; k < sph.size(); ++k) {
      const double b = sph.beta[k], al = sph.alpha[k];
      const Vector3d x = r * Vector3d(std::sin(b) * std::cos(al), std::sin(b) * std::sin(al), std::cos(b));
      // e^{2iX} = cosh r + sinh r xhat.sigma
      const Vector3d u = x / r;
      Matrix2cd m;
      m << std::cosh(r) + std::sinh(r) * u[2], std::sinh(r) * cplx(u[0], -u[1]), std::sinh(r) * cplx(u[0], u[1]),
          std::cosh(r) - std::sinh(r) * u[2];
      a += (wr * sph.weight[k] * 4 * pi * std::exp(-t * lam - log_rho)) * rep_matrix(n, m);
    }
  }
  SchurResult out;
  const cplx tr = a.trace();
  out.residual = (a - (tr / double(n)) * MatrixXc::Identity(n, n)).norm() / std::abs(tr);
  out.a = std::move(a);
  return out;
}

double measure_equiv_ratio(double t, const Vector3d& x) {
  require(t > 0, "measure_equiv_ratio: t must be positive");
  const double r = x.norm();
  const double eta = r < 1e-8 ? 1.0 : std::sinh(r) / r;
  const double two_pi_t = 2 * pi * t;
  // rho in the Riemannian-volume normalization is rho / (16 pi^2)
  const double log_s = log_rho2_e2ix(t, r) - r * r / t;
  return two_pi_t * two_pi_t * two_pi_t * std::exp(log_s) / (16 * pi * pi) * std::pow(pi * t, -1.5) * std::exp(-0.25 * t) * eta;
}

}  // namespace qg
