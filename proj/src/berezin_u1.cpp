#include "qg/berezin.hpp"

#include <algorithm>
#include <cmath>

#include "qg/heatcs.hpp"
#include "qg/numerics.hpp"

namespace qg {

cplx u1_eval(const U1TrigPoly& f, double phi, double l) {
  cplx acc = 0;
  for (const auto& md : f) acc += md.coeff * std::exp(I * (double(md.m) * phi + md.kappa * l));
  return acc;
}

U1Mode u1_monomial(int a, int b, cplx coeff) { return {a - b, cplx(0, a + b), coeff}; }

U1TrigPoly u1_berezin_smoothing(const U1TrigPoly& f, double t) {
  U1TrigPoly g = f;
  for (auto& md : g) md.coeff *= std::exp(-0.5 * t * (double(md.m * md.m) + md.kappa * md.kappa));
  return g;
}

U1Space u1_space(double t, double j0, double l_max) {
  require(t > 0, "u1_space: t must be positive");
  U1Space s;
  s.t = t;
  s.j0 = j0;
  // |c_j|^2 = e^{2 j lambda - t j^2} falls by e^{-t (j - lambda/t)^2} from its peak.
  s.cut = int(std::ceil((std::abs(l_max) + t * (1 + std::abs(j0))) / t + std::sqrt(90.0 / t))) + 4;
  return s;
}

EquivariantU1State u1_coherent(const U1Space& s, double phi, double l) {
  EquivariantU1State v;
  v.j0 = s.j0;
  v.lo = -s.cut;
  v.c.resize(s.dim());
  const double lam = l - s.t * s.j0;
  for (int i = 0; i < s.dim(); ++i) {
    const double j = s.label(i);
    v.c[i] = std::exp(cplx(j * lam - 0.5 * s.t * j * j, -j * phi));
  }
  return v;
}

MatrixXc u1_annihilation(const U1Space& s) {
  MatrixXc x = MatrixXc::Zero(s.dim(), s.dim());
  for (int i = 0; i + 1 < s.dim(); ++i) x(i + 1, i) = std::exp(-0.5 * s.t - s.t * (s.label(i) + s.j0));
  return x;
}

MatrixXc u1_anti_wick(const MatrixXc& x, int a, int b) {
  MatrixXc r = MatrixXc::Identity(x.rows(), x.cols());
  for (int k = 0; k < a; ++k) r = r * x;
  for (int k = 0; k < b; ++k) r = r * x.adjoint();
  return r;
}

MatrixXc u1_berezin_operator(const U1TrigPoly& f, const U1Space& s) {
  // <e_{j+m}| Q(e^{i(m phi + kappa l)}) |e_j> = e^{i kappa j0 t} e^{t (2j + m + i kappa)^2 / 4} e^{-t (j^2 + (j+m)^2) / 2}.
  MatrixXc q = MatrixXc::Zero(s.dim(), s.dim());
  const double t = s.t;
  for (const auto& md : f)
    for (int i = 0; i < s.dim(); ++i) {
      const int r = i + md.m;
      if (r < 0 || r >= s.dim()) continue;
      const double j = s.label(i);
      const cplx u = 2.0 * j + md.m + I * md.kappa;
      q(r, i) += md.coeff * std::exp(I * md.kappa * s.j0 * t + 0.25 * t * u * u - 0.5 * t * (j * j + (j + md.m) * (j + md.m)));
    }
  return q;
}

cplx u1_lower_symbol(const MatrixXc& a, const U1Space& s, double phi, double l) {
  const VectorXc v = u1_coherent(s, phi, l).c;
  return v.dot(a * v) / v.squaredNorm();
}

cplx u1_overlap(const U1Space& s, double phi, double l, double phip, double lp) {
  const cplx z = (I / (2 * pi)) * (-(l + lp) - I * (phi - phip) + 2 * s.j0 * s.t);
  return theta3(z, I * s.t / pi);
}

cplx u1_lower_symbol_overlap(const U1TrigPoly& f, const U1Space& s, double phi, double l, int n_phi, int n_l) {
  // |<xi|xi'>|^2 e^{-lam'^2/t} / <xi|xi> = |theta3_scaled|^2 e^{-(lam - lam')^2 / 2t} / (sqrt(pi/t) theta3(lam/t | i pi/t)),
  // lam = l - j0 t; the scaled theta removes e^{(lam + lam')^2 / 4t} from the overlap.
  double grow = 0;
  for (const auto& md : f) grow = std::max(grow, std::abs(md.kappa.imag()));
  const double t = s.t, lam = l - s.j0 * t, w = 12.0 * std::sqrt(t) + t * grow;
  const double norm = std::sqrt(pi / t) * theta3(lam / t, I * pi / t).real();
  const GaussRule g = gauss_legendre(n_l);
  cplx acc = 0;
  for (int i = 0; i < g.nodes.size(); ++i) {
    const double lp = l + w * g.nodes[i], lamp = lp - s.j0 * t;
    const double radial = w * g.weights[i] / std::sqrt(pi * t) * std::exp(-(lam - lamp) * (lam - lamp) / (2 * t)) / norm;
    for (int p = 0; p < n_phi; ++p) {
      const double phip = 2 * pi * p / n_phi;
      const cplx z = (I / (2 * pi)) * (-(lam + lamp) - I * (phi - phip));
      acc += radial / double(n_phi) * std::norm(theta3_scaled(z, I * t / pi)) * u1_eval(f, phip, lp);
    }
  }
  return acc;
}

cplx u1_period_factor(int m, cplx kappa, const U1Space& s, double l) {
  const double lam = (l - s.j0 * s.t) / s.t;
  const cplx a = 0.5 * (double(m) - I * kappa);
  return theta3(lam - a, I * pi / s.t) / theta3(lam, I * pi / s.t);
}

cplx u1_lower_symbol_exact(const U1TrigPoly& f, const U1Space& s, double phi, double l) {
  cplx acc = 0;
  for (const auto& md : f)
    acc += u1_wick_multiplier(md.m, md.kappa, s.t) * u1_period_factor(md.m, md.kappa, s, l) * u1_eval({md}, phi, l);
  return acc;
}

cplx u1_wick_multiplier(int m, cplx kappa, double t) {
  const cplx a = 0.5 * (double(m) - I * kappa), b = 0.5 * (-double(m) - I * kappa);
  return std::exp(2.0 * t * a * b);
}

MatrixXc u1_kn_operator(const U1KNSymbol& sigma, const U1Space& s) {
  MatrixXc a = MatrixXc::Zero(s.dim(), s.dim());
  for (std::size_t q = 0; q < sigma.m.size(); ++q)
    for (int i = 0; i < s.dim(); ++i) {
      const int r = i + sigma.m[q];
      if (r >= 0 && r < s.dim()) a(r, i) += sigma.s[q](s.label(i));
    }
  return a;
}

cplx u1_kn_lower_symbol_series(const U1KNSymbol& sigma, const U1Space& s, double phi, double l, int n_phi) {
  const double t = s.t, lam = l - s.j0 * t;
  const int jw = 4 + int(std::ceil(std::sqrt(t)));
  cplx acc = 0;
  for (int i = 0; i < s.dim(); ++i) {
    const int k = s.label(i);
    const double lk = lam - t * k;
    for (int p = 0; p < n_phi; ++p) {
      const double phip = 2 * pi * p / n_phi;
      cplx sig = 0;
      for (std::size_t q = 0; q < sigma.m.size(); ++q) sig += sigma.s[q](k) * std::exp(I * (double(sigma.m[q]) * phip));
      // e^{-lk^2/t} e^{-((u - i lk)^2) / 2t} = e^{-(lk^2 + u^2) / 2t + i u lk / t}.
      cplx wrap = 0;
      for (int j = -jw; j <= jw; ++j) {
        const double u = phi - phip - 2 * pi * j;
        wrap += std::exp(cplx(-(lk * lk + u * u) / (2 * t), u * lk / t));
      }
      acc += sig * wrap * (2 * pi / n_phi);
    }
  }
  return std::sqrt(2.0) / (2 * pi * theta3(lam / t, I * pi / t)) * acc;
}

U1KNSymbol u1_kn_from_upper(const U1TrigPoly& f, double t, double j0) {
  U1KNSymbol sig;
  for (const auto& md : f) {
    sig.m.push_back(md.m);
    const cplx c = md.coeff * std::exp(-0.25 * t * (double(md.m * md.m) + md.kappa * md.kappa) + 0.5 * I * t * double(md.m) * md.kappa);
    const cplx kappa = md.kappa;
    sig.s.push_back([c, kappa, t, j0](int k) { return c * std::exp(I * kappa * t * (k + j0)); });
  }
  return sig;
}

MatrixXc u1_weyl_element(const U1Space& s, double phi, int k) {
  require(k >= -s.cut && k <= s.cut, "u1_weyl_element: k outside the truncation");
  MatrixXc w = MatrixXc::Zero(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) w(i, k + s.cut) = std::exp(-I * (double(s.label(i) - k) * phi));
  return w;
}

}  // namespace qg
