#include <doctest.h>

#include <random>

#include "qg/heatcs.hpp"

using namespace qg;

namespace {

// Brute-force q-series in long double, no frame change.
std::complex<long double> theta_brute(cplx z, cplx tau, int terms = 400) {
  std::complex<long double> s = 0;
  const std::complex<long double> zz(z.real(), z.imag()), tt(tau.real(), tau.imag());
  const std::complex<long double> il(0, 1);
  const long double pil = 3.141592653589793238462643383279502884L;
  for (int n = -terms; n <= terms; ++n) s += std::exp(il * pil * tt * (long double)(n * n) + 2.0L * pil * il * (long double)n * zz);
  return s;
}

}  // namespace

TEST_CASE("theta3 values") {
  double direct = 0;
  for (int n = -50; n <= 50; ++n) direct += std::exp(-pi * n * n);
  CHECK(std::abs(theta3(0.0, I) - direct) < 1e-15);
  CHECK(std::abs(theta3(0.0, I) - 1.0864348112133080) < 1e-14);

  const cplx z(0.31, -0.12), tau(0.2, 0.45);
  const auto b = theta_brute(z, tau);
  CHECK(std::abs(theta3(z, tau) - cplx(double(b.real()), double(b.imag()))) < 1e-13);
  CHECK(std::abs(theta3(z + 1.0, tau) - theta3(z, tau)) < 1e-13);
  CHECK_THROWS_AS(theta3(z, cplx(0.3, -0.1)), Error);
}

TEST_CASE("theta3 modular identity on a grid") {
  double worst = 0;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      const double l = -1.5 + 0.33 * a, t = 0.2 + 0.45 * b;
      const cplx lhs = theta3(I * l / pi, I * t / pi);
      const cplx rhs = std::sqrt(pi / t) * std::exp(l * l / t) * theta3(l / t, I * pi / t);
      worst = std::max(worst, std::abs(lhs / rhs - 1.0));
      // lhs against the plain series as an independent oracle
      const auto brute = theta_brute(I * l / pi, I * t / pi, 200);
      worst = std::max(worst, std::abs(lhs / cplx(double(brute.real()), double(brute.imag())) - 1.0));
    }
  CHECK(worst < 1e-10);
  const double l = 0.3, t = 0.7;
  CHECK(std::abs(theta3(I * l / pi, I * t / pi) / (std::sqrt(pi / t) * std::exp(l * l / t) * theta3(l / t, I * pi / t)) -
                 1.0) < 1e-13);
}

TEST_CASE("theta3 derivative") {
  CHECK(std::abs(theta3_dz(0.0, I)) < 1e-15);
  const cplx tau = 0.5 * I;
  for (cplx z : {cplx(0.2, 0.1), cplx(-0.4, 0.3), cplx(0.05, -0.6)}) {
    const double h = 2e-4;
    const cplx fd = (-theta3(z + 2 * h, tau) + 8.0 * theta3(z + h, tau) - 8.0 * theta3(z - h, tau) + theta3(z - 2 * h, tau)) /
                    (12 * h);
    CHECK(std::abs(fd - theta3_dz(z, tau)) < 1e-8);
    CHECK(std::abs(theta3_dz(z + 1.0, tau) - theta3_dz(z, tau)) < 1e-12);
  }
  // scaled variants stay finite where the raw value overflows
  const cplx zbig(0.0, -300.0), tsmall = I * 0.01;
  CHECK(std::isfinite(std::abs(theta3_dz_scaled(zbig, tsmall))));
}

TEST_CASE("heat kernel") {
  const auto pu = make_heat_params(Group::U1, 1.0);
  double direct = 0;
  for (int j = -60; j <= 60; ++j) direct += std::exp(-0.5 * j * j);
  CHECK(heat_kernel(pu, identity(Group::U1)) == doctest::Approx(direct).epsilon(1e-15));
  CHECK(direct == doctest::Approx(2.50662827).epsilon(1e-8));

  for (double t : {0.5, 1.0, 3.0}) {
    const auto ps = make_heat_params(Group::SU2, t);
    const auto q = group_quadrature(Group::SU2, ps.truncation + 1);
    double integral = 0;
    for (std::size_t k = 0; k < q.size(); ++k) integral += q.weights[k] * heat_kernel(ps, q.nodes[k]);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
  }
  std::mt19937_64 rng(5);
  const auto ps = make_heat_params(Group::SU2, 0.7);
  for (int k = 0; k < 1000; ++k) {
    const auto g = random_element(Group::SU2, rng), h = random_element(Group::SU2, rng);
    const double v = heat_kernel(ps, g);
    CHECK(v > 0);
    CHECK(std::abs(heat_kernel(ps, multiply(multiply(h, g), inverse(h))) - v) < 1e-10 * v + 1e-14);
    CHECK(heat_kernel(pu, random_element(Group::U1, rng)) > 0);
  }
}

TEST_CASE("coherent overlaps") {
  const double t = 0.8, l = 0.45;
  const auto pu = make_heat_params(Group::U1, t);
  PolarPoint z{u1_element(1.1), Vector3d(l, 0, 0)};
  double series = 0;
  for (int j = -80; j <= 80; ++j) series += std::exp(-t * j * j + 2 * j * l);
  CHECK(std::abs(coherent_overlap(pu, z, z) - series) < 1e-12 * series);
  CHECK(std::abs(coherent_overlap(pu, z, z) - theta3(I * l / pi, I * t / pi)) < 1e-12 * series);
  PolarPoint e{identity(Group::U1), Vector3d::Zero()};
  CHECK(coherent_overlap(pu, e, e).real() > 0);
  CHECK(std::abs(coherent_overlap(pu, e, e) - theta3(0.0, I * t / pi)) < 1e-13);

  // SU(2) norm against the character series and the theta' closed form
  const auto ps = make_heat_params(Group::SU2, t);
  for (double p : {0.0, 0.3, 1.7}) {
    PolarPoint w{identity(Group::SU2), Vector3d(0, 0, p)};
    double s = 0;
    for (int n = 1; n < 200; ++n) s += n * std::exp(-t * (n * n - 1) / 4.0) * character_sinh(n, p).real();
    const cplx norm = coherent_overlap(ps, w, w);
    CHECK(std::abs(norm - s) < 1e-12 * s);
    if (p > 0) {
      const cplx closed = std::exp(t / 4) * theta3_dz(p / (2 * pi * I), I * t / (4 * pi)) / (2.0 * pi * I * 2.0 * std::sinh(p));
      CHECK(std::abs(norm - closed) < 1e-12 * s);
    }
  }

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (int k = 0; k < 1000; ++k) {
    PolarPoint a{random_element(Group::SU2, rng), 0.5 * Vector3d(n01(rng), n01(rng), n01(rng))};
    PolarPoint b{random_element(Group::SU2, rng), 0.5 * Vector3d(n01(rng), n01(rng), n01(rng))};
    const cplx ab = coherent_overlap(ps, a, b), ba = coherent_overlap(ps, b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-10 * std::abs(ab));
    const cplx aa = coherent_overlap(ps, a, a);
    CHECK(aa.real() > 0);
    CHECK(std::abs(aa.imag()) < 1e-10 * aa.real());
    PolarPoint u{random_element(Group::U1, rng), Vector3d(n01(rng), 0, 0)};
    PolarPoint v{random_element(Group::U1, rng), Vector3d(n01(rng), 0, 0)};
    CHECK(std::abs(coherent_overlap(pu, u, v) - std::conj(coherent_overlap(pu, v, u))) < 1e-10 * std::abs(coherent_overlap(pu, u, v)));
  }
}

TEST_CASE("U(1) resolution constant") {
  for (double t : {0.5, 1.0, 2.0}) {
    const auto r = resolution_constant_u1(t);
    CHECK(std::abs(r.value / t - 1.0) < 1e-4);
    CHECK(std::abs(resolution_constant_u1(t, 3).value - r.value) < 1e-10);
    CHECK(std::abs(resolution_constant_u1(t, -2).value - r.value) < 1e-10);
  }
}

TEST_CASE("SU(2) resolution integral") {
  CHECK(resolution_integral_su2(1, 1).value == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(std::abs(resolution_integral_su2(2, 4).value - 4.0) < 1e-6);
  CHECK(std::abs(resolution_integral_su2(pi, 1).value - 3.87578) < 2e-4);
  CHECK(std::abs(resolution_integral_su2(std::exp(1.0), 5).value - 12.5535) < 2e-3);
  for (double t : {1.0, 2.0, std::exp(1.0), pi, 4.0})
    for (int n = 1; n <= 5; ++n) {
      const auto r = resolution_integral_su2(t, n);
      const double closed = t * t * t * n / 8.0;
      CHECK(std::abs(r.value - closed) / closed < 1e-4);
      CHECK(r.imag_residual < 1e-8);
      CHECK(std::abs(r.value - n * resolution_integral_su2(t, 1).value) / r.value < 1e-4);
      CHECK(std::abs(r.value - t * t * t * resolution_integral_su2(1, n).value) / r.value < 1e-4);
    }
}

TEST_CASE("Schur property of A_pi") {
  CHECK(schur_residual_su2(1, 1).residual == 0.0);
  CHECK(schur_residual_su2(1, 2).residual < 1e-6);
  const auto r3 = schur_residual_su2(1, 3);
  CHECK(r3.residual < 1e-6);
  const cplx d0 = r3.a(0, 0);
  for (int k = 1; k < 3; ++k) CHECK(std::abs(r3.a(k, k) - d0) < 1e-6 * std::abs(d0));
}

TEST_CASE("measure equivalence ratio") {
  CHECK(std::abs(measure_equiv_ratio(0.1, Vector3d::Zero()) - 1.0) < 0.05);
  // the deviation from 1 shrinks like exp(-c/t)
  const Vector3d x(0.2, -0.1, 0.3);
  double prev = 1.0;
  for (double t : {8.0, 4.0, 2.0}) {
    const double dev = std::abs(measure_equiv_ratio(t, x) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(std::abs(measure_equiv_ratio(0.05, Vector3d(0.4, -0.3, 0.8)) - 1.0) < 1e-12);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  for (int k = 0; k < 100; ++k) CHECK(measure_equiv_ratio(0.05 + 0.02 * k, Vector3d(n01(rng), n01(rng), n01(rng))) > 0);
}
