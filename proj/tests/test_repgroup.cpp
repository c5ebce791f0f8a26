#include <doctest.h>

#include <random>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qg/repgroup.hpp"

using namespace qg;

namespace {

// Brute-force CG oracle: diagonalize total J^2 on the tensor product and read the
// coefficient from the highest-weight-normalized eigenvector.
double cg_oracle(int n1, int n2, double j3, double m1, double m2) {
  const MatrixXc id1 = MatrixXc::Identity(n1, n1), id2 = MatrixXc::Identity(n2, n2);
  MatrixXc jtot[3];
  for (int k = 0; k < 3; ++k) {
    const MatrixXc a = I * lie_rep(n1, tau_matrix(k)), b = I * lie_rep(n2, tau_matrix(k));
    jtot[k] = Eigen::kroneckerProduct(a, id2).eval() + Eigen::kroneckerProduct(id1, b).eval();
  }
  const MatrixXc j2 = jtot[0] * jtot[0] + jtot[1] * jtot[1] + jtot[2] * jtot[2];
  const double j1 = 0.5 * (n1 - 1), jj2 = 0.5 * (n2 - 1);
  const double m3 = m1 + m2;
  // Start from the stretched state |j3, j3> built by projecting, then lower.
  // Projector onto total spin j3 and weight m3 via the spectral decomposition.
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(j2);
  MatrixXc proj = MatrixXc::Zero(n1 * n2, n1 * n2);
  for (int k = 0; k < n1 * n2; ++k)
    if (std::abs(es.eigenvalues()[k] - j3 * (j3 + 1)) < 1e-8) proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  // weight basis index: i = j - m
  auto idx = [&](double m1_, double m2_) { return int(std::lround(j1 - m1_)) * n2 + int(std::lround(jj2 - m2_)); };
  // Condon-Shortley: <j1 j1; j2 (j3-j1) | j3 j3> > 0. Fix the phase of |j3 m3> by lowering from |j3 j3>.
  VectorXc top = proj.col(idx(j1, j3 - j1));
  top /= top.norm();
  if (top[idx(j1, j3 - j1)].real() < 0) top = -top;
  const MatrixXc lower = jtot[0] - I * jtot[1];
  VectorXc v = top;
  for (double m = j3; m > m3 + 1e-9; m -= 1) {
    v = lower * v;
    v /= v.norm();
  }
  return v[idx(m1, m2)].real();
}

}  // namespace

TEST_CASE("irrep data") {
  CHECK(dim({Group::U1, -4}) == 1);
  CHECK(dim({Group::SU2, 5}) == 5);
  CHECK(casimir({Group::U1, 3}) == 9.0);
  CHECK(casimir({Group::SU2, 3}) == doctest::Approx(2.0));
}

TEST_CASE("rep_matrix examples") {
  CHECK(std::abs(rep_matrix({Group::U1, 2}, u1_element(pi / 2))(0, 0) - cplx(-1, 0)) < 1e-15);
  CHECK((rep_matrix({Group::SU2, 2}, identity(Group::SU2)) - MatrixXc::Identity(2, 2)).norm() < 1e-15);

  // rotation about z: compare with the matrix exponential of dpi(tau_z)
  const double theta = 0.83;
  const MatrixXc d = lie_rep({Group::SU2, 3}, Vector3d(0, 0, 1));
  MatrixXc expect(3, 3);
  expect.setZero();
  expect(0, 0) = std::exp(-I * theta);
  expect(1, 1) = 1.0;
  expect(2, 2) = std::exp(I * theta);
  CHECK((d - I * MatrixXc(Eigen::Vector3cd(-1, 0, 1).asDiagonal())).norm() < 1e-15);
  const MatrixXc oracle = (theta * d).exp();
  const MatrixXc got = rep_matrix({Group::SU2, 3}, exp_map(Group::SU2, Vector3d(0, 0, theta)));
  CHECK((got - oracle).norm() < 1e-13);
  CHECK((got - expect).norm() < 1e-13);
}

TEST_CASE("rep_matrix agrees with exponentiated Lie algebra action") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  for (int n = 1; n <= 8; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      const Vector3d x(n01(rng), n01(rng), n01(rng));
      const MatrixXc oracle = lie_rep({Group::SU2, n}, x).exp();
      CHECK((rep_matrix({Group::SU2, n}, exp_map(Group::SU2, x)) - oracle).norm() < 1e-11);
    }
}

TEST_CASE("homomorphism, unitarity and class functions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_element(Group::SU2, rng), h = random_element(Group::SU2, rng);
    for (int n = 1; n <= 8; ++n) {
      const IrrepLabel p{Group::SU2, n};
      const MatrixXc dg = rep_matrix(p, g), dh = rep_matrix(p, h);
      CHECK((rep_matrix(p, multiply(g, h)) - dg * dh).norm() < 1e-11);
      CHECK((dg * dg.adjoint() - MatrixXc::Identity(n, n)).norm() < 1e-12);
      const auto c = multiply(multiply(h, g), inverse(h));
      CHECK(std::abs(character(p, c) - character(p, g)) < 1e-12);
      CHECK(std::abs(character(p, g) - dg.trace()) < 1e-12);
    }
  }
}

TEST_CASE("characters") {
  CHECK(std::abs(character({Group::SU2, 6}, identity(Group::SU2)) - 6.0) < 1e-15);
  CHECK(std::abs(character({Group::U1, 3}, u1_element(0.4)) - std::exp(I * 1.2)) < 1e-15);
  // chi_2(e^{2iH}) = sinh(4p)/sinh(2p) = 2 cosh(2p)
  const double p = 0.37;
  Matrix2cd m = Matrix2cd::Zero();
  m(0, 0) = std::exp(2 * p);
  m(1, 1) = std::exp(-2 * p);
  CHECK(std::abs(character(2, m) - 2 * std::cosh(2 * p)) < 1e-14);
  CHECK(std::abs(character_sinh(2, 2 * p) - 2 * std::cosh(2 * p)) < 1e-14);
  for (int n = 1; n <= 7; ++n) {
    CHECK(std::abs(character(n, m) - character_sinh(n, 2 * p)) < 1e-12);
    CHECK(std::abs(character_sinh(n, 1e-9) - double(n)) < 1e-12);
    CHECK(std::abs(character(n, m) - rep_matrix(n, m).trace()) < 1e-12);
  }
}

TEST_CASE("Clebsch-Gordan") {
  CHECK(clebsch_gordan(0.5, 0.5, 0, 0.5, -0.5, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 1, 2, 1, 1, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 1, 2, 1, 0, 2) == 0.0);
  CHECK(clebsch_gordan(0.5, 0.5, 0, 0.5, -0.5, 0) == doctest::Approx(cg_oracle(2, 2, 0, 0.5, -0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(clebsch_gordan(0.3, 0.5, 0, 0.5, -0.5, 0), Error);

  for (int n1 = 1; n1 <= 4; ++n1)
    for (int n2 = 1; n2 <= 4; ++n2) {
      const double j1 = 0.5 * (n1 - 1), j2 = 0.5 * (n2 - 1);
      for (double m1 = -j1; m1 <= j1 + 1e-9; m1 += 1)
        for (double m2 = -j2; m2 <= j2 + 1e-9; m2 += 1) {
          double sum = 0;
          for (double j3 = std::abs(j1 - j2); j3 <= j1 + j2 + 1e-9; j3 += 1) {
            if (std::abs(m1 + m2) > j3 + 1e-9) continue;
            const double c = clebsch_gordan(j1, j2, j3, m1, m2, m1 + m2);
            sum += c * c;
            CHECK(c == doctest::Approx(cg_oracle(n1, n2, j3, m1, m2)).epsilon(1e-10));
          }
          CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("quadrature") {
  const auto u = group_quadrature(Group::U1, 5);
  CHECK(u.size() == 11);
  for (int j = -5; j <= 5; ++j)
    for (int jp = -5; jp <= 5; ++jp) {
      cplx s = 0;
      for (std::size_t k = 0; k < u.size(); ++k)
        s += u.weights[k] * rep_matrix({Group::U1, j}, u.nodes[k])(0, 0) *
             std::conj(rep_matrix({Group::U1, jp}, u.nodes[k])(0, 0));
      CHECK(std::abs(s - (j == jp ? 1.0 : 0.0)) < 1e-14);
    }

  for (int deg : {1, 4, 6}) {
    const auto q = group_quadrature(Group::SU2, deg);
    double wsum = 0;
    for (double w : q.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    double worst = 0;
    for (int n = 1; n <= deg; ++n)
      for (int np = 1; np <= deg; ++np) {
        const int nn = n * n, mm = np * np;
        MatrixXc gram = MatrixXc::Zero(nn, mm);
        for (std::size_t k = 0; k < q.size(); ++k) {
          const MatrixXc a = rep_matrix({Group::SU2, n}, q.nodes[k]);
          const MatrixXc b = rep_matrix({Group::SU2, np}, q.nodes[k]);
          const Eigen::Map<const VectorXc> va(a.data(), nn), vb(b.data(), mm);
          gram += q.weights[k] * va * vb.adjoint();
        }
        if (n == np) gram -= MatrixXc::Identity(nn, mm) / double(n);
        worst = std::max(worst, gram.cwiseAbs().maxCoeff());
      }
    CHECK(worst < 1e-12);
  }
  CHECK_THROWS_AS(group_quadrature(Group::SU2, max_quadrature_degree + 1), Error);
}

TEST_CASE("exp, log, sqrt and Euler angles") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_element(Group::SU2, rng);
    const auto back = exp_map(Group::SU2, log_map(g));
    CHECK((su2_matrix(back) - su2_matrix(g)).norm() < 1e-12);
    const auto r = group_sqrt(g);
    CHECK((su2_matrix(multiply(r, r)) - su2_matrix(g)).norm() < 1e-12);
    const Eigen::Vector3d e = to_euler_zyz(g);
    CHECK((su2_matrix(from_euler_zyz(e[0], e[1], e[2])) - su2_matrix(g)).norm() < 1e-12);
    const Vector3d x(0.3, -0.2, 0.9);
    const Matrix2cd lhs = su2_matrix(g) * lie_matrix(x) * su2_matrix(g).adjoint();
    CHECK((lhs - lie_matrix(adjoint(g, x))).norm() < 1e-13);
  }
  CHECK_THROWS_AS(group_sqrt(su2_element(Eigen::Quaterniond(-1, 0, 0, 0))), Error);
  // [tau_x, tau_y] = tau_z
  const Matrix2cd c = tau_matrix(0) * tau_matrix(1) - tau_matrix(1) * tau_matrix(0);
  CHECK((c - tau_matrix(2)).norm() < 1e-15);
}

TEST_CASE("Verma norms") {
  CHECK(verma_norm_sq(2, 3) == 0.0);
  // integral lambda: every k > lambda hits the null factor
  CHECK(verma_norm_sq(2, 4) == 0.0);
  CHECK(verma_norm_sq(2.5, 4) < 0.0);
  CHECK(verma_norm_sq(-0.5, 1) == -0.5);
  CHECK(verma_norm_sq(1.7, 0) == 1.0);
  CHECK(verma_norm_sq(3, 2) == doctest::Approx(1 * 3 * 2 * 2));
}
