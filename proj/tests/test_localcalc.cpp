#include <doctest.h>

#include "qg/localcalc.hpp"

using namespace qg;

namespace {

double max_abs(const MatrixXc& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

LocalSymbol with_k(LocalSymbol s, int k) {
  s.k = k;
  return s;
}

const LocalVariant variants[] = {LocalVariant::KN, LocalVariant::Weyl};

}  // namespace

TEST_CASE("position and momentum symbols") {
  for (Group grp : {Group::U1, Group::SU2})
    for (LocalVariant v : variants) {
      const int band = 3;
      const ScalarFn f = [grp](const GroupElement& g) {
        return grp == Group::U1 ? std::exp(I * g.angle) - 0.5 : rep_matrix(2, su2_matrix(g))(0, 1);
      };
      const int fb = grp == Group::U1 ? 1 : 2;
      const auto qf = local_quantize(with_k(local_function(grp, fb, f), 4), v, band);
      CHECK(max_abs(qf.matrix - kn_quantize(multiplication_symbol(grp, band, fb, f), band).matrix) < 1e-12);

      const Vector3d x(0.3, -0.2, 0.7);
      const auto qx = local_quantize(with_k(local_momentum(grp, x), 8), v, band);
      CHECK(max_abs(qx.matrix - kn_quantize(derivative_symbol(grp, band, x, 1.0 / 8), band).matrix) < 1e-12);
    }
}

TEST_CASE("Weyl quantization matches the geodesic-midpoint kernel") {
  std::mt19937_64 rng(21);
  const LocalSymbol u = with_k(random_bump(Group::U1, 2, 0.25, 2.0, 0.6, rng), 2);
  const int band = 8;
  CHECK(max_abs(local_quantize(u, LocalVariant::Weyl, band).matrix - midpoint_quantize(u, band).matrix) < 1e-10);
  // the atomic kernel route agrees with the closed U(1) form
  CHECK(max_abs(kernel_quantize(local_kernel(u, LocalVariant::Weyl), band).matrix - local_quantize(u, LocalVariant::Weyl, band).matrix) <
        1e-10);
  CHECK(max_abs(kernel_quantize(local_kernel(u, LocalVariant::KN), band).matrix - local_quantize(u, LocalVariant::KN, band).matrix) <
        1e-10);

  const LocalSymbol s = with_k(random_bump(Group::SU2, 1, 0.5, 1.0, 0.5, rng), 2);
  CHECK(max_abs(local_quantize(s, LocalVariant::Weyl, 3).matrix - midpoint_quantize(s, 3).matrix) < 1e-10);
}

TEST_CASE("Weyl quantization of real symbols is Hermitian") {
  std::mt19937_64 rng(22);
  const LocalSymbol u = with_k(random_bump(Group::U1, 2, 0.25, 1.5, 0.5, rng), 4);
  const MatrixXc qu = local_quantize(u, LocalVariant::Weyl, 6).matrix;
  CHECK(max_abs(qu - qu.adjoint()) < 1e-12);
  const MatrixXc ku = local_quantize(u, LocalVariant::KN, 6).matrix;
  CHECK(max_abs(ku - ku.adjoint()) > 1e-3);

  const LocalSymbol p = with_k(random_polynomial(Group::SU2, 2, 2, rng), 4);
  // exact on the columns whose image stays inside the band
  const MatrixXc qp = local_quantize(p, LocalVariant::Weyl, 5).matrix.topLeftCorner(pw_size(Group::SU2, 4), pw_size(Group::SU2, 4));
  CHECK(max_abs(qp - qp.adjoint()) < 1e-10);
  const LocalSymbol b = with_k(random_bump(Group::SU2, 1, 0.5, 1.0, 0.5, rng), 2);
  const MatrixXc qb = local_quantize(b, LocalVariant::Weyl, 3).matrix;
  CHECK(max_abs(qb - qb.adjoint()) < 1e-10);
}

TEST_CASE("epsilon scaling law") {
  std::mt19937_64 rng(23);
  for (LocalVariant v : variants) {
    const LocalSymbol u = random_bump(Group::U1, 1, 0.25, 1.5, 0.5, rng);
    CHECK(max_abs(local_quantize(with_k(u, 8), v, 6).matrix - local_quantize(with_k(local_rescale(u, 0.5), 4), v, 6).matrix) < 1e-13);
    const LocalSymbol p = random_polynomial(Group::SU2, 2, 1, rng);
    CHECK(max_abs(local_quantize(with_k(p, 8), v, 3).matrix - local_quantize(with_k(local_rescale(p, 0.5), 4), v, 3).matrix) < 1e-12);
  }
}

TEST_CASE("support outside the injectivity set is rejected") {
  std::mt19937_64 rng(24);
  const LocalSymbol u = random_bump(Group::U1, 1, 0.25, 4.0, 1.0, rng);
  CHECK_THROWS_AS(local_quantize(with_k(u, 1), LocalVariant::KN, 3), Error);
  CHECK_NOTHROW(local_quantize(with_k(u, 2), LocalVariant::KN, 3));
}

TEST_CASE("Poisson bracket") {
  std::mt19937_64 rng(25);
  for (Group grp : {Group::U1, Group::SU2}) {
    const Vector3d x(0.5, -1.0, 0.25), y(0.0, 0.3, 1.0);
    const ScalarFn f = [grp](const GroupElement& g) {
      return grp == Group::U1 ? std::cos(2 * g.angle) + 0.0 * I : rep_matrix(2, su2_matrix(g))(1, 1);
    };
    const int fb = grp == Group::U1 ? 2 : 2;
    const LocalSymbol sx = local_momentum(grp, x), sy = local_momentum(grp, y), sf = local_function(grp, fb, f);
    // {sigma_X, sigma_f} = R_X f
    LocalSymbol rf = local_zero(grp, fb);
    add_term(rf, {0, 0, 0}, {0, 0, 0}, right_derivative(grp, fb, sample_function(rf, f), x));
    CHECK(local_distance(poisson_bracket(sx, sf), rf) < 1e-13);
    // {sigma_X, sigma_Y} = -theta([X,Y]), zero on U(1)
    const LocalSymbol want = grp == Group::U1 ? local_zero(grp, 1) : local_axpy(-1.0, local_momentum(grp, x.cross(y)), local_zero(grp, 1));
    CHECK(local_distance(poisson_bracket(sx, sy), want) < 1e-13);

    const LocalSymbol a = grp == Group::U1 ? random_bump(grp, 1, 0.25, 1.0, 0.4, rng) : random_polynomial(grp, 2, 1, rng);
    const LocalSymbol b = grp == Group::U1 ? random_bump(grp, 1, 0.25, 1.0, 0.4, rng) : random_polynomial(grp, 2, 1, rng);
    const LocalSymbol c = grp == Group::U1 ? random_bump(grp, 1, 0.25, 1.0, 0.4, rng) : random_polynomial(grp, 1, 1, rng);
    CHECK(local_distance(poisson_bracket(a, a), local_zero(grp, 1)) < 1e-12);
    CHECK(local_distance(poisson_bracket(a, b), local_axpy(-1.0, poisson_bracket(b, a), local_zero(grp, 1))) < 1e-12);
    // Leibniz in the second slot
    const LocalSymbol lhs = poisson_bracket(a, local_product(b, c));
    const LocalSymbol rhs = local_axpy(1.0, local_product(poisson_bracket(a, b), c), local_product(b, poisson_bracket(a, c)));
    CHECK(local_distance(lhs, rhs) < 1e-11);
  }
}

TEST_CASE("quantized brackets of position and momentum") {
  const Vector3d x(0.5, -1.0, 0.25), y(0.0, 0.3, 1.0);
  const int k = 4, band = 4;
  const double eps = 1.0 / k;
  for (LocalVariant v : variants) {
    const ScalarFn f = [](const GroupElement& g) { return rep_matrix(2, su2_matrix(g))(0, 0); };
    const LocalSymbol sx = with_k(local_momentum(Group::SU2, x), k), sy = with_k(local_momentum(Group::SU2, y), k);
    const LocalSymbol sf = with_k(local_function(Group::SU2, 2, f), k);
    const MatrixXc qx = local_quantize(sx, v, band).matrix, qy = local_quantize(sy, v, band).matrix;
    const MatrixXc qf = local_quantize(sf, v, band).matrix;
    // (i/eps)[Q(sigma_X), Q(sigma_f)] = Q({sigma_X, sigma_f}) on inputs that stay inside the band
    const int inner = pw_size(Group::SU2, band - 1);
    const MatrixXc lhs = ((I / eps) * (qx * qf - qf * qx)).leftCols(inner);
    const MatrixXc rhs = local_quantize(with_k(poisson_bracket(sx, sf), k), v, band).matrix.leftCols(inner);
    CHECK(max_abs(lhs - rhs) < 1e-12);
    // (i/eps)[P_X, P_Y] = i eps R_[X,Y] = -P_[X,Y]
    const MatrixXc comm = (I / eps) * (qx * qy - qy * qx);
    CHECK(max_abs(comm - local_quantize(with_k(poisson_bracket(sx, sy), k), v, band).matrix) < 1e-12);
    CHECK(max_abs(comm + kn_quantize(derivative_symbol(Group::SU2, band, x.cross(y), eps), band).matrix) < 1e-12);
  }
}

TEST_CASE("kernel cut-off") {
  std::mt19937_64 rng(26);
  for (Group grp : {Group::U1, Group::SU2}) {
    const LocalSymbol s = random_bump(grp, 1, 0.5, 1.0, 0.4, rng);
    CHECK(local_distance(kernel_cutoff([](const Vector3d&) { return cplx(1.0); }, s), s) == 0.0);
    // phi = 1 + c X_1 adds c i d_theta1 sigma, the first term of the expansion
    const double c = 0.3;
    const LocalSymbol h = kernel_cutoff([&](const Vector3d& x) { return cplx(1.0 + c * x[0]); }, s);
    const LocalSymbol want = local_axpy(I * c, local_dtheta(s, 0), s);
    CHECK(local_distance(h, want) < 1e-15);
    // phi vanishing at the origin removes the theta-average sigma-check(0)
    const LocalSymbol z = kernel_cutoff([](const Vector3d& x) { return cplx(x.squaredNorm()); }, s);
    CHECK(local_evaluate(z, Vector3d::Zero(), identity(grp)) != cplx(0.0));
    double origin = 0;
    for (const auto& [key, v] : z.terms)
      if (key[0] == 0 && key[1] == 0 && key[2] == 0) origin = std::max(origin, v.cwiseAbs().maxCoeff());
    CHECK(origin == 0.0);
  }
  // evaluation agrees with the defining sum on U(1): sigma(theta) = sum_j w e^{-i theta X_j} check_j
  LocalSymbol u = local_zero(Group::U1, 0, 0.5);
  add_lattice_sample(u, {1, 0, 0}, VectorXc::Constant(u.grid.size(), 2.0));
  const double w = 0.5 / (2 * pi);
  CHECK(std::abs(local_evaluate(u, Vector3d(0.7, 0, 0), identity(Group::U1)) - w * 2.0 * std::exp(-I * 0.35)) < 1e-15);
}

TEST_CASE("semiclassical residual rates") {
  std::mt19937_64 rng(5);
  const LocalSymbol a = random_bump(Group::U1, 2, 0.25, 1.5, 0.5, rng), b = random_bump(Group::U1, 2, 0.25, 1.5, 0.5, rng);
  const auto w = semiclassical_order_fit(a, b, {4, 8, 16, 32}, 6, LocalVariant::Weyl);
  CHECK(w.moyal_slope == doctest::Approx(2.0).epsilon(0.1));
  // the Weyl commutator expansion has only odd orders, so the Dirac residual is second order too
  CHECK(w.dirac_slope == doctest::Approx(2.0).epsilon(0.1));
  const auto k = semiclassical_order_fit(a, b, {4, 8, 16, 32}, 6, LocalVariant::KN);
  CHECK(k.moyal_slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(k.dirac_slope == doctest::Approx(1.0).epsilon(0.1));
  // sigma = tau: the first-order term vanishes, the symmetrized product error is second order
  const auto same = semiclassical_order_fit(a, a, {4, 8, 16}, 6, LocalVariant::Weyl);
  CHECK(same.dirac[0] < 1e-12);
  CHECK(same.von_neumann_slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK_THROWS_AS(semiclassical_order_fit(a, b, {4, 8}, 6), Error);
}
