#include "qg/repgroup.hpp"

#include <algorithm>
#include <cmath>

#include "qg/numerics.hpp"

namespace qg {

const char* group_name(Group g) { return g == Group::U1 ? "U1" : "SU2"; }

Group parse_group(const std::string& s) {
  if (s == "U1") return Group::U1;
  if (s == "SU2") return Group::SU2;
  throw Error("unknown group tag: " + s);
}

int dim(const IrrepLabel& pi) {
  if (pi.group == Group::U1) return 1;
  require(pi.label >= 1, "SU(2) irrep label must be >= 1");
  return pi.label;
}

double casimir(const IrrepLabel& pi) {
  const double l = pi.label;
  return pi.group == Group::U1 ? l * l : (l * l - 1.0) / 4.0;
}

double spin(const IrrepLabel& pi) { return pi.group == Group::U1 ? pi.label : 0.5 * (pi.label - 1); }

std::vector<IrrepLabel> irreps_upto(Group g, int band) {
  std::vector<IrrepLabel> out;
  if (g == Group::U1)
    for (int j = -band; j <= band; ++j) out.push_back({g, j});
  else
    for (int n = 1; n <= band; ++n) out.push_back({g, n});
  return out;
}

int band_spread(Group g, int band) { return g == Group::U1 ? band : std::max(0, band - 1); }

int band_product(Group g, int a, int b) { return g == Group::U1 ? a + b : a + b - 1; }

GroupElement identity(Group g) { return GroupElement{g, 0.0, Eigen::Quaterniond::Identity()}; }

GroupElement u1_element(double angle) {
  double a = std::fmod(angle, 2 * pi);
  if (a < 0) a += 2 * pi;
  return GroupElement{Group::U1, a, Eigen::Quaterniond::Identity()};
}

GroupElement su2_element(const Eigen::Quaterniond& q) {
  return GroupElement{Group::SU2, 0.0, q.normalized()};
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  require(g.group == h.group, "multiply: group mismatch");
  if (g.group == Group::U1) return u1_element(g.angle + h.angle);
  return su2_element(g.q * h.q);
}

GroupElement inverse(const GroupElement& g) {
  if (g.group == Group::U1) return u1_element(-g.angle);
  return su2_element(g.q.conjugate());
}

GroupElement exp_map(Group g, const Vector3d& x) {
  if (g == Group::U1) return u1_element(x[0]);
  const double r = x.norm();
  if (r < 1e-300) return identity(g);
  const double s = std::sin(0.5 * r) / r;
  return su2_element(Eigen::Quaterniond(std::cos(0.5 * r), s * x[0], s * x[1], s * x[2]));
}

Vector3d log_map(const GroupElement& g) {
  if (g.group == Group::U1) {
    double a = g.angle;
    if (a > pi) a -= 2 * pi;
    return Vector3d(a, 0, 0);
  }
  const Eigen::Vector3d v = g.q.vec();
  const double s = v.norm();
  if (s < 1e-300) return Vector3d::Zero();
  const double r = 2.0 * std::atan2(s, g.q.w());
  return (r / s) * v;
}

GroupElement group_sqrt(const GroupElement& g, double guard) {
  if (g.group == Group::SU2) require(1.0 + g.q.w() > 0.5 * guard * guard, "group_sqrt: element on the square-root branch locus");
  const Vector3d x = log_map(g);
  const double r = g.group == Group::U1 ? std::abs(x[0]) : x.norm();
  const double limit = g.group == Group::U1 ? pi : 2 * pi;
  require(limit - r > guard, "group_sqrt: element on the square-root branch locus");
  return exp_map(g.group, 0.5 * x);
}

Vector3d adjoint(const GroupElement& g, const Vector3d& x) {
  if (g.group == Group::U1) return x;
  return g.q.toRotationMatrix() * x;
}

Matrix2cd su2_matrix(const GroupElement& g) {
  const auto& q = g.q;
  Matrix2cd m;
  m << cplx(q.w(), -q.z()), cplx(-q.y(), -q.x()), cplx(q.y(), -q.x()), cplx(q.w(), q.z());
  return m;
}

Matrix2cd tau_matrix(int k) {
  Matrix2cd m = Matrix2cd::Zero();
  switch (k) {
    case 0: m << 0, -0.5 * I, -0.5 * I, 0; break;
    case 1: m << 0, -0.5, 0.5, 0; break;
    case 2: m << -0.5 * I, 0, 0, 0.5 * I; break;
    default: throw Error("tau_matrix: index out of range");
  }
  return m;
}

Matrix2cd lie_matrix(const Vector3d& x) {
  return x[0] * tau_matrix(0) + x[1] * tau_matrix(1) + x[2] * tau_matrix(2);
}

GroupElement from_euler_zyz(double alpha, double beta, double gamma) {
  const GroupElement a = exp_map(Group::SU2, Vector3d(0, 0, alpha));
  const GroupElement b = exp_map(Group::SU2, Vector3d(0, beta, 0));
  const GroupElement c = exp_map(Group::SU2, Vector3d(0, 0, gamma));
  return multiply(multiply(a, b), c);
}

Eigen::Vector3d to_euler_zyz(const GroupElement& g) {
  const auto& q = g.q;
  const double beta = 2.0 * std::atan2(std::hypot(q.x(), q.y()), std::hypot(q.w(), q.z()));
  double sum = 2.0 * std::atan2(q.z(), q.w());   // alpha + gamma
  double diff = 2.0 * std::atan2(-q.x(), q.y());  // alpha - gamma
  if (std::hypot(q.x(), q.y()) < 1e-14) diff = 0.0;
  if (std::hypot(q.w(), q.z()) < 1e-14) sum = 0.0;
  return {0.5 * (sum + diff), beta, 0.5 * (sum - diff)};
}

GroupElement random_element(Group g, std::mt19937_64& rng) {
  if (g == Group::U1) return u1_element(std::uniform_real_distribution<double>(0, 2 * pi)(rng));
  std::normal_distribution<double> n01;
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(n01(rng), n01(rng), n01(rng), n01(rng));
  } while (q.norm() < 1e-8);
  return su2_element(q);
}

namespace {

double lfact(int k) { return std::lgamma(k + 1.0); }

// Factorials as doubles (exact to 22!, correctly rounded products beyond) and Pascal binomials.
double fact(int k) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171, 1.0);
    for (int i = 1; i < 171; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  require(k >= 0 && k < 171, "factorial out of range");
  return table[k];
}

double binom(int n, int k) {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t(171);
    for (int i = 0; i < 171; ++i) {
      t[i].assign(i + 1, 1.0);
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  require(n >= 0 && n < 171 && k >= 0 && k <= n, "binomial out of range");
  return table[n][k];
}

std::vector<cplx> powers(cplx z, int n) {
  std::vector<cplx> p(n + 1);
  p[0] = 1.0;
  for (int k = 1; k <= n; ++k) p[k] = p[k - 1] * z;
  return p;
}

}  // namespace

// Symmetric-power action f(xi) -> f(M^T xi) on monomials xi1^(p-i) xi2^i / sqrt((p-i)! i!).
VectorXc rep_column(int n, const Matrix2cd& m, int col) {
  require(n >= 1 && col >= 0 && col < n, "rep_column: index out of range");
  const int p = n - 1, i = col;
  const auto pa = powers(m(0, 0), p - i), pb = powers(m(0, 1), i), pc = powers(m(1, 0), p - i), pd = powers(m(1, 1), i);
  VectorXc out = VectorXc::Zero(n);
  for (int k = 0; k <= p - i; ++k) {
    for (int l = 0; l <= i; ++l) {
      const int r = k + l;
      const double c = std::sqrt(fact(p - r) * fact(r) / (fact(p - i) * fact(i))) * binom(p - i, k) * binom(i, l);
      out(r) += c * pa[p - i - k] * pc[k] * pb[i - l] * pd[l];
    }
  }
  return out;
}

MatrixXc rep_matrix(int n, const Matrix2cd& m) {
  require(n >= 1, "rep_matrix: dimension must be >= 1");
  MatrixXc out(n, n);
  for (int i = 0; i < n; ++i) out.col(i) = rep_column(n, m, i);
  return out;
}

MatrixXc lie_rep(int n, const Matrix2cd& a) {
  const int p = n - 1;
  MatrixXc out = MatrixXc::Zero(n, n);
  for (int i = 0; i <= p; ++i) {
    out(i, i) = double(p - i) * a(0, 0) + double(i) * a(1, 1);
    if (i < p) out(i + 1, i) = a(1, 0) * std::sqrt(double(p - i) * (i + 1));
    if (i > 0) out(i - 1, i) = a(0, 1) * std::sqrt(double(i) * (p - i + 1));
  }
  return out;
}

MatrixXc rep_matrix(const IrrepLabel& pi, const GroupElement& g) {
  require(pi.group == g.group, "rep_matrix: group mismatch");
  if (pi.group == Group::U1) {
    MatrixXc out(1, 1);
    out(0, 0) = std::exp(I * (double(pi.label) * g.angle));
    return out;
  }
  return rep_matrix(pi.label, su2_matrix(g));
}

MatrixXc lie_rep(const IrrepLabel& pi, const Vector3d& x) {
  if (pi.group == Group::U1) {
    MatrixXc out(1, 1);
    out(0, 0) = I * (double(pi.label) * x[0]);
    return out;
  }
  return lie_rep(pi.label, lie_matrix(x));
}

cplx character(int n, const Matrix2cd& m) {
  const cplx tr = m.trace();
  cplx prev = 0.0, cur = 1.0;  // chi_0, chi_1
  for (int k = 1; k < n; ++k) {
    const cplx next = tr * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx character(const IrrepLabel& pi, const GroupElement& g) {
  require(pi.group == g.group, "character: group mismatch");
  if (pi.group == Group::U1) return std::exp(I * (double(pi.label) * g.angle));
  return character(pi.label, su2_matrix(g));
}

cplx character_sinh(int n, cplx s) {
  if (std::abs(s) < 1e-4) {
    // sinh(ns)/sinh(s) = n (1 + (n^2-1) s^2 / 6 + (n^2-1)(3n^2-7) s^4 / 360 + ...)
    const double n2 = double(n) * n;
    const cplx s2 = s * s;
    return double(n) * (1.0 + (n2 - 1) * s2 / 6.0 + (n2 - 1) * (3 * n2 - 7) * s2 * s2 / 360.0);
  }
  return std::sinh(double(n) * s) / std::sinh(s);
}

namespace {

bool is_half_integer(double x) { return std::abs(2 * x - std::round(2 * x)) < 1e-12; }

int twice(double x) { return static_cast<int>(std::lround(2 * x)); }

}  // namespace

double clebsch_gordan(double j1, double j2, double j3, double m1, double m2, double m3) {
  for (double v : {j1, j2, j3, m1, m2, m3}) require(is_half_integer(v), "clebsch_gordan: arguments must be half-integers");
  const int J1 = twice(j1), J2 = twice(j2), J3 = twice(j3), M1 = twice(m1), M2 = twice(m2), M3 = twice(m3);
  require(J1 >= 0 && J2 >= 0 && J3 >= 0, "clebsch_gordan: negative spin");
  require(std::abs(M1) <= J1 && std::abs(M2) <= J2 && std::abs(M3) <= J3, "clebsch_gordan: |m| exceeds j");
  require((J1 + M1) % 2 == 0 && (J2 + M2) % 2 == 0 && (J3 + M3) % 2 == 0, "clebsch_gordan: j and m parity mismatch");
  if (M3 != M1 + M2) return 0.0;
  if (J3 > J1 + J2 || J3 < std::abs(J1 - J2) || (J1 + J2 + J3) % 2 != 0) return 0.0;
  // integer quantities (all even differences halved)
  const int a = (J1 + J2 - J3) / 2, b = (J1 - J2 + J3) / 2, c = (-J1 + J2 + J3) / 2, s = (J1 + J2 + J3) / 2 + 1;
  const double pre = 0.5 * (std::log(J3 + 1.0) + lfact(a) + lfact(b) + lfact(c) - lfact(s)) +
                     0.5 * (lfact((J3 + M3) / 2) + lfact((J3 - M3) / 2) + lfact((J1 - M1) / 2) + lfact((J1 + M1) / 2) +
                            lfact((J2 - M2) / 2) + lfact((J2 + M2) / 2));
  const int k1 = (J1 - M1) / 2, k2 = (J2 + M2) / 2, k3 = (J3 - J2 + M1) / 2, k4 = (J3 - J1 - M2) / 2;
  double sum = 0.0;
  for (int k = std::max({0, -k3, -k4}); k <= std::min({a, k1, k2}); ++k) {
    const double t = pre - (lfact(k) + lfact(a - k) + lfact(k1 - k) + lfact(k2 - k) + lfact(k3 + k) + lfact(k4 + k));
    sum += (k % 2 ? -1.0 : 1.0) * std::exp(t);
  }
  return sum;
}

int degree_for_band(Group g, int band) {
  if (g == Group::U1) return std::max(1, (band + 1) / 2);
  return std::max(1, (band + 2) / 2);
}

Quadrature group_quadrature(Group g, int degree) {
  require(degree >= 1, "group_quadrature: degree must be >= 1");
  if (degree > max_quadrature_degree)
    throw Error("group_quadrature: degree " + std::to_string(degree) + " exceeds configured maximum " +
                std::to_string(max_quadrature_degree));
  Quadrature qd;
  qd.group = g;
  qd.exactness_degree = degree;
  if (g == Group::U1) {
    const int n = 2 * degree + 1;
    for (int k = 0; k < n; ++k) {
      qd.nodes.push_back(u1_element(2 * pi * k / n));
      qd.weights.push_back(1.0 / n);
    }
    return qd;
  }
  // products of labels <= degree contain spins up to J = degree - 1
  const int jmax = degree - 1;
  const int na = jmax + 1, ng = 2 * jmax + 1, nb = jmax / 2 + 1;
  const GaussRule gl = gauss_legendre(nb);
  for (int ib = 0; ib < nb; ++ib) {
    const double beta = std::acos(gl.nodes[ib]);
    for (int ia = 0; ia < na; ++ia)
      for (int ig = 0; ig < ng; ++ig) {
        qd.nodes.push_back(from_euler_zyz(2 * pi * ia / na, beta, 4 * pi * ig / ng));
        qd.weights.push_back(0.5 * gl.weights[ib] / (double(na) * ng));
      }
  }
  return qd;
}

double verma_norm_sq(double lambda, int k) {
  require(k >= 0, "verma_norm_sq: k must be non-negative");
  double p = 1.0;
  for (int l = 1; l <= k; ++l) p *= l * (lambda + 1.0 - l);
  return p;
}

}  // namespace qg
