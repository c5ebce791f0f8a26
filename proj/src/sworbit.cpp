#include "qg/sworbit.hpp"

#include <algorithm>
#include <cmath>

#include "qg/io.hpp"

namespace qg {

namespace {

double legendre(int l, double x) {
  double p0 = 1.0, p1 = x;
  if (l == 0) return p0;
  for (int k = 1; k < l; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

Eigen::VectorXd unit_weights(const OrbitSpec& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.rule.weight.data(), s.rule.size());
}

void check_field(const OrbitField& f, const OrbitSpec& s) {
  require(f.n == s.n && std::size_t(f.values.size()) == s.size(), "orbit field does not match the orbit grid");
}

bool integral_spin(double j) { return std::abs(j - std::round(j)) < 1e-12; }

}  // namespace

GroupElement orbit_section(double beta, double alpha) { return from_euler_zyz(alpha, beta, 0.0); }

Vector3d orbit_direction(double beta, double alpha) {
  return {std::sin(beta) * std::cos(alpha), std::sin(beta) * std::sin(alpha), std::cos(beta)};
}

std::pair<double, double> orbit_angles(const Vector3d& direction) {
  const Vector3d u = direction.normalized();
  return {std::acos(std::clamp(u.z(), -1.0, 1.0)), std::atan2(u.y(), u.x())};
}

VectorXc orbit_harmonics(int l_max, double beta, double alpha) {
  const Matrix2cd m = su2_matrix(orbit_section(beta, alpha));
  VectorXc y((l_max + 1) * (l_max + 1));
  for (int l = 0; l <= l_max; ++l) {
    const VectorXc col = rep_column(2 * l + 1, m, l);
    for (int i = 0; i <= 2 * l; ++i) y[l * l + i] = std::sqrt(2.0 * l + 1) * std::conj(col[i]);
  }
  return y;
}

OrbitSpec orbit_spec(int n, int exactness) {
  require(n >= 1, "orbit_spec: dimension must be >= 1");
  const int two_j = n - 1;
  if (exactness < 0) exactness = 2 * two_j + 2;
  require(exactness >= 2 * two_j, "orbit_spec: sphere exactness must be at least 4j");
  OrbitSpec s;
  s.n = n;
  s.rule = sphere_rule(exactness);
  const std::size_t nodes = s.rule.size();
  s.weight.resize(nodes);
  s.coherent.resize(nodes);
  s.harmonics.resize(nodes, n * n);
  for (std::size_t k = 0; k < nodes; ++k) {
    s.weight[k] = n * s.rule.weight[k];
    s.coherent[k] = orbit_coherent(n, s.rule.beta[k], s.rule.alpha[k]);
    s.harmonics.row(k) = orbit_harmonics(two_j, s.rule.beta[k], s.rule.alpha[k]).transpose();
  }
  return s;
}

VectorXc orbit_coherent(int n, double beta, double alpha) {
  return rep_column(n, su2_matrix(orbit_section(beta, alpha)), 0);
}

Vector3d momentum_map(const VectorXc& v) {
  const int n = static_cast<int>(v.size());
  Vector3d j;
  for (int k = 0; k < 3; ++k) j[k] = std::real(I * v.dot(lie_rep(n, tau_matrix(k)) * v));
  return j;
}

Vector3d coadjoint(const GroupElement& g, const Vector3d& theta) { return adjoint(g, theta); }

OrbitField orbit_field(const OrbitSpec& s, const std::function<cplx(double, double)>& f) {
  OrbitField out{s.n, VectorXc(s.size())};
  for (std::size_t k = 0; k < s.size(); ++k) out.values[k] = f(s.rule.beta[k], s.rule.alpha[k]);
  return out;
}

double orbit_integral_abs2(const OrbitField& f, const OrbitSpec& s) {
  check_field(f, s);
  double acc = 0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += s.weight[k] * std::norm(f.values[k]);
  return acc;
}

cplx orbit_integral(const OrbitField& f, const OrbitSpec& s) {
  check_field(f, s);
  cplx acc = 0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += s.weight[k] * f.values[k];
  return acc;
}

VectorXc harmonic_coefficients(const OrbitField& f, const OrbitSpec& s, int l_max) {
  check_field(f, s);
  if (l_max < 0) l_max = s.n - 1;
  const VectorXc wf = unit_weights(s).cast<cplx>().cwiseProduct(f.values);
  if (l_max <= s.n - 1) return s.harmonics.leftCols((l_max + 1) * (l_max + 1)).adjoint() * wf;
  VectorXc c = VectorXc::Zero((l_max + 1) * (l_max + 1));
  for (std::size_t k = 0; k < s.size(); ++k)
    c += orbit_harmonics(l_max, s.rule.beta[k], s.rule.alpha[k]).conjugate() * wf[k];
  return c;
}

double max_abs_diff(const OrbitField& a, const OrbitField& b) {
  require(a.n == b.n && a.values.size() == b.values.size(), "max_abs_diff: field mismatch");
  return a.values.size() ? (a.values - b.values).cwiseAbs().maxCoeff() : 0.0;
}

OrbitField lower_symbol(const MatrixXc& a, const OrbitSpec& s) {
  require(a.rows() == s.n && a.cols() == s.n, "lower_symbol: matrix size does not match the orbit");
  OrbitField out{s.n, VectorXc(s.size())};
  for (std::size_t k = 0; k < s.size(); ++k) out.values[k] = s.coherent[k].dot(a * s.coherent[k]);
  return out;
}

cplx lower_symbol_at(const MatrixXc& a, double beta, double alpha) {
  const VectorXc v = orbit_coherent(static_cast<int>(a.rows()), beta, alpha);
  return v.dot(a * v);
}

std::vector<double> sw_kernel_spectrum(const OrbitSpec& s) {
  std::vector<double> k(s.n, 0.0);
  for (std::size_t q = 0; q < s.size(); ++q) {
    const double overlap = std::norm(s.coherent[q][0]);
    const double x = std::cos(s.rule.beta[q]);
    for (int l = 0; l < s.n; ++l) k[l] += s.weight[q] * overlap * legendre(l, x);
  }
  return k;
}

double kernel_eigenvalue(double j, int l) {
  const int two_j = static_cast<int>(std::lround(2 * j));
  if (l > two_j) return 0.0;
  const GaussRule gl = gauss_legendre((two_j + l) / 2 + 1);
  double acc = 0;
  for (int q = 0; q < gl.nodes.size(); ++q) {
    const double x = gl.nodes[q];
    acc += gl.weights[q] * std::pow(0.5 * (1 + x), two_j) * legendre(l, x);
  }
  return 0.5 * (two_j + 1) * acc;
}

double kernel_eigenvalue_cg(double j, int l) {
  const double c = clebsch_gordan(j, j, l, j, -j, 0);
  return (2 * j + 1) / (2.0 * l + 1) * c * c;
}

OrbitField kernel_power(const OrbitField& f, const OrbitSpec& s, const std::vector<double>& k, double power) {
  VectorXc c = harmonic_coefficients(f, s);
  for (int l = 0; l < s.n; ++l) c.segment(l * l, 2 * l + 1) *= std::pow(k[l], power);
  return {s.n, s.harmonics * c};
}

OrbitField upper_symbol(const MatrixXc& a, const OrbitSpec& s, const std::vector<double>& k) {
  return kernel_power(lower_symbol(a, s), s, k, -1.0);
}

SWOperatorField sw_operator(const OrbitSpec& s) {
  SWOperatorField d;
  d.n = s.n;
  d.k = sw_kernel_spectrum(s);
  for (double kl : d.k) require(kl > 1e-13, "sw_operator: kernel spectrum too small to invert");
  const int nh = s.n * s.n;
  d.coeff.assign(nh, MatrixXc::Zero(s.n, s.n));
  for (std::size_t q = 0; q < s.size(); ++q) {
    const MatrixXc p = s.coherent[q] * s.coherent[q].adjoint();
    for (int h = 0; h < nh; ++h) d.coeff[h] += (s.rule.weight[q] * std::conj(s.harmonics(q, h))) * p;
  }
  for (int l = 0; l < s.n; ++l)
    for (int h = l * l; h < (l + 1) * (l + 1); ++h) d.coeff[h] /= std::sqrt(d.k[l]);
  d.delta.assign(s.size(), MatrixXc::Zero(s.n, s.n));
  for (std::size_t q = 0; q < s.size(); ++q)
    for (int h = 0; h < nh; ++h) d.delta[q] += s.harmonics(q, h) * d.coeff[h];
  return d;
}

MatrixXc sw_operator_at(const SWOperatorField& d, double beta, double alpha) {
  const VectorXc y = orbit_harmonics(d.n - 1, beta, alpha);
  MatrixXc out = MatrixXc::Zero(d.n, d.n);
  for (int h = 0; h < y.size(); ++h) out += y[h] * d.coeff[h];
  return out;
}

OrbitField sw_symbol(const MatrixXc& a, const SWOperatorField& d) {
  require(a.rows() == d.n && a.cols() == d.n, "sw_symbol: matrix size does not match the orbit");
  OrbitField out{d.n, VectorXc(d.delta.size())};
  for (std::size_t q = 0; q < d.delta.size(); ++q) out.values[q] = (d.delta[q] * a).trace();
  return out;
}

cplx sw_symbol_at(const MatrixXc& a, const SWOperatorField& d, double beta, double alpha) {
  return (sw_operator_at(d, beta, alpha) * a).trace();
}

MatrixXc sw_quantize(const OrbitField& w, const OrbitSpec& s, const SWOperatorField& d, double* discarded) {
  const VectorXc c = harmonic_coefficients(w, s);
  const VectorXc proj = s.harmonics * c;
  if (discarded) *discarded = std::sqrt(orbit_integral_abs2({s.n, w.values - proj}, s));
  MatrixXc a = MatrixXc::Zero(s.n, s.n);
  for (std::size_t q = 0; q < s.size(); ++q) a += (s.weight[q] * proj[q]) * d.delta[q];
  return a;
}

OrbitField sw_twisted_product(const OrbitField& a, const OrbitField& b, const OrbitSpec& s, const SWOperatorField& d) {
  // tr(Delta(t) Delta(t') Delta(t'')) factorizes, so the theta' and theta'' integrals are done first.
  return sw_symbol(sw_quantize(a, s, d) * sw_quantize(b, s, d), d);
}

OrbitField swf_kernel(const GroupElement& g, const SWOperatorField& d) {
  return sw_symbol(rep_matrix(d.n, su2_matrix(g)), d);
}

cplx swf_kernel_at(const GroupElement& g, const SWOperatorField& d, double beta, double alpha) {
  return sw_symbol_at(rep_matrix(d.n, su2_matrix(g)), d, beta, alpha);
}

std::vector<OrbitCalculus> orbit_calculi(int band) {
  require(band >= 1, "orbit_calculi: band must be >= 1");
  std::vector<OrbitCalculus> out(band);
  parallel_for(band, [&](std::size_t i) {
    out[i].spec = orbit_spec(static_cast<int>(i) + 1);
    out[i].delta = sw_operator(out[i].spec);
  });
  return out;
}

std::vector<OrbitField> swf_transform(const std::function<cplx(const GroupElement&)>& psi, int band,
                                      const std::vector<OrbitCalculus>& c) {
  require(band >= 1 && int(c.size()) >= band, "swf_transform: orbit data does not cover the band");
  // Two extra irreps are computed to detect content beyond the band.
  const int probe = band + 2;
  const Quadrature q = group_quadrature(Group::SU2, degree_for_band(Group::SU2, band_product(Group::SU2, band, probe)));
  std::vector<MatrixXc> hat(probe);
  for (int n = 1; n <= probe; ++n) hat[n - 1] = MatrixXc::Zero(n, n);
  double norm2 = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const cplx v = psi(q.nodes[k]);
    norm2 += q.weights[k] * std::norm(v);
    const Matrix2cd m = su2_matrix(q.nodes[k]);
    for (int n = 1; n <= probe; ++n) hat[n - 1] += (q.weights[k] * v) * rep_matrix(n, m);
  }
  double over = 0;
  for (int n = band + 1; n <= probe; ++n) over += n * hat[n - 1].squaredNorm();
  require(over <= 1e-20 * std::max(norm2, 1e-300), "swf_transform: input carries irreps beyond the band");
  std::vector<OrbitField> out(band);
  parallel_for(band, [&](std::size_t i) { out[i] = sw_symbol(hat[i], c[i].delta); });
  return out;
}

cplx swf_inverse_at(const std::vector<OrbitField>& f, const std::vector<OrbitCalculus>& c, const GroupElement& g) {
  require(c.size() >= f.size(), "swf_inverse_at: orbit data does not cover the transform");
  // int conj(E(g)) F dmu = tr(pi(g)^* Q(F)) since Delta is Hermitian.
  const Matrix2cd m = su2_matrix(g);
  cplx acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    acc += double(n) * (rep_matrix(n, m).adjoint() * sw_quantize(f[i], c[i].spec, c[i].delta)).trace();
  }
  return acc;
}

double swf_norm2(const std::vector<OrbitField>& f, const std::vector<OrbitCalculus>& c) {
  double acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += double(i + 1) * orbit_integral_abs2(f[i], c[i].spec);
  return acc;
}

OrbitField momentum_scaled_swf(const std::vector<OrbitField>& f, int n, int k) {
  require(k >= 1, "momentum_scaled_swf: eps^{-1} must be a positive integer");
  require(n >= 1, "momentum_scaled_swf: dimension must be >= 1");
  const double j = 0.5 * (n - 1);
  require(k == 1 || integral_spin(k * j), "momentum_scaled_swf: scaled weight is not on the integral sub-lattice");
  const int target = k * (n - 1) + 1;
  require(target <= int(f.size()), "momentum_scaled_swf: scaled irrep exceeds the transform band");
  return f[target - 1];
}

double cartan_power_residual(double j, int k, const GroupElement& g) {
  require(k >= 1, "cartan_power_residual: k must be a positive integer");
  const int two_j = static_cast<int>(std::lround(2 * j));
  const Matrix2cd m = su2_matrix(g);
  const cplx base = rep_column(two_j + 1, m, 0)[0];
  const cplx big = rep_column(k * two_j + 1, m, 0)[0];
  // integer powers have no branch ambiguity
  cplx pow = 1.0;
  for (int i = 0; i < k; ++i) pow *= base;
  return std::abs(big - pow);
}

MatrixXc berezin_quantize(const OrbitField& f, const OrbitSpec& s) {
  check_field(f, s);
  MatrixXc a = MatrixXc::Zero(s.n, s.n);
  for (std::size_t q = 0; q < s.size(); ++q) a += (s.weight[q] * f.values[q]) * (s.coherent[q] * s.coherent[q].adjoint());
  return a;
}

KRateFit k_rate_fit(const std::function<cplx(double, double)>& f, int f_band, const std::vector<double>& j_list) {
  require(j_list.size() >= 2, "k_rate_fit: need at least two spins");
  const SphereRule rule = sphere_rule(2 * f_band);
  const int nh = (f_band + 1) * (f_band + 1);
  MatrixXc y(rule.size(), nh);
  VectorXc c = VectorXc::Zero(nh);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    y.row(q) = orbit_harmonics(f_band, rule.beta[q], rule.alpha[q]).transpose();
    c += rule.weight[q] * f(rule.beta[q], rule.alpha[q]) * y.row(q).adjoint();
  }
  KRateFit out;
  std::vector<double> lx, ly;
  for (double j : j_list) {
    VectorXc d = c;
    for (int l = 0; l <= f_band; ++l) d.segment(l * l, 2 * l + 1) *= kernel_eigenvalue(j, l) - 1.0;
    const double r = (y * d).cwiseAbs().maxCoeff();
    out.j.push_back(j);
    out.residual.push_back(r);
    lx.push_back(std::log(1.0 / j));
    ly.push_back(std::log(r));
  }
  out.slope = fit_slope(lx, ly);
  return out;
}

std::string orbit_field_csv(const OrbitField& f, const OrbitSpec& s) {
  check_field(f, s);
  CsvTable t;
  t.header = {"beta", "alpha", "re", "im"};
  t.comments = {"orbit n=" + std::to_string(s.n) + " spin=" + format17(s.spin()) +
                " sphere_exactness=" + std::to_string(s.rule.exactness)};
  for (std::size_t q = 0; q < s.size(); ++q)
    t.rows.push_back({format17(s.rule.beta[q]), format17(s.rule.alpha[q]), format17(f.values[q].real()),
                      format17(f.values[q].imag())});
  return to_csv(t);
}

std::string harmonics_json(const OrbitField& f, const OrbitSpec& s) {
  const VectorXc c = harmonic_coefficients(f, s);
  double discarded = std::sqrt(orbit_integral_abs2({s.n, f.values - s.harmonics * c}, s));
  json j;
  j["n"] = s.n;
  j["spin"] = s.spin();
  j["normalization"] = "Y_lm orthonormal for the unit-mass sphere measure";
  j["discarded_l2"] = discarded;
  json rows = json::array();
  for (int l = 0; l < s.n; ++l)
    for (int m = l; m >= -l; --m) {
      const cplx v = c[harmonic_index(l, m)];
      rows.push_back(json::array({l, m, v.real(), v.imag()}));
    }
  j["coefficients"] = rows;
  return dump17(j);
}

}  // namespace qg
