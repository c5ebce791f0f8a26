#include "qg/localcalc.hpp"

#include <cmath>

#include "qg/numerics.hpp"

namespace qg {

namespace {

using Key = LocalSymbol::Key;
using Power = std::array<int, 3>;

Key make_key(const std::array<int, 3>& site, const Power& power) {
  return {site[0], site[1], site[2], power[0], power[1], power[2]};
}
Power key_power(const Key& k) { return {k[3], k[4], k[5]}; }
int degree(const Power& p) { return p[0] + p[1] + p[2]; }
bool at_origin(const Key& k) { return k[0] == 0 && k[1] == 0 && k[2] == 0; }

double factorial(int n) { return std::tgamma(n + 1.0); }

void accumulate(std::map<Key, VectorXc>& m, const Key& k, const VectorXc& v) {
  auto it = m.find(k);
  if (it == m.end())
    m.emplace(k, v);
  else
    it->second += v;
}

void check_compatible(const LocalSymbol& a, const LocalSymbol& b) {
  require(a.group == b.group, "local symbols on different groups");
}

bool has_lattice(const LocalSymbol& s) {
  for (const auto& [k, v] : s.terms)
    if (!at_origin(k)) return true;
  return false;
}

double common_spacing(const LocalSymbol& a, const LocalSymbol& b) {
  if (has_lattice(a) && has_lattice(b))
    require(std::abs(a.spacing - b.spacing) <= 1e-15 * a.spacing, "local symbols on different lattices");
  return has_lattice(a) || !has_lattice(b) ? a.spacing : b.spacing;
}

VectorXc random_function(Group g, int g_band, const Quadrature& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  VectorXc v = VectorXc::Zero(grid.size());
  for (const auto& p : irreps_upto(g, g_band)) {
    const int d = dim(p);
    MatrixXc a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = cplx(n01(rng), n01(rng)) / double(d);
    for (std::size_t l = 0; l < grid.size(); ++l) v[l] += double(d) * (rep_matrix(p, grid.nodes[l]).adjoint() * a).trace();
  }
  return v;
}

// Indices of V_{<=small} inside the Peter-Weyl ordering of V_{<=big}.
std::vector<int> embed(Group g, int small, int big) {
  std::vector<int> pos;
  const auto off = pw_offsets(g, big);
  const auto irr = irreps_upto(g, big);
  for (std::size_t i = 0; i < irr.size(); ++i) {
    const int lab = irr[i].label;
    if (g == Group::U1 ? std::abs(lab) > small : lab > small) continue;
    for (int a = 0; a < dim(irr[i]) * dim(irr[i]); ++a) pos.push_back(off[i] + a);
  }
  return pos;
}

// sqrt(d) conj(pi(g)_ab): the basis functions at g.
VectorXc basis_values(Group grp, int band, const GroupElement& g) {
  VectorXc r(pw_size(grp, band));
  int o = 0;
  for (const auto& p : irreps_upto(grp, band)) {
    const MatrixXc m = rep_matrix(p, g);
    const double sd = std::sqrt(double(dim(p)));
    for (int a = 0; a < m.rows(); ++a)
      for (int b = 0; b < m.cols(); ++b) r[o++] = sd * std::conj(m(a, b));
  }
  return r;
}

// U(1): closed form on the Fourier basis. phi_k = exp(-ik g); the term exp(-i theta X) theta^p c(g)
// with c = sum_m c_m exp(img) maps phi_k to c_m (-eps kappa)^p exp(i eps X kappa) phi_{k-m},
// kappa = k (KN) or the midpoint k - m/2 (Weyl).
TruncatedOperator quantize_u1(const LocalSymbol& s, LocalVariant variant, int op_band) {
  const int gb = s.g_band, full = op_band + gb;
  const double eps = s.eps();
  MatrixXc a = MatrixXc::Zero(2 * full + 1, 2 * op_band + 1);
  for (const auto& [key, c] : s.terms) {
    const double x = s.spacing * key[0];
    const int p = key[3];
    std::vector<cplx> chat(2 * gb + 1, 0.0);
    for (int m = -gb; m <= gb; ++m)
      for (std::size_t l = 0; l < s.grid.size(); ++l)
        chat[m + gb] += s.grid.weights[l] * c[l] * std::exp(-I * double(m) * s.grid.nodes[l].angle);
    for (int k = -op_band; k <= op_band; ++k)
      for (int m = -gb; m <= gb; ++m) {
        const double kappa = variant == LocalVariant::KN ? k : k - 0.5 * m;
        a(k - m + full, k + op_band) += chat[m + gb] * std::pow(-eps * kappa, p) * std::exp(I * eps * x * kappa);
      }
  }
  TruncatedOperator op;
  op.group = Group::U1;
  op.band = op_band;
  op.matrix = a.middleRows(full - op_band, 2 * op_band + 1);
  op.truncation_error = std::sqrt(a.topRows(full - op_band).squaredNorm() + a.bottomRows(full - op_band).squaredNorm());
  return op;
}

// Matrix-valued polynomial in X, keyed by the exponent.
using MatPoly = std::map<Power, MatrixXc>;

// SU(2) polynomial terms at the origin: (i d_X)^alpha [ j(eps X)^2 c(g_X) Psi(exp(-eps X) g) ] at X = 0, with
// g_X = exp(-eps X/2) g for Weyl and g for KN. Each factor is expanded in X up to the needed order.
TruncatedOperator quantize_su2_polynomial(const LocalSymbol& s, LocalVariant variant, int op_band) {
  const double eps = s.eps();
  const int n = pw_size(Group::SU2, op_band);
  int top = 0;
  for (const auto& [key, c] : s.terms) top = std::max(top, degree(key_power(key)));

  std::array<MatrixXc, 3> r;
  for (int a = 0; a < 3; ++a) {
    Vector3d e = Vector3d::Zero();
    e[a] = 1.0;
    r[a] = I * kn_quantize(derivative_symbol(Group::SU2, op_band, e, 1.0), op_band).matrix;
  }
  // exp(-eps X.R) = sum_k (-eps)^k (X.R)^k / k!
  MatPoly u;
  {
    MatPoly prev{{Power{0, 0, 0}, MatrixXc::Identity(n, n)}};
    u = prev;
    for (int k = 1; k <= top; ++k) {
      MatPoly next;
      for (const auto& [pw, m] : prev)
        for (int a = 0; a < 3; ++a) {
          Power q = pw;
          ++q[a];
          MatrixXc t = (-eps / k) * r[a] * m;
          auto it = next.find(q);
          if (it == next.end())
            next.emplace(q, std::move(t));
          else
            it->second += t;
        }
      for (const auto& [pw, m] : next) u[pw] = m;
      prev = std::move(next);
    }
  }
  // j(eps X)^2 = sum_m 2 (-1)^m eps^{2m} |X|^{2m} / (2m+2)!
  std::map<Power, double> jac;
  for (int m = 0; 2 * m <= top; ++m) {
    const double cm = 2.0 * ((m % 2) ? -1.0 : 1.0) * std::pow(eps, 2 * m) / factorial(2 * m + 2);
    for (int i = 0; i <= m; ++i)
      for (int j = 0; i + j <= m; ++j) {
        const int l = m - i - j;
        jac[Power{2 * i, 2 * j, 2 * l}] += cm * factorial(m) / (factorial(i) * factorial(j) * factorial(l));
      }
  }

  TruncatedOperator op;
  op.group = Group::SU2;
  op.band = op_band;
  op.matrix = MatrixXc::Zero(n, n);
  for (const auto& [key, c] : s.terms) {
    const Power alpha = key_power(key);
    // c(exp(-eps X/2) g) = (exp(-(eps/2) X.R) c)(g), only exponents <= alpha are needed
    std::map<Power, VectorXc> shifted{{Power{0, 0, 0}, c}};
    if (variant == LocalVariant::Weyl) {
      std::map<Power, VectorXc> prev = shifted;
      for (int k = 1; k <= degree(alpha); ++k) {
        std::map<Power, VectorXc> next;
        for (const auto& [pw, v] : prev)
          for (int a = 0; a < 3; ++a) {
            Power q = pw;
            if (++q[a] > alpha[a]) continue;
            Vector3d e = Vector3d::Zero();
            e[a] = 1.0;
            VectorXc t = (-0.5 * eps / k) * right_derivative(Group::SU2, s.g_band, v, e);
            auto it = next.find(q);
            if (it == next.end())
              next.emplace(q, std::move(t));
            else
              it->second += t;
          }
        for (const auto& [pw, v] : next) shifted[pw] = v;
        prev = std::move(next);
      }
    }
    MatrixXc coef = MatrixXc::Zero(n, n);
    for (const auto& [p2, v] : shifted) {
      const TruncatedOperator mult = multiplication_operator(Group::SU2, s.g_band, v, op_band);
      op.truncation_error += mult.truncation_error;
      MatrixXc acc = MatrixXc::Zero(n, n);
      for (const auto& [p1, jw] : jac) {
        Power p3{alpha[0] - p1[0] - p2[0], alpha[1] - p1[1] - p2[1], alpha[2] - p1[2] - p2[2]};
        if (p3[0] < 0 || p3[1] < 0 || p3[2] < 0) continue;
        auto it = u.find(p3);
        if (it != u.end()) acc += jw * it->second;
      }
      coef += mult.matrix * acc;
    }
    const double afact = factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]);
    op.matrix += std::pow(I, degree(alpha)) * afact * coef;
  }
  return op;
}

}  // namespace

int lie_dim(Group g) { return g == Group::U1 ? 1 : 3; }

double lie_volume(Group g) { return g == Group::U1 ? 2 * pi : 16 * pi * pi; }

double exp_jacobian(Group g, const Vector3d& x) {
  if (g == Group::U1) return 1.0;
  const double h = 0.5 * x.norm();
  if (h < 1e-8) return 1.0 - h * h / 3.0;
  const double s = std::sin(h) / h;
  return s * s;
}

double injectivity_radius(Group g) { return g == Group::U1 ? pi : 2 * pi; }

LocalSymbol local_zero(Group g, int g_band, double spacing, int k) {
  require(spacing > 0 && k >= 1, "local_zero: spacing must be positive and k >= 1");
  LocalSymbol s;
  s.group = g;
  s.spacing = spacing;
  s.k = k;
  s.g_band = g_band;
  s.grid = symbol_grid(g, g_band);
  return s;
}

Vector3d site_point(const LocalSymbol& s, const Key& key) { return s.spacing * Vector3d(key[0], key[1], key[2]); }

void add_term(LocalSymbol& s, const std::array<int, 3>& site, const Power& power, const VectorXc& c) {
  require(c.size() == static_cast<Eigen::Index>(s.grid.size()), "add_term: coefficient does not match the grid");
  require(power[0] >= 0 && power[1] >= 0 && power[2] >= 0, "add_term: negative power");
  if (s.group == Group::U1)
    require(site[1] == 0 && site[2] == 0 && power[1] == 0 && power[2] == 0, "add_term: U1 symbols are one-dimensional");
  accumulate(s.terms, make_key(site, power), c);
}

void add_lattice_sample(LocalSymbol& s, const std::array<int, 3>& site, const VectorXc& check) {
  const double w = std::pow(s.spacing, lie_dim(s.group)) / lie_volume(s.group);
  add_term(s, site, Power{0, 0, 0}, w * check);
}

VectorXc sample_function(const LocalSymbol& s, const ScalarFn& f) {
  VectorXc v(s.grid.size());
  for (std::size_t l = 0; l < s.grid.size(); ++l) v[l] = f(s.grid.nodes[l]);
  return v;
}

LocalSymbol local_function(Group g, int g_band, const ScalarFn& f) {
  LocalSymbol s = local_zero(g, g_band);
  add_term(s, {0, 0, 0}, {0, 0, 0}, sample_function(s, f));
  return s;
}

LocalSymbol local_momentum(Group g, const Vector3d& x) {
  LocalSymbol s = local_zero(g, g == Group::U1 ? 0 : 1);
  const VectorXc one = VectorXc::Ones(s.grid.size());
  for (int a = 0; a < lie_dim(g); ++a) {
    Power p{0, 0, 0};
    p[a] = 1;
    if (x[a] != 0.0) add_term(s, {0, 0, 0}, p, x[a] * one);
  }
  return s;
}

LocalSymbol random_bump(Group g, int g_band, double spacing, double radius, double width, std::mt19937_64& rng) {
  LocalSymbol s = local_zero(g, g_band, spacing);
  std::normal_distribution<double> n01;
  const int n = lie_dim(g), m = static_cast<int>(std::floor(radius / spacing));
  // two smooth envelopes with random centres, each carrying a random function of g
  struct Lobe {
    Vector3d centre;
    VectorXc f;
  };
  std::vector<Lobe> lobes;
  for (int q = 0; q < 2; ++q) {
    Vector3d c = Vector3d::Zero();
    for (int a = 0; a < n; ++a) c[a] = 0.25 * radius * n01(rng) / std::sqrt(double(n));
    lobes.push_back({c, random_function(g, g_band, s.grid, rng)});
  }
  const int m1 = n > 1 ? m : 0;
  for (int i = -m; i <= m; ++i)
    for (int j = -m1; j <= m1; ++j)
      for (int l = -m1; l <= m1; ++l) {
        const Vector3d x = spacing * Vector3d(i, j, l);
        if (x.norm() > radius) continue;
        VectorXc v = VectorXc::Zero(s.grid.size());
        for (const auto& lobe : lobes) v += std::exp(-(x - lobe.centre).squaredNorm() / (2 * width * width)) * lobe.f;
        add_lattice_sample(s, {i, j, l}, v);
      }
  return local_axpy(0.5, local_conjugate(s), local_axpy(0.5, s, local_zero(g, g_band, spacing)));
}

LocalSymbol random_polynomial(Group g, int deg, int g_band, std::mt19937_64& rng) {
  LocalSymbol s = local_zero(g, g_band);
  const int n = lie_dim(g);
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; b <= (n > 1 ? deg - a : 0); ++b)
      for (int c = 0; c <= (n > 1 ? deg - a - b : 0); ++c) {
        const VectorXc f = random_function(g, g_band, s.grid, rng);
        add_term(s, {0, 0, 0}, {a, b, c}, f.real().cast<cplx>() / factorial(a + b + c));
      }
  return s;
}

cplx local_evaluate(const LocalSymbol& s, const Vector3d& theta, const GroupElement& g) {
  const Eigen::VectorXd row = grid_interpolation_row(s.group, s.grid, s.g_band, g);
  cplx sum = 0;
  for (const auto& [key, c] : s.terms) {
    const Vector3d x = site_point(s, key);
    cplx mono = std::exp(-I * theta.dot(x));
    for (int a = 0; a < 3; ++a) mono *= std::pow(theta[a], key[3 + a]);
    sum += mono * row.cast<cplx>().dot(c);
  }
  return sum;
}

LocalSymbol local_resample(const LocalSymbol& s, int g_band) {
  if (g_band == s.g_band) return s;
  require(g_band > s.g_band, "local_resample: can only raise the g-band");
  LocalSymbol out = s;
  out.g_band = g_band;
  out.grid = symbol_grid(s.group, g_band);
  Eigen::MatrixXd m(out.grid.size(), s.grid.size());
  for (std::size_t l = 0; l < out.grid.size(); ++l)
    m.row(l) = grid_interpolation_row(s.group, s.grid, s.g_band, out.grid.nodes[l]).transpose();
  for (auto& [key, c] : out.terms) c = m.cast<cplx>() * s.terms.at(key);
  return out;
}

LocalSymbol local_axpy(cplx a, const LocalSymbol& x, const LocalSymbol& y) {
  check_compatible(x, y);
  const int gb = std::max(x.g_band, y.g_band);
  LocalSymbol xs = local_resample(x, gb), out = local_resample(y, gb);
  out.spacing = common_spacing(y, x);
  for (const auto& [key, c] : xs.terms) accumulate(out.terms, key, a * c);
  return out;
}

LocalSymbol local_product(const LocalSymbol& a, const LocalSymbol& b) {
  check_compatible(a, b);
  const int gb = band_product(a.group, a.g_band, b.g_band);
  const LocalSymbol ar = local_resample(a, gb), br = local_resample(b, gb);
  LocalSymbol out = local_zero(a.group, gb, common_spacing(a, b), a.k);
  for (const auto& [ka, ca] : ar.terms)
    for (const auto& [kb, cb] : br.terms) {
      Key k;
      for (int i = 0; i < 6; ++i) k[i] = ka[i] + kb[i];
      accumulate(out.terms, k, ca.cwiseProduct(cb));
    }
  return out;
}

LocalSymbol local_conjugate(const LocalSymbol& s) {
  LocalSymbol out = s;
  out.terms.clear();
  for (const auto& [key, c] : s.terms) {
    Key k = key;
    for (int i = 0; i < 3; ++i) k[i] = -k[i];
    accumulate(out.terms, k, c.conjugate());
  }
  return out;
}

LocalSymbol local_dtheta(const LocalSymbol& s, int a) {
  LocalSymbol out = s;
  out.terms.clear();
  for (const auto& [key, c] : s.terms) {
    const double x = s.spacing * key[a];
    if (x != 0.0) accumulate(out.terms, key, (-I * x) * c);
    if (key[3 + a] > 0) {
      Key k = key;
      --k[3 + a];
      accumulate(out.terms, k, double(key[3 + a]) * c);
    }
  }
  return out;
}

LocalSymbol local_times_theta(const LocalSymbol& s, int a) {
  LocalSymbol out = s;
  out.terms.clear();
  for (const auto& [key, c] : s.terms) {
    Key k = key;
    ++k[3 + a];
    out.terms.emplace(k, c);
  }
  return out;
}

VectorXc right_derivative(Group g, int g_band, const VectorXc& values, const Vector3d& x) {
  const Quadrature grid = symbol_grid(g, g_band);
  require(values.size() == static_cast<Eigen::Index>(grid.size()), "right_derivative: values do not match the grid");
  VectorXc out = VectorXc::Zero(grid.size());
  for (const auto& p : irreps_upto(g, g_band)) {
    const int d = dim(p);
    std::vector<MatrixXc> reps(grid.size());
    MatrixXc fhat = MatrixXc::Zero(d, d);
    for (std::size_t l = 0; l < grid.size(); ++l) {
      reps[l] = rep_matrix(p, grid.nodes[l]);
      fhat += grid.weights[l] * values[l] * reps[l];
    }
    // f(g) = sum d tr(pi(g)^* fhat), so R_X f(g) = -sum d tr(pi(g)^* dpi(X) fhat)
    const MatrixXc dfhat = lie_rep(p, x) * fhat;
    for (std::size_t l = 0; l < grid.size(); ++l) out[l] -= double(d) * (reps[l].adjoint() * dfhat).trace();
  }
  return out;
}

LocalSymbol local_right_derivative(const LocalSymbol& s, const Vector3d& x) {
  LocalSymbol out = s;
  for (auto& [key, c] : out.terms) c = right_derivative(s.group, s.g_band, c, x);
  return out;
}

LocalSymbol local_rescale(const LocalSymbol& s, double factor) {
  require(factor > 0, "local_rescale: factor must be positive");
  LocalSymbol out = s;
  out.spacing = s.spacing * factor;
  for (auto& [key, c] : out.terms) c *= std::pow(factor, degree(key_power(key)));
  return out;
}

double local_distance(const LocalSymbol& a, const LocalSymbol& b) {
  const LocalSymbol d = local_axpy(-1.0, b, a);
  double m = 0;
  for (const auto& [key, c] : d.terms)
    if (c.size()) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

LocalSymbol poisson_bracket(const LocalSymbol& a, const LocalSymbol& b) {
  check_compatible(a, b);
  const int n = lie_dim(a.group);
  LocalSymbol out = local_zero(a.group, band_product(a.group, a.g_band, b.g_band), common_spacing(a, b), a.k);
  std::vector<LocalSymbol> da, db;
  for (int i = 0; i < n; ++i) {
    Vector3d e = Vector3d::Zero();
    e[i] = 1.0;
    da.push_back(local_dtheta(a, i));
    db.push_back(local_dtheta(b, i));
    out = local_axpy(1.0, local_product(da[i], local_right_derivative(b, e)), out);
    out = local_axpy(-1.0, local_product(local_right_derivative(a, e), db[i]), out);
  }
  if (n == 3) {
    // -theta([d a, d b]) with [tau_i, tau_j] = eps_ijk tau_k
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      const LocalSymbol cross = local_axpy(-1.0, local_product(da[k], db[j]), local_product(da[j], db[k]));
      out = local_axpy(-1.0, local_times_theta(cross, i), out);
    }
  }
  return out;
}

LocalSymbol kernel_cutoff(const std::function<cplx(const Vector3d&)>& phi, const LocalSymbol& s) {
  LocalSymbol out = s;
  for (auto& [key, c] : out.terms) {
    require(degree(key_power(key)) == 0, "kernel_cutoff: polynomial terms need derivatives of phi, not lattice samples");
    c *= phi(site_point(s, key));
  }
  return out;
}

void check_support(const LocalSymbol& s) {
  const double r = injectivity_radius(s.group);
  for (const auto& [key, c] : s.terms) {
    if (c.size() == 0 || c.cwiseAbs().maxCoeff() == 0.0) continue;
    const double len = s.eps() * site_point(s, key).norm();
    if (len >= r * (1 - 1e-12))
      throw Error("local symbol support point |eps X| = " + std::to_string(len) + " leaves the injectivity set (radius " +
                  std::to_string(r) + ")");
  }
}

ConvolutionKernel local_kernel(const LocalSymbol& s, LocalVariant variant) {
  check_support(s);
  ConvolutionKernel k;
  k.group = s.group;
  k.g_band = s.g_band;
  k.grid = s.grid;
  for (const auto& [key, c] : s.terms) {
    require(degree(key_power(key)) == 0, "local_kernel: polynomial terms have no atomic kernel");
    const Vector3d y = s.eps() * site_point(s, key);
    k.atoms.push_back(exp_map(s.group, y));
    k.values.push_back(exp_jacobian(s.group, y) * c);
  }
  return variant == LocalVariant::Weyl ? weyl_deform(k) : k;
}

TruncatedOperator local_quantize(const LocalSymbol& s, LocalVariant variant, int op_band) {
  check_support(s);
  if (s.group == Group::U1) return quantize_u1(s, variant, op_band);
  LocalSymbol lattice = s, poly = s;
  lattice.terms.clear();
  poly.terms.clear();
  for (const auto& [key, c] : s.terms) {
    if (degree(key_power(key)) == 0)
      lattice.terms.emplace(key, c);
    else if (at_origin(key))
      poly.terms.emplace(key, c);
    else
      throw Error("local_quantize: SU2 terms with both a lattice shift and a theta power are not supported");
  }
  TruncatedOperator op;
  op.group = s.group;
  op.band = op_band;
  op.matrix = MatrixXc::Zero(pw_size(s.group, op_band), pw_size(s.group, op_band));
  if (!lattice.terms.empty()) {
    const TruncatedOperator a = kernel_quantize(local_kernel(lattice, variant), op_band);
    op.matrix += a.matrix;
    op.truncation_error += a.truncation_error;
  }
  if (!poly.terms.empty()) {
    const TruncatedOperator b = quantize_su2_polynomial(poly, variant, op_band);
    op.matrix += b.matrix;
    op.truncation_error += b.truncation_error;
  }
  return op;
}

TruncatedOperator midpoint_quantize(const LocalSymbol& s, int op_band) {
  check_support(s);
  const Group grp = s.group;
  const int n = pw_size(grp, op_band);
  const int image = band_product(grp, band_product(grp, op_band, s.g_band), op_band);
  const Quadrature q = group_quadrature(grp, degree_for_band(grp, image));
  struct Atom {
    GroupElement h_inv, half_inv;
    VectorXc c;
  };
  std::vector<Atom> atoms;
  for (const auto& [key, c] : s.terms) {
    require(degree(key_power(key)) == 0, "midpoint_quantize: lattice terms only");
    const Vector3d y = s.eps() * site_point(s, key);
    atoms.push_back({exp_map(grp, -y), exp_map(grp, -0.5 * y), exp_jacobian(grp, y) * c});
  }
  std::vector<MatrixXc> part(q.size());
  parallel_for(q.size(), [&](std::size_t k) {
    const GroupElement& g = q.nodes[k];
    const VectorXc out = basis_values(grp, op_band, g).conjugate();
    VectorXc in = VectorXc::Zero(n);
    for (const auto& a : atoms) {
      const cplx c = grid_interpolation_row(grp, s.grid, s.g_band, multiply(a.half_inv, g)).cast<cplx>().dot(a.c);
      in += c * basis_values(grp, op_band, multiply(a.h_inv, g));
    }
    part[k] = q.weights[k] * out * in.transpose();
  });
  TruncatedOperator op;
  op.group = grp;
  op.band = op_band;
  op.matrix = MatrixXc::Zero(n, n);
  for (const auto& m : part) op.matrix += m;
  return op;
}

SemiclassicalFit semiclassical_order_fit(const LocalSymbol& a, const LocalSymbol& b, const std::vector<int>& k_list,
                                         int in_band, LocalVariant variant) {
  require(k_list.size() >= 3, "semiclassical_order_fit: need at least three epsilon values");
  for (std::size_t i = 1; i < k_list.size(); ++i) require(k_list[i] > k_list[i - 1], "semiclassical_order_fit: epsilon must decrease");
  const Group grp = a.group;
  const int gmax = std::max(a.g_band, b.g_band);
  const int op_band = band_product(grp, band_product(grp, in_band, gmax), gmax);
  const std::vector<int> cols = embed(grp, in_band, op_band);
  const LocalSymbol ab = local_product(a, b), pb = poisson_bracket(a, b);

  auto restrict_cols = [&](const MatrixXc& m) {
    MatrixXc r(m.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) r.col(j) = m.col(cols[j]);
    return r;
  };
  auto quantize = [&](LocalSymbol s, int k) {
    s.k = k;
    return local_quantize(s, variant, op_band).matrix;
  };

  SemiclassicalFit fit;
  for (int k : k_list) {
    const double eps = 1.0 / k;
    const MatrixXc qa = quantize(a, k), qb = quantize(b, k), qab = quantize(ab, k), qpb = quantize(pb, k);
    const MatrixXc qaqb = qa * qb, qbqa = qb * qa;
    fit.eps.push_back(eps);
    fit.moyal.push_back(operator_norm(restrict_cols(qaqb - qab + (0.5 * I * eps) * qpb)));
    fit.dirac.push_back(operator_norm(restrict_cols((I / eps) * (qaqb - qbqa) - qpb)));
    fit.von_neumann.push_back(operator_norm(restrict_cols(0.5 * (qaqb + qbqa) - qab)));
  }
  auto slope = [&](const std::vector<double>& r) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] > 0)) return std::nan("");
      lx.push_back(std::log(fit.eps[i]));
      ly.push_back(std::log(r[i]));
    }
    return fit_slope(lx, ly);
  };
  fit.moyal_slope = slope(fit.moyal);
  fit.dirac_slope = slope(fit.dirac);
  fit.von_neumann_slope = slope(fit.von_neumann);
  return fit;
}

}  // namespace qg
