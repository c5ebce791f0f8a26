#include "qg/gweyl.hpp"

#include <algorithm>
#include <map>

#include "qg/io.hpp"

namespace qg {

int pw_size(Group g, int band) {
  int n = 0;
  for (const auto& p : irreps_upto(g, band)) n += dim(p) * dim(p);
  return n;
}

std::vector<int> pw_offsets(Group g, int band) {
  std::vector<int> off;
  int n = 0;
  for (const auto& p : irreps_upto(g, band)) {
    off.push_back(n);
    n += dim(p) * dim(p);
  }
  return off;
}

namespace {

// Index of an irrep label inside irreps_upto(g, band).
int irrep_index(Group g, int band, int label) { return g == Group::U1 ? label + band : label - 1; }

bool within_band(Group g, int band, int label) { return g == Group::U1 ? std::abs(label) <= band : label <= band; }

// Positions of the V_{<=small} basis inside the V_{<=big} basis.
std::vector<int> pw_embed(Group g, int small, int big) {
  const auto off = pw_offsets(g, big);
  std::vector<int> pos;
  for (const auto& p : irreps_upto(g, small)) {
    const int o = off[irrep_index(g, big, p.label)], d = dim(p);
    for (int k = 0; k < d * d; ++k) pos.push_back(o + k);
  }
  return pos;
}

// Characters of labels 0..band (U(1)) or 1..band (SU(2)) summed with weights d, at g.
double dirichlet_kernel(Group grp, int band, const GroupElement& g) {
  if (grp == Group::U1) {
    double s = 1.0;
    for (int j = 1; j <= band; ++j) s += 2.0 * std::cos(j * g.angle);
    return s;
  }
  const double t = 2.0 * g.q.w();
  double prev = 0.0, cur = 1.0, s = 0.0;
  for (int n = 1; n <= band; ++n) {
    s += n * cur;
    const double next = t * cur - prev;
    prev = cur;
    cur = next;
  }
  return s;
}

Eigen::VectorXd interp_row(Group grp, const Quadrature& grid, int g_band, const GroupElement& g) {
  Eigen::VectorXd row(grid.size());
  const GroupElement gi = inverse(g);
  for (std::size_t k = 0; k < grid.size(); ++k)
    row[k] = grid.weights[k] * dirichlet_kernel(grp, g_band, multiply(gi, grid.nodes[k]));
  return row;
}

// sqrt(d) pi(g)_ab for every basis index of V_{<=band}.
VectorXc pw_row(Group grp, int band, const GroupElement& g) {
  VectorXc r(pw_size(grp, band));
  int o = 0;
  for (const auto& p : irreps_upto(grp, band)) {
    const MatrixXc m = rep_matrix(p, g);
    const double sd = std::sqrt(double(dim(p)));
    for (int a = 0; a < m.rows(); ++a)
      for (int b = 0; b < m.cols(); ++b) r[o++] = sd * m(a, b);
  }
  return r;
}

Symbol empty_symbol(Group g, int band, int g_band) {
  Symbol s;
  s.group = g;
  s.band = band;
  s.g_band = g_band;
  s.grid = symbol_grid(g, g_band);
  s.irreps = irreps_upto(g, band);
  s.values.assign(s.irreps.size(), std::vector<MatrixXc>(s.grid.size()));
  return s;
}

void check_band(Group g, int band) {
  require(g == Group::U1 ? band >= 0 : band >= 1, "band must be >= 0 (U1) or >= 1 (SU2)");
}

}  // namespace

Quadrature symbol_grid(Group g, int g_band) {
  check_band(g, g_band);
  return group_quadrature(g, std::max(1, g_band));
}

Symbol make_symbol(Group g, int band, int g_band, const SymbolFn& f) {
  check_band(g, band);
  Symbol s = empty_symbol(g, band, g_band);
  parallel_for(s.irreps.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
      s.values[i][k] = f(s.irreps[i], s.grid.nodes[k]);
      require(s.values[i][k].rows() == dim(s.irreps[i]) && s.values[i][k].cols() == dim(s.irreps[i]),
              "make_symbol: value has the wrong shape");
    }
  });
  return s;
}

Symbol random_symbol(Group g, int band, int g_band, std::mt19937_64& rng, bool hermitian) {
  std::normal_distribution<double> n01;
  const auto rho = irreps_upto(g, g_band);
  const auto pis = irreps_upto(g, band);
  // coefficient C[pi][rho] is a (d_pi^2) x (d_rho^2) block: sigma_mn = sum_rho d_rho tr(rho(g)^* C_mn)
  std::vector<std::vector<MatrixXc>> coef(pis.size(), std::vector<MatrixXc>(rho.size()));
  for (std::size_t i = 0; i < pis.size(); ++i)
    for (std::size_t r = 0; r < rho.size(); ++r) {
      const int dp = dim(pis[i]), dr = dim(rho[r]);
      MatrixXc c(dp * dp, dr * dr);
      for (Eigen::Index a = 0; a < c.rows(); ++a)
        for (Eigen::Index b = 0; b < c.cols(); ++b) c(a, b) = cplx(n01(rng), n01(rng)) / double(dr);
      coef[i][r] = c;
    }
  Symbol s = make_symbol(g, band, g_band, [&](const IrrepLabel& p, const GroupElement& x) {
    const int dp = dim(p);
    const std::size_t i = std::find(pis.begin(), pis.end(), p) - pis.begin();
    MatrixXc out = MatrixXc::Zero(dp, dp);
    for (std::size_t r = 0; r < rho.size(); ++r) {
      const int dr = dim(rho[r]);
      const MatrixXc rg = rep_matrix(rho[r], x);
      for (int m = 0; m < dp; ++m)
        for (int n = 0; n < dp; ++n) {
          cplx t = 0;
          // tr(rho(g)^* C) = sum_ab conj(rho_ba) C_ba
          for (int a = 0; a < dr; ++a)
            for (int b = 0; b < dr; ++b) t += std::conj(rg(b, a)) * coef[i][r](m * dp + n, b * dr + a);
          out(m, n) += double(dr) * t;
        }
    }
    return out;
  });
  if (hermitian)
    for (auto& per : s.values)
      for (auto& v : per) v = (0.5 * (v + v.adjoint())).eval();
  return s;
}

Symbol identity_symbol(Group g, int band) {
  return make_symbol(g, band, g == Group::U1 ? 0 : 1,
                     [](const IrrepLabel& p, const GroupElement&) { return MatrixXc::Identity(dim(p), dim(p)); });
}

Symbol multiplication_symbol(Group g, int band, int g_band, const ScalarFn& f) {
  return make_symbol(g, band, g_band,
                     [&](const IrrepLabel& p, const GroupElement& x) { return (f(x) * MatrixXc::Identity(dim(p), dim(p))).eval(); });
}

Symbol derivative_symbol(Group g, int band, const Vector3d& x, double eps) {
  return make_symbol(g, band, g == Group::U1 ? 0 : 1,
                     [&](const IrrepLabel& p, const GroupElement&) { return (I * eps * lie_rep(p, x)).eval(); });
}

Eigen::VectorXd grid_interpolation_row(Group grp, const Quadrature& grid, int g_band, const GroupElement& g) {
  return interp_row(grp, grid, g_band, g);
}

TruncatedOperator multiplication_operator(Group g, int g_band, const VectorXc& values, int op_band) {
  Symbol s = empty_symbol(g, op_band, g_band);
  require(values.size() == static_cast<Eigen::Index>(s.grid.size()), "multiplication_operator: values do not match the grid");
  for (std::size_t i = 0; i < s.irreps.size(); ++i)
    for (std::size_t l = 0; l < s.grid.size(); ++l) s.values[i][l] = values[l] * MatrixXc::Identity(dim(s.irreps[i]), dim(s.irreps[i]));
  return kn_quantize(s, op_band);
}

Eigen::VectorXd interpolation_row(const Symbol& s, const GroupElement& g) { return interp_row(s.group, s.grid, s.g_band, g); }

MatrixXc symbol_at(const Symbol& s, std::size_t irrep, const GroupElement& g) {
  const Eigen::VectorXd row = interpolation_row(s, g);
  const int d = dim(s.irreps[irrep]);
  MatrixXc out = MatrixXc::Zero(d, d);
  for (std::size_t k = 0; k < s.grid.size(); ++k) out += row[k] * s.values[irrep][k];
  return out;
}

Symbol resample(const Symbol& s, int g_band) {
  require(g_band >= s.g_band, "resample: target g-band below the data band");
  if (g_band == s.g_band) return s;
  Symbol out = empty_symbol(s.group, s.band, g_band);
  parallel_for(out.grid.size(), [&](std::size_t k) {
    const Eigen::VectorXd row = interpolation_row(s, out.grid.nodes[k]);
    for (std::size_t i = 0; i < s.irreps.size(); ++i) {
      MatrixXc v = MatrixXc::Zero(dim(s.irreps[i]), dim(s.irreps[i]));
      for (std::size_t l = 0; l < s.grid.size(); ++l) v += row[l] * s.values[i][l];
      out.values[i][k] = v;
    }
  });
  return out;
}

Symbol pointwise_adjoint(const Symbol& s) {
  Symbol out = s;
  for (auto& per : out.values)
    for (auto& v : per) v = v.adjoint().eval();
  return out;
}

Symbol axpy(cplx a, const Symbol& x, const Symbol& y) {
  require(x.group == y.group, "axpy: group mismatch");
  const int gb = std::max(x.g_band, y.g_band), band = std::max(x.band, y.band);
  const Symbol xs = resample(x, gb), ys = resample(y, gb);
  Symbol out = empty_symbol(x.group, band, gb);
  for (std::size_t i = 0; i < out.irreps.size(); ++i) {
    const int lab = out.irreps[i].label, d = dim(out.irreps[i]);
    for (std::size_t k = 0; k < out.grid.size(); ++k) {
      MatrixXc v = MatrixXc::Zero(d, d);
      if (within_band(x.group, x.band, lab)) v += a * xs.values[irrep_index(x.group, x.band, lab)][k];
      if (within_band(y.group, y.band, lab)) v += ys.values[irrep_index(y.group, y.band, lab)][k];
      out.values[i][k] = v;
    }
  }
  return out;
}

double symbol_distance(const Symbol& a, const Symbol& b) {
  const Symbol diff = axpy(-1.0, b, a);
  double m = 0;
  for (const auto& per : diff.values)
    for (const auto& v : per) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

TruncatedOperator kn_quantize(const Symbol& s, int op_band) {
  check_band(s.group, op_band);
  const Group grp = s.group;
  const int col_band = std::min(s.band, op_band);
  const int image_band = band_product(grp, col_band, s.g_band);
  const int full = std::max(op_band, image_band);
  const Quadrature q = group_quadrature(grp, std::max(full, image_band));
  const int nfull = pw_size(grp, full);

  // rows: w_k sqrt(d) pi(g_k)_ab over V_{<=full}
  MatrixXc rows(nfull, q.size());
  std::vector<Eigen::VectorXd> interp(q.size());
  parallel_for(q.size(), [&](std::size_t k) {
    rows.col(k) = q.weights[k] * pw_row(grp, full, q.nodes[k]);
    interp[k] = interpolation_row(s, q.nodes[k]);
  });

  const auto cols = irreps_upto(grp, col_band);
  const auto off_full = pw_offsets(grp, full);
  MatrixXc a_full = MatrixXc::Zero(nfull, nfull);
  parallel_for(cols.size(), [&](std::size_t c) {
    const IrrepLabel& p = cols[c];
    const int d = dim(p);
    const std::size_t si = irrep_index(grp, s.band, p.label);
    const double sd = std::sqrt(double(d));
    MatrixXc cmat(q.size(), d * d);
    for (std::size_t k = 0; k < q.size(); ++k) {
      MatrixXc sig = MatrixXc::Zero(d, d);
      for (std::size_t l = 0; l < s.grid.size(); ++l) sig += interp[k][l] * s.values[si][l];
      const MatrixXc m = rep_matrix(p, q.nodes[k]).adjoint() * sig;
      // column (c,d) of the block takes (pi^* sigma)_{dc}
      for (int cc = 0; cc < d; ++cc)
        for (int dd = 0; dd < d; ++dd) cmat(k, cc * d + dd) = sd * m(dd, cc);
    }
    a_full.middleCols(off_full[irrep_index(grp, full, p.label)], d * d) = rows * cmat;
  });

  TruncatedOperator op;
  op.group = grp;
  op.band = op_band;
  const auto pos = pw_embed(grp, op_band, full);
  const int n = static_cast<int>(pos.size());
  op.matrix.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) op.matrix(i, j) = a_full(pos[i], pos[j]);
  std::vector<char> inside(nfull, 0);
  for (int i : pos) inside[i] = 1;
  double dropped = 0;
  for (int j : pos)
    for (int i = 0; i < nfull; ++i)
      if (!inside[i]) dropped += std::norm(a_full(i, j));
  op.truncation_error = std::sqrt(dropped);
  return op;
}

Symbol kn_symbol(const TruncatedOperator& a, int band, int g_band) {
  const Group grp = a.group;
  require(within_band(grp, a.band, band) && band <= a.band, "kn_symbol: band exceeds the operator band");
  Symbol s = empty_symbol(grp, band, g_band);
  const auto off = pw_offsets(grp, a.band);
  parallel_for(s.grid.size(), [&](std::size_t k) {
    const GroupElement& g = s.grid.nodes[k];
    // phi_row(g) = conj(sqrt(d) rho(g)_ab)
    const VectorXc phi = pw_row(grp, a.band, g).conjugate();
    for (std::size_t i = 0; i < s.irreps.size(); ++i) {
      const IrrepLabel& p = s.irreps[i];
      const int d = dim(p);
      const VectorXc v = a.matrix.middleCols(off[irrep_index(grp, a.band, p.label)], d * d).transpose() * phi;
      MatrixXc vm(d, d);  // vm(n,k) = (A phi_{pi,nk})(g)
      for (int n = 0; n < d; ++n)
        for (int kk = 0; kk < d; ++kk) vm(n, kk) = v[n * d + kk];
      s.values[i][k] = rep_matrix(p, g) * vm.transpose() / std::sqrt(double(d));
    }
  });
  return s;
}

cplx convolution_kernel_at(const Symbol& s, const GroupElement& h, const GroupElement& g) {
  const Eigen::VectorXd row = interpolation_row(s, g);
  cplx f = 0;
  for (std::size_t i = 0; i < s.irreps.size(); ++i) {
    MatrixXc sig = MatrixXc::Zero(dim(s.irreps[i]), dim(s.irreps[i]));
    for (std::size_t l = 0; l < s.grid.size(); ++l) sig += row[l] * s.values[i][l];
    f += double(dim(s.irreps[i])) * (rep_matrix(s.irreps[i], h).adjoint() * sig).trace();
  }
  return f;
}

Symbol kn_compose(const Symbol& a, const Symbol& b) {
  require(a.group == b.group, "kn_compose: group mismatch");
  const Group grp = a.group;
  const int gout = band_product(grp, a.g_band, b.g_band);
  require(gout <= max_quadrature_degree, "kn_compose: combined g-band exceeds the quadrature limit");
  Symbol out = empty_symbol(grp, b.band, gout);
  const Quadrature hq = group_quadrature(grp, std::max(a.band, band_product(grp, b.band, b.g_band)));
  std::vector<std::vector<MatrixXc>> rep_h(hq.size());
  for (std::size_t j = 0; j < hq.size(); ++j) {
    for (const auto& p : a.irreps) rep_h[j].push_back(rep_matrix(p, hq.nodes[j]));
  }
  parallel_for(out.grid.size(), [&](std::size_t k) {
    const GroupElement& g = out.grid.nodes[k];
    const Eigen::VectorXd ra = interpolation_row(a, g);
    std::vector<MatrixXc> sa(a.irreps.size());
    for (std::size_t i = 0; i < a.irreps.size(); ++i) {
      sa[i] = MatrixXc::Zero(dim(a.irreps[i]), dim(a.irreps[i]));
      for (std::size_t l = 0; l < a.grid.size(); ++l) sa[i] += ra[l] * a.values[i][l];
    }
    std::vector<MatrixXc> acc(b.irreps.size());
    for (std::size_t i = 0; i < b.irreps.size(); ++i) acc[i] = MatrixXc::Zero(dim(b.irreps[i]), dim(b.irreps[i]));
    for (std::size_t j = 0; j < hq.size(); ++j) {
      const GroupElement& h = hq.nodes[j];
      cplx fa = 0;
      for (std::size_t i = 0; i < a.irreps.size(); ++i)
        fa += double(dim(a.irreps[i])) * (rep_h[j][i].adjoint() * sa[i]).trace();
      if (fa == cplx(0)) continue;
      const Eigen::VectorXd rb = interpolation_row(b, multiply(inverse(h), g));
      for (std::size_t i = 0; i < b.irreps.size(); ++i) {
        MatrixXc sb = MatrixXc::Zero(dim(b.irreps[i]), dim(b.irreps[i]));
        for (std::size_t l = 0; l < b.grid.size(); ++l) sb += rb[l] * b.values[i][l];
        acc[i] += (hq.weights[j] * fa) * rep_matrix(b.irreps[i], h) * sb;
      }
    }
    for (std::size_t i = 0; i < b.irreps.size(); ++i) out.values[i][k] = acc[i];
  });
  return out;
}

Symbol kn_adjoint(const Symbol& a) {
  const Group grp = a.group;
  const int band = band_product(grp, a.band, a.g_band);
  Symbol out = empty_symbol(grp, band, a.g_band);
  const Quadrature hq = group_quadrature(grp, band);
  parallel_for(out.grid.size(), [&](std::size_t k) {
    const GroupElement& g = out.grid.nodes[k];
    std::vector<MatrixXc> acc(out.irreps.size());
    for (std::size_t i = 0; i < out.irreps.size(); ++i) acc[i] = MatrixXc::Zero(dim(out.irreps[i]), dim(out.irreps[i]));
    for (std::size_t j = 0; j < hq.size(); ++j) {
      const GroupElement& h = hq.nodes[j];
      const cplx f = convolution_kernel_at(a, h, multiply(h, g));
      for (std::size_t i = 0; i < out.irreps.size(); ++i) acc[i] += (hq.weights[j] * f) * rep_matrix(out.irreps[i], h);
    }
    for (std::size_t i = 0; i < out.irreps.size(); ++i) out.values[i][k] = acc[i].adjoint();
  });
  return out;
}

cplx hs_pairing(const Symbol& a, const Symbol& b) {
  require(a.group == b.group, "hs_pairing: group mismatch");
  const int gb = std::max(a.g_band, b.g_band);
  const Symbol as = resample(a, gb), bs = resample(b, gb);
  cplx s = 0;
  for (std::size_t i = 0; i < as.irreps.size(); ++i) {
    const int lab = as.irreps[i].label;
    if (!within_band(b.group, b.band, lab)) continue;
    const std::size_t ib = irrep_index(b.group, b.band, lab);
    for (std::size_t k = 0; k < as.grid.size(); ++k)
      s += as.grid.weights[k] * double(dim(as.irreps[i])) * (as.values[i][k].adjoint() * bs.values[ib][k]).trace();
  }
  return s;
}

TruncatedOperator left_translation(Group g, int band, const GroupElement& h) {
  TruncatedOperator op;
  op.group = g;
  op.band = band;
  op.matrix = MatrixXc::Zero(pw_size(g, band), pw_size(g, band));
  const auto off = pw_offsets(g, band);
  const auto irr = irreps_upto(g, band);
  for (std::size_t i = 0; i < irr.size(); ++i) {
    const int d = dim(irr[i]);
    const MatrixXc m = rep_matrix(irr[i], h);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int k = 0; k < d; ++k) op.matrix(off[i] + k * d + b, off[i] + a * d + b) = m(k, a);
  }
  return op;
}

TruncatedOperator right_translation(Group g, int band, const GroupElement& h) {
  TruncatedOperator op;
  op.group = g;
  op.band = band;
  op.matrix = MatrixXc::Zero(pw_size(g, band), pw_size(g, band));
  const auto off = pw_offsets(g, band);
  const auto irr = irreps_upto(g, band);
  for (std::size_t i = 0; i < irr.size(); ++i) {
    const int d = dim(irr[i]);
    const MatrixXc m = rep_matrix(irr[i], h);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int k = 0; k < d; ++k) op.matrix(off[i] + a * d + k, off[i] + a * d + b) = std::conj(m(k, b));
  }
  return op;
}

TruncatedOperator operator_product(const TruncatedOperator& a, const TruncatedOperator& b) {
  require(a.group == b.group && a.band == b.band, "operator_product: basis mismatch");
  TruncatedOperator op = a;
  op.matrix = a.matrix * b.matrix;
  op.truncation_error = a.truncation_error + b.truncation_error;
  return op;
}

TruncatedOperator operator_adjoint(const TruncatedOperator& a) {
  TruncatedOperator op = a;
  op.matrix = a.matrix.adjoint();
  return op;
}

TruncatedOperator restrict_band(const TruncatedOperator& a, int band) {
  TruncatedOperator op;
  op.group = a.group;
  op.band = band;
  op.truncation_error = a.truncation_error;
  const int n = pw_size(a.group, band);
  op.matrix = MatrixXc::Zero(n, n);
  const int small = std::min(band, a.band);
  const auto pa = pw_embed(a.group, small, a.band), pb = pw_embed(a.group, small, band);
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pa.size(); ++j) op.matrix(pb[i], pb[j]) = a.matrix(pa[i], pa[j]);
  return op;
}

ConvolutionKernel kernel_from_symbol(const Symbol& s, int degree) {
  const Quadrature q = group_quadrature(s.group, std::max(degree, s.band));
  ConvolutionKernel k;
  k.group = s.group;
  k.g_band = s.g_band;
  k.grid = s.grid;
  std::vector<double> w;
  for (std::size_t j = 0; j < q.size(); ++j) {
    k.atoms.push_back(q.nodes[j]);
    k.atoms.push_back(inverse(q.nodes[j]));
    w.push_back(0.5 * q.weights[j]);
    w.push_back(0.5 * q.weights[j]);
  }
  k.values.assign(k.atoms.size(), VectorXc());
  // kernel of sigma on the grid: F(h, g_l) = sum_pi d tr(pi(h)^* sigma(pi, g_l))
  parallel_for(k.atoms.size(), [&](std::size_t j) {
    VectorXc v(s.grid.size());
    std::vector<MatrixXc> reps;
    for (const auto& p : s.irreps) reps.push_back(rep_matrix(p, k.atoms[j]).adjoint());
    for (std::size_t l = 0; l < s.grid.size(); ++l) {
      cplx f = 0;
      for (std::size_t i = 0; i < s.irreps.size(); ++i) f += double(dim(s.irreps[i])) * (reps[i] * s.values[i][l]).trace();
      v[l] = w[j] * f;
    }
    k.values[j] = v;
  });
  return k;
}

ConvolutionKernel multiplication_kernel(Group g, int g_band, const ScalarFn& f) {
  ConvolutionKernel k;
  k.group = g;
  k.g_band = g_band;
  k.grid = symbol_grid(g, g_band);
  k.atoms.push_back(identity(g));
  VectorXc v(k.grid.size());
  for (std::size_t l = 0; l < k.grid.size(); ++l) v[l] = f(k.grid.nodes[l]);
  k.values.push_back(v);
  return k;
}

ConvolutionKernel weyl_deform(const ConvolutionKernel& k, double guard) {
  ConvolutionKernel out = k;
  std::vector<std::string> errors(k.atoms.size());
  parallel_for(k.atoms.size(), [&](std::size_t j) {
    const GroupElement& h = k.atoms[j];
    const double dist = h.group == Group::U1 ? std::abs(h.angle - pi) : std::sqrt(std::max(0.0, 2.0 * (1.0 + h.q.w())));
    if (dist <= guard) {
      const double mass = k.values[j].cwiseAbs().maxCoeff();
      if (mass > 1e-12) errors[j] = "weyl_deform: kernel mass " + format17(mass) + " on the square-root branch locus";
      out.values[j].setZero();
      return;
    }
    const GroupElement r = inverse(group_sqrt(h, 0.0));
    for (std::size_t l = 0; l < k.grid.size(); ++l) {
      const Eigen::VectorXd row = interp_row(k.group, k.grid, k.g_band, multiply(r, k.grid.nodes[l]));
      out.values[j][l] = row.cast<cplx>().dot(k.values[j]);
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw Error(e);
  return out;
}

ConvolutionKernel weyl_deform(const Symbol& s, int degree) { return weyl_deform(kernel_from_symbol(s, degree)); }

ConvolutionKernel weyl_element(const IrrepLabel& p, int m, int n, const GroupElement& h) {
  require(m >= 0 && n >= 0 && m < dim(p) && n < dim(p), "weyl_element: index out of range");
  const GroupElement r = inverse(group_sqrt(h));
  ConvolutionKernel k = multiplication_kernel(p.group, std::abs(p.label),
                                              [&](const GroupElement& g) { return rep_matrix(p, multiply(r, g))(m, n); });
  k.atoms[0] = h;
  return k;
}

Symbol kernel_symbol(const ConvolutionKernel& k, int band) {
  Symbol s = empty_symbol(k.group, band, k.g_band);
  parallel_for(s.irreps.size(), [&](std::size_t i) {
    const int d = dim(s.irreps[i]);
    for (std::size_t l = 0; l < s.grid.size(); ++l) s.values[i][l] = MatrixXc::Zero(d, d);
    for (std::size_t j = 0; j < k.atoms.size(); ++j) {
      const MatrixXc r = rep_matrix(s.irreps[i], k.atoms[j]);
      for (std::size_t l = 0; l < s.grid.size(); ++l) s.values[i][l] += k.values[j][l] * r;
    }
  });
  return s;
}

TruncatedOperator kernel_quantize(const ConvolutionKernel& k, int op_band) { return kn_quantize(kernel_symbol(k, op_band), op_band); }

TruncatedOperator weyl_quantize(const Symbol& s, int op_band) {
  return kernel_quantize(weyl_deform(s, std::max(s.band, op_band)), op_band);
}

std::string symbol_to_json(const Symbol& s) {
  json j;
  j["group"] = group_name(s.group);
  j["band"] = s.band;
  j["g_band"] = s.g_band;
  j["grid"] = {{"kind", s.group == Group::U1 ? "uniform" : "zyz-gauss"}, {"degree", s.grid.exactness_degree}, {"nodes", s.grid.size()}};
  json irr = json::array();
  for (const auto& p : s.irreps) irr.push_back(p.label);
  j["irreps"] = irr;
  json vals = json::array();
  for (const auto& per : s.values) {
    json a = json::array();
    for (const auto& v : per) a.push_back(complex_to_json(v));
    vals.push_back(a);
  }
  j["values"] = vals;
  return dump17(j, 0);
}

Symbol symbol_from_json(const std::string& text) {
  const json j = json::parse(text);
  const Group grp = parse_group(j.at("group").get<std::string>());
  Symbol s = empty_symbol(grp, j.at("band").get<int>(), j.at("g_band").get<int>());
  require(j.at("grid").at("degree").get<int>() == s.grid.exactness_degree, "symbol_from_json: grid degree mismatch");
  const auto& vals = j.at("values");
  require(vals.size() == s.irreps.size(), "symbol_from_json: irrep count mismatch");
  for (std::size_t i = 0; i < s.irreps.size(); ++i) {
    require(j.at("irreps")[i].get<int>() == s.irreps[i].label, "symbol_from_json: irrep label mismatch");
    require(vals[i].size() == s.grid.size(), "symbol_from_json: node count mismatch");
    const int d = dim(s.irreps[i]);
    for (std::size_t k = 0; k < s.grid.size(); ++k) s.values[i][k] = complex_from_json(vals[i][k], d, d);
  }
  return s;
}

}  // namespace qg
