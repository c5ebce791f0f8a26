#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "qg/berezin.hpp"
#include "qg/bohrcalc.hpp"
#include "qg/gweyl.hpp"
#include "qg/heatcs.hpp"
#include "qg/localcalc.hpp"
#include "qg/sworbit.hpp"

namespace qg {

bool Check::pass() const {
  if (!std::isfinite(value)) return false;
  return target ? std::abs(value - *target) <= tol : value < tol;
}

void Report::below(const std::string& name, double value, double tol, bool gating) {
  checks.push_back({name, value, tol, std::nullopt, gating});
}

void Report::near(const std::string& name, double value, double target, double tol, bool gating) {
  checks.push_back({name, value, tol, target, gating});
}

void Report::append(const Report& other, const std::string& prefix) {
  for (Check c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(c);
  }
  if (!other.data.empty()) data[other.suite] = other.data;
}

bool Report::pass() const { return first_failure() == nullptr; }

const Check* Report::first_failure() const {
  for (const auto& c : checks)
    if (c.gating && !c.pass()) return &c;
  return nullptr;
}

json Report::to_json() const {
  json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["pass"] = pass();
  json arr = json::array();
  for (const auto& c : checks) {
    json e;
    e["name"] = c.name;
    e["value"] = c.value;
    if (c.target) {
      e["target"] = *c.target;
      e["tolerance"] = c.tol;
      e["test"] = "|value - target| <= tolerance";
    } else {
      e["tolerance"] = c.tol;
      e["test"] = "value < tolerance";
    }
    e["gating"] = c.gating;
    e["pass"] = c.pass();
    arr.push_back(e);
  }
  j["checks"] = arr;
  if (!data.empty()) j["data"] = data;
  return j;
}

std::string Report::to_csv() const {
  CsvTable t;
  t.comments = {"suite=" + suite, "seed=" + std::to_string(seed), std::string("pass=") + (pass() ? "true" : "false")};
  t.header = {"name", "value", "target", "tolerance", "gating", "pass"};
  for (const auto& c : checks) {
    std::string name = c.name;
    std::replace(name.begin(), name.end(), ',', ';');
    t.rows.push_back({name, format17(c.value), c.target ? format17(*c.target) : "", format17(c.tol), c.gating ? "1" : "0",
                      c.pass() ? "1" : "0"});
  }
  return qg::to_csv(t);
}

// ---------------------------------------------------------------------------------------------
// Table 1

namespace {

struct Cell {
  double t;
  const char* label;
  double expected[5];
};

const Cell table1_cells[] = {
    {1.0, "1", {0.125, 0.25, 0.375, 0.5, 0.625}},
    {2.0, "2", {1, 2, 3, 4, 5}},
    {std::numbers::e, "e", {2.51069, 5.02138, 7.53208, 10.0428, 12.5535}},
    {pi, "pi", {3.87578, 7.75157, 11.6274, 15.5031, 19.3789}},
    {4.0, "4", {8, 16, 24, 32, 40}},
};

}  // namespace

Table1 run_table1(const RunConfig& cfg) {
  Table1 out;
  out.tol = cfg.tol.value_or(2e-3);
  out.seed = cfg.seed;
  require(out.tol > 0, "table1: tolerance must be positive");
  for (const auto& c : table1_cells) {
    if (cfg.t && std::abs(*cfg.t - c.t) > 1e-9 * c.t) continue;
    for (int n = 1; n <= 5; ++n) {
      if (cfg.n && *cfg.n != n) continue;
      out.rows.push_back({c.t, c.label, n, 0.0, c.expected[n - 1], 0.0});
    }
  }
  require(!out.rows.empty(), "table1: no cell matches the requested t/n (t in {1, 2, e, pi, 4}, n in 1..5)");
  const bool coarse = cfg.quad_degree > 0;
  parallel_for(out.rows.size(), [&](std::size_t i) {
    auto& r = out.rows[i];
    const auto res = coarse ? resolution_integral_su2(r.t, r.n, 1e-12, cfg.quad_degree, false) : resolution_integral_su2(r.t, r.n);
    r.value = res.value;
    r.rel_err = std::abs(r.value - r.expected) / std::abs(r.expected);
  });
  for (std::size_t i = 0; i < out.rows.size(); ++i)
    if (!(out.rows[i].rel_err < out.tol)) {
      out.first_failure = int(i);
      break;
    }
  return out;
}

std::string table1_csv(const Table1& t) {
  CsvTable c;
  c.comments = {"seed=" + std::to_string(t.seed), "tolerance: rel_err < " + format17(t.tol)};
  c.header = {"t", "n", "I", "expected", "rel_err"};
  for (const auto& r : t.rows) c.rows.push_back({format17(r.t), std::to_string(r.n), format17(r.value), format17(r.expected), format17(r.rel_err)});
  return to_csv(c);
}

json table1_json(const Table1& t) {
  json j;
  j["command"] = "table1";
  j["seed"] = t.seed;
  j["tolerance"] = t.tol;
  j["test"] = "rel_err < tolerance";
  j["pass"] = t.first_failure < 0;
  json rows = json::array();
  for (const auto& r : t.rows) {
    json e;
    e["t"] = r.t;
    e["t_label"] = r.t_label;
    e["n"] = r.n;
    e["I"] = r.value;
    e["expected"] = r.expected;
    e["rel_err"] = r.rel_err;
    e["pass"] = r.rel_err < t.tol;
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j;
}

Report suite_table1(const Table1& t) {
  Report r{"table1", t.seed};
  for (const auto& row : t.rows) {
    const std::string cell = "I(" + row.t_label + "," + std::to_string(row.n) + ")";
    r.below(cell + " rel_err", row.rel_err, t.tol);
    // Cells printed without rounding are exact values.
    if (row.t_label == "1" || row.t_label == "2" || row.t_label == "4") r.below(cell + " exact cell rel_err", row.rel_err, 1e-6);
  }
  return r;
}

Report suite_closed_form(const Table1& t) {
  Report r{"closed_form", t.seed};
  for (const auto& row : t.rows) {
    const double law = row.t * row.t * row.t * row.n / 8.0;
    r.below("|I - t^3 n/8| / (t^3 n/8) at (" + row.t_label + "," + std::to_string(row.n) + ")", std::abs(row.value - law) / law, 1e-4);
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Heat kernel and theta function suites

Report suite_resolution_u1(const RunConfig& cfg) {
  Report r{"resolution_u1", cfg.seed};
  const double tol = cfg.tol.value_or(1e-4);
  const std::vector<double> ts = cfg.t ? std::vector<double>{*cfg.t} : std::vector<double>{0.5, 1.0, 2.0};
  json series = json::array();
  for (double t : ts) {
    const auto res = resolution_constant_u1(t);
    r.below("|C_t^-1 / t - 1| at t=" + format17(t), std::abs(res.value / t - 1.0), tol);
    // The constant does not depend on the equivariance shift.
    r.below("shift invariance j=3 at t=" + format17(t), std::abs(resolution_constant_u1(t, 3).value - res.value), 1e-10);
    series.push_back({{"t", t}, {"C_t^-1", res.value}, {"quadrature_error", res.error}});
  }
  r.data = series;
  return r;
}

Report suite_schur(const RunConfig& cfg) {
  Report r{"schur", cfg.seed};
  for (int n : {2, 3}) r.below("Schur residual SU2 n=" + std::to_string(n) + " t=1", schur_residual_su2(1.0, n).residual, 1e-6);
  return r;
}

namespace {

std::complex<long double> theta_series(cplx z, cplx tau, int terms = 200) {
  std::complex<long double> s = 0;
  const std::complex<long double> zz(z.real(), z.imag()), tt(tau.real(), tau.imag()), il(0, 1);
  const long double pil = 3.141592653589793238462643383279502884L;
  for (int n = -terms; n <= terms; ++n) s += std::exp(il * pil * tt * (long double)(n * n) + 2.0L * pil * il * (long double)n * zz);
  return s;
}

}  // namespace

Report suite_theta(const RunConfig& cfg) {
  Report r{"theta3", cfg.seed};
  double modular = 0, series = 0;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      const double l = -1.5 + 0.33 * a, t = 0.2 + 0.45 * b;
      const cplx lhs = theta3(I * l / pi, I * t / pi);
      const cplx rhs = std::sqrt(pi / t) * std::exp(l * l / t) * theta3(l / t, I * pi / t);
      modular = std::max(modular, std::abs(lhs / rhs - 1.0));
      const auto s = theta_series(I * l / pi, I * t / pi);
      series = std::max(series, std::abs(lhs / cplx(double(s.real()), double(s.imag())) - 1.0));
    }
  r.below("modular identity, 10x10 (l,t) grid, relative", modular, 1e-10);
  r.below("theta3 against long-double series, same grid, relative", series, 1e-10);
  double deriv = 0;
  const double h = 2e-4;
  for (cplx tau : {0.5 * I, cplx(0.1, 0.8), cplx(0, 2.0)})
    for (cplx z : {cplx(0.2, 0.1), cplx(-0.4, 0.3), cplx(0.05, -0.6), cplx(0.37, 0.0)}) {
      const cplx fd = (-theta3(z + 2 * h, tau) + 8.0 * theta3(z + h, tau) - 8.0 * theta3(z - h, tau) + theta3(z - 2 * h, tau)) / (12 * h);
      deriv = std::max(deriv, std::abs(fd - theta3_dz(z, tau)));
    }
  r.below("theta3' against 5-point finite difference (h=2e-4)", deriv, 1e-8);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Global KN / Weyl calculus

namespace {

double max_abs(const MatrixXc& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::size_t irrep_index(const Symbol& s, const IrrepLabel& p) {
  return std::find(s.irreps.begin(), s.irreps.end(), p) - s.irreps.begin();
}

}  // namespace

Report suite_kn(const RunConfig& cfg) {
  Report r{"kn_calculus", cfg.seed};
  std::mt19937_64 rng(cfg.seed);
  struct Case {
    Group group;
    int band, g_band;
  };
  for (const Case c : {Case{Group::U1, 16, 2}, Case{Group::SU2, 4, 2}}) {
    const Group grp = c.group;
    const std::string tag = std::string(group_name(grp)) + " ";
    const int op_band = band_product(grp, band_product(grp, c.band, c.g_band), c.g_band);

    double comp = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const Symbol a = random_symbol(grp, c.band, c.g_band, rng), b = random_symbol(grp, c.band, c.g_band, rng);
      const auto ab = operator_product(kn_quantize(a, op_band), kn_quantize(b, op_band));
      comp = std::max(comp, symbol_distance(kn_compose(a, b), kn_symbol(ab, c.band, band_product(grp, c.g_band, c.g_band))));
    }
    r.below(tag + "composition: kn_compose vs symbol of operator product, 20 pairs", comp, 1e-9);

    const auto id = kn_quantize(identity_symbol(grp, c.band), c.band);
    r.below(tag + "identity: op(1) = 1", max_abs(id.matrix - MatrixXc::Identity(id.matrix.rows(), id.matrix.cols())), 1e-9);

    const Symbol s = random_symbol(grp, c.band, c.g_band, rng), t = random_symbol(grp, c.band, c.g_band, rng);
    const auto a1 = kn_quantize(s, band_product(grp, c.band, c.g_band));
    r.below(tag + "extraction: symbol(op(sigma)) = sigma", symbol_distance(kn_symbol(a1, c.band, c.g_band), s), 1e-9);

    const int adj_band = band_product(grp, c.band, c.g_band);
    const int big = band_product(grp, adj_band, c.g_band);
    const auto a = kn_quantize(s, big);
    r.below(tag + "adjoint: symbol(op(sigma)^*) = kn_adjoint(sigma)",
            symbol_distance(kn_adjoint(s), kn_symbol(operator_adjoint(a), adj_band, c.g_band)), 1e-9);

    double left = 0, right = 0;
    for (int trial = 0; trial < 3; ++trial) {
      const GroupElement h = random_element(grp, rng);
      const auto uh = left_translation(grp, big, h);
      const auto conj_l = operator_product(operator_product(uh, a), operator_adjoint(uh));
      const Symbol want_l = make_symbol(grp, c.band, c.g_band, [&](const IrrepLabel& p, const GroupElement& g) {
        const MatrixXc rp = rep_matrix(p, h);
        return MatrixXc(rp * symbol_at(s, irrep_index(s, p), multiply(inverse(h), g)) * rp.adjoint());
      });
      left = std::max(left, symbol_distance(kn_symbol(conj_l, c.band, c.g_band), want_l));
      const auto ur = right_translation(grp, big, h);
      const auto conj_r = operator_product(operator_product(ur, a), operator_adjoint(ur));
      const Symbol want_r = make_symbol(grp, c.band, c.g_band, [&](const IrrepLabel& p, const GroupElement& g) {
        return symbol_at(s, irrep_index(s, p), multiply(g, h));
      });
      right = std::max(right, symbol_distance(kn_symbol(conj_r, c.band, c.g_band), want_r));
    }
    r.below(tag + "left covariance", left, 1e-9);
    r.below(tag + "right covariance", right, 1e-9);

    const auto b = kn_quantize(t, big);
    const cplx tr = (a.matrix.adjoint() * b.matrix).trace();
    r.below(tag + "Hilbert-Schmidt pairing, relative", std::abs(tr - hs_pairing(s, t)) / std::abs(tr), 1e-9);
  }
  return r;
}

Report suite_weyl_reality(const RunConfig& cfg) {
  Report r{"weyl_reality", cfg.seed};
  std::mt19937_64 rng(cfg.seed + 1);
  struct Case {
    Group group;
    int band, g_band;
  };
  for (const Case c : {Case{Group::U1, 16, 2}, Case{Group::SU2, 4, 2}}) {
    const int op_band = band_product(c.group, c.band, c.g_band);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const Symbol s = random_symbol(c.group, c.band, c.g_band, rng);
      worst = std::max(worst, max_abs(weyl_quantize(s, op_band).matrix.adjoint() - weyl_quantize(pointwise_adjoint(s), op_band).matrix));
    }
    r.below(std::string(group_name(c.group)) + " op_W(sigma)^* = op_W(sigma^*), 20 symbols", worst, 1e-9);
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Local calculus rates

Report suite_moyal(const RunConfig& cfg, bool dirac_gating) {
  Report r{"semiclassical", cfg.seed};
  std::vector<int> ks;
  for (double e : cfg.eps_list) {
    require(e > 0 && std::abs(1.0 / e - std::round(1.0 / e)) < 1e-9, "eps-list entries must be 1/k for integer k");
    ks.push_back(int(std::round(1.0 / e)));
  }
  std::mt19937_64 rng(cfg.seed + 2);
  const LocalSymbol ua = random_bump(Group::U1, 2, 0.25, 1.5, 0.5, rng), ub = random_bump(Group::U1, 2, 0.25, 1.5, 0.5, rng);
  const LocalSymbol sa = random_polynomial(Group::SU2, 2, 2, rng), sb = random_polynomial(Group::SU2, 2, 2, rng);
  json data;
  for (int g = 0; g < 2; ++g) {
    const std::string tag = g == 0 ? "U1 " : "SU2 ";
    const LocalSymbol& a = g == 0 ? ua : sa;
    const LocalSymbol& b = g == 0 ? ub : sb;
    const int in_band = g == 0 ? 6 : 3;
    const auto w = semiclassical_order_fit(a, b, ks, in_band, LocalVariant::Weyl);
    r.near(tag + "Weyl first-order Moyal residual slope", w.moyal_slope, 2.0, 0.2);
    r.near(tag + "Weyl Dirac residual slope", w.dirac_slope, 1.0, 0.2, dirac_gating);
    const auto k = semiclassical_order_fit(a, b, ks, in_band, LocalVariant::KN);
    r.near(tag + "KN Dirac residual slope (information)", k.dirac_slope, 1.0, 0.2, false);
    r.near(tag + "KN first-order Moyal residual slope (information)", k.moyal_slope, 2.0, 0.2, false);
    data[tag.substr(0, tag.size() - 1)] = {{"eps", w.eps}, {"weyl_moyal", w.moyal}, {"weyl_dirac", w.dirac},
                                            {"kn_moyal", k.moyal}, {"kn_dirac", k.dirac}};
  }
  r.data = data;
  return r;
}

// ---------------------------------------------------------------------------------------------
// Stratonovich-Weyl calculus on orbits

namespace {

MatrixXc random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  MatrixXc a(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) a(i, k) = cplx(d(rng), d(rng));
  return a;
}

OrbitField random_field(const OrbitSpec& s, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  VectorXc c(s.n * s.n);
  for (auto& x : c) x = cplx(d(rng), d(rng));
  return {s.n, s.harmonics * c};
}

MatrixXc rep(int n, const GroupElement& g) { return rep_matrix(n, su2_matrix(g)); }

struct PWFunction {
  std::vector<MatrixXc> c;
  cplx operator()(const GroupElement& g) const {
    cplx acc = 0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += double(i + 1) * (rep(int(i) + 1, g).adjoint() * c[i]).trace();
    return acc;
  }
};

PWFunction random_pw(int band, std::mt19937_64& rng) {
  PWFunction f;
  for (int n = 1; n <= band; ++n) f.c.push_back(random_matrix(n, rng) / double(n));
  return f;
}

}  // namespace

Report suite_sw(const RunConfig& cfg) {
  Report r{"stratonovich_weyl", cfg.seed};
  require(cfg.j >= 0 && std::abs(2 * cfg.j - std::round(2 * cfg.j)) < 1e-12, "--j must be a non-negative half-integer");
  const int n_max = int(std::round(2 * cfg.j)) + 1;
  std::mt19937_64 rng(cfg.seed + 3);
  double tracial = 0, unit = 0, reality = 0, covariance = 0, roundtrip = 0, product = 0, sw_berezin = 0, literal = 0;
  double e1 = 0, e2 = 0, e3 = 0, e4 = 0, e6 = 0;
  for (int n = 1; n <= n_max; ++n) {
    const OrbitSpec s = orbit_spec(n);
    const SWOperatorField d = sw_operator(s);
    unit = std::max(unit, (sw_symbol(MatrixXc::Identity(n, n), d).values.array() - 1.0).abs().maxCoeff());
    const MatrixXc a = random_matrix(n, rng), b = random_matrix(n, rng);
    const OrbitField wa = sw_symbol(a, d), wb = sw_symbol(b, d);
    reality = std::max(reality, (sw_symbol(a.adjoint(), d).values - wa.values.conjugate()).cwiseAbs().maxCoeff());
    cplx pairing = 0;
    for (std::size_t q = 0; q < s.size(); ++q) pairing += s.weight[q] * std::conj(wa.values[q]) * wb.values[q];
    tracial = std::max(tracial, std::abs(pairing - (a.adjoint() * b).trace()));
    roundtrip = std::max(roundtrip, max_abs(sw_quantize(wa, s, d) - a));
    const OrbitField f = random_field(s, rng);
    roundtrip = std::max(roundtrip, max_abs_diff(sw_symbol(sw_quantize(f, s, d), d), f));
    const GroupElement g = random_element(Group::SU2, rng), h = random_element(Group::SU2, rng);
    const OrbitField moved = sw_symbol(rep(n, g) * a * rep(n, g).adjoint(), d);
    for (std::size_t q = 0; q < s.size(); q += 3) {
      const auto [bt, al] = orbit_angles(coadjoint(inverse(g), orbit_direction(s.rule.beta[q], s.rule.alpha[q])));
      covariance = std::max(covariance, std::abs(moved.values[q] - sw_symbol_at(a, d, bt, al)));
    }
    product = std::max(product, max_abs_diff(sw_twisted_product(wa, wb, s, d), sw_symbol(a * b, d)));
    const MatrixXc qsw = sw_quantize(f, s, d);
    sw_berezin = std::max(sw_berezin, max_abs(qsw - berezin_quantize(kernel_power(f, s, d.k, -0.5), s)));
    literal = std::max(literal, max_abs(qsw - berezin_quantize(kernel_power(f, s, d.k, 0.5), s)));

    // E-kernel properties
    const OrbitField eg = swf_kernel(g, d), eh = swf_kernel(h, d);
    e1 = std::max(e1, (eg.values.conjugate() - swf_kernel(inverse(g), d).values).cwiseAbs().maxCoeff());
    const OrbitField conj_g = swf_kernel(multiply(multiply(h, g), inverse(h)), d);
    for (std::size_t q = 0; q < s.size(); q += 3) {
      const auto [bt, al] = orbit_angles(coadjoint(inverse(h), orbit_direction(s.rule.beta[q], s.rule.alpha[q])));
      e2 = std::max(e2, std::abs(conj_g.values[q] - swf_kernel_at(g, d, bt, al)));
    }
    e3 = std::max(e3, std::abs(orbit_integral(eg, s) - character(IrrepLabel{Group::SU2, n}, g)));
    const Quadrature gq = group_quadrature(Group::SU2, degree_for_band(Group::SU2, band_product(Group::SU2, n, n)));
    const std::size_t t0 = 1 % s.size(), t1 = s.size() / 2;
    cplx lhs = 0;
    for (std::size_t k = 0; k < gq.size(); ++k) {
      const MatrixXc rk = rep(n, gq.nodes[k]);
      lhs += gq.weights[k] * (d.delta[t0] * rk).trace() * std::conj((d.delta[t1] * rk).trace());
    }
    e4 = std::max(e4, std::abs(lhs - (d.delta[t0] * d.delta[t1]).trace() / double(n)));
    e6 = std::max(e6, max_abs_diff(sw_twisted_product(eg, eh, s, d), swf_kernel(multiply(g, h), d)));
  }
  const std::string jt = " (j <= " + format17(cfg.j) + ")";
  r.below("tracial property" + jt, tracial, 1e-9);
  r.below("W_1 = 1" + jt, unit, 1e-9);
  r.below("reality W_{A*} = conj W_A" + jt, reality, 1e-9);
  r.below("covariance" + jt, covariance, 1e-9);
  r.below("quantize/symbol roundtrip" + jt, roundtrip, 1e-9);
  r.below("twisted product vs matrix product" + jt, product, 1e-9);
  r.below("E1: conj E(g) = E(g^-1)" + jt, e1, 1e-9);
  r.below("E2: E(hgh^-1)(theta) = E(g)(Ad*_{h^-1} theta)" + jt, e2, 1e-9);
  r.below("E3: integral of E(g) = character" + jt, e3, 1e-9);
  r.below("E4: group orthogonality of E" + jt, e4, 1e-9);
  r.below("E6: E(g) * E(h) = E(gh)" + jt, e6, 1e-9);

  // Transform-level properties on band-limited functions.
  const int band = std::min(n_max, 4);
  const auto calc = orbit_calculi(band);
  const PWFunction psi = random_pw(band, rng);
  const auto f = swf_transform(psi, band, calc);
  double norm2 = 0;
  for (int n = 1; n <= band; ++n) norm2 += n * psi.c[n - 1].squaredNorm();
  r.below("Parseval-Plancherel, relative (band " + std::to_string(band) + ")", std::abs(swf_norm2(f, calc) - norm2) / norm2, 1e-9);
  const GroupElement g = random_element(Group::SU2, rng);
  const auto shifted = swf_transform([&](const GroupElement& x) { return psi(multiply(inverse(g), x)); }, band, calc);
  double e5 = 0;
  for (int n = 1; n <= band; ++n) {
    const auto& c = calc[n - 1];
    e5 = std::max(e5, max_abs_diff(sw_twisted_product(swf_kernel(g, c.delta), f[n - 1], c.spec, c.delta), shifted[n - 1]));
  }
  r.below("E5: E(g) * F[Psi] = F[U_g Psi] (band " + std::to_string(band) + ")", e5, 1e-9);

  const int cb = std::min(n_max, 3);
  const auto cc = orbit_calculi(cb);
  const PWFunction p1 = random_pw(cb, rng), p2 = random_pw(cb, rng);
  const Quadrature inner = group_quadrature(Group::SU2, degree_for_band(Group::SU2, band_product(Group::SU2, cb, cb)));
  const auto conv = [&](const GroupElement& x) {
    cplx acc = 0;
    for (std::size_t k = 0; k < inner.size(); ++k) acc += inner.weights[k] * p1(inner.nodes[k]) * p2(multiply(inverse(inner.nodes[k]), x));
    return acc;
  };
  const auto fc = swf_transform(conv, cb, cc), f1 = swf_transform(p1, cb, cc), f2 = swf_transform(p2, cb, cc);
  double inter = 0;
  for (int n = 1; n <= cb; ++n) inter = std::max(inter, max_abs_diff(fc[n - 1], sw_twisted_product(f1[n - 1], f2[n - 1], cc[n - 1].spec, cc[n - 1].delta)));
  r.below("convolution intertwining (band " + std::to_string(cb) + ")", inter, 1e-9);

  r.below("Q^SW = Q^B o K^{-1/2}" + jt, sw_berezin, 1e-9);
  r.below("Q^SW = Q^B o K^{+1/2} (literal form, information)", literal, 1e-9, false);

  double cartan = 0;
  for (int t = 0; t < 20; ++t) {
    const GroupElement h = random_element(Group::SU2, rng);
    cartan = std::max({cartan, cartan_power_residual(0.5, 4, h), cartan_power_residual(1.0, 3, h), cartan_power_residual(2.5, 5, h)});
  }
  r.below("Cartan power residual", cartan, 1e-12);

  const auto y20 = [](double b, double) { return cplx(1.5 * std::cos(b) * std::cos(b) - 0.5); };
  const KRateFit fit = k_rate_fit(y20, 2, {4, 8, 16, 32});
  r.near("K_j convergence slope over j in {4,8,16,32}", fit.slope, 1.0, 0.2);
  r.data = {{"j", fit.j}, {"K_j residual", fit.residual}};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Bohr calculus

namespace {

FiniteSupportFn random_state(std::mt19937_64& rng, const RationalLattice& lat, int count, int range) {
  std::uniform_int_distribution<int> idx(-range, range);
  std::normal_distribution<double> g;
  FiniteSupportFn f;
  for (int k = 0; k < count; ++k) f.add(lat.point(idx(rng)), cplx(g(rng), g(rng)));
  return f;
}

BohrSymbol random_bohr_symbol(std::mt19937_64& rng, const RationalLattice& lat, int count, int range) {
  std::uniform_int_distribution<int> idx(-range, range);
  std::normal_distribution<double> g;
  BohrSymbol s;
  s.lattice = lat;
  std::set<int> used;
  while (int(used.size()) < count) used.insert(idx(rng));
  for (int m : used) {
    const cplx a(g(rng), g(rng)), b(g(rng), g(rng)), c(g(rng), g(rng));
    const double w = 0.2 + 0.1 * std::abs(g(rng));
    s.freq.push_back(-lat.point(m));
    s.coeff.push_back([a, b, c, w](double l) { return a + b * std::sin(l) + c * std::exp(-w * l * l); });
  }
  return s;
}

std::function<cplx(double)> polynomial(const std::vector<cplx>& c) {
  return [c](double l) {
    cplx acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * l + *it;
    return acc;
  };
}

}  // namespace

Report suite_bohr(const RunConfig& cfg) {
  Report r{"bohr_calculus", cfg.seed};
  std::mt19937_64 rng(cfg.seed + 4);
  std::normal_distribution<double> gauss;

  // Twisted product against composition.
  {
    const RationalLattice ls{0.5, 0.25}, lt{0.75, 0.5}, lp{0.25, 0.0};
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      const BohrSymbol s = random_bohr_symbol(rng, ls, 3, 4), t = random_bohr_symbol(rng, lt, 3, 4);
      for (double eps : {1.0, 0.5, 0.125}) {
        const BohrSymbol rho = twisted_product(s, t, eps);
        for (int k = 0; k < 3; ++k) {
          const FiniteSupportFn phi = random_state(rng, lp, 6, 12);
          worst = std::max(worst, max_abs_diff(apply_symbol(rho, phi, eps), apply_symbol(s, apply_symbol(t, phi, eps), eps)));
        }
      }
    }
    r.below("twisted product = composition (10 pairs x 3 eps x 3 states)", worst, 1e-13);
  }
  // Adjoint pairing.
  {
    const RationalLattice ls{0.5, 0.1}, lp{0.25, 0.3};
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const BohrSymbol s = random_bohr_symbol(rng, ls, 3, 4), sa = formal_adjoint(s);
      const FiniteSupportFn p2 = random_state(rng, lp, 6, 10);
      const FiniteSupportFn image = apply_symbol(s, random_state(rng, lp, 6, 10), 1.0);
      FiniteSupportFn q1;
      for (double l : image.support()) q1.add(l, cplx(gauss(rng), gauss(rng)));
      for (double eps : {1.0, 0.5}) {
        const cplx lhs = l2_pairing(apply_symbol(sa, q1, eps), p2), rhs = l2_pairing(q1, apply_symbol(s, p2, eps));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
    }
    r.below("adjoint pairing (A* Phi, Psi) = (Phi, A Psi), 20 symbols", worst, 1e-13);
  }
  // Newton series on polynomials of degree <= N.
  {
    double worst = 0;
    std::uniform_real_distribution<double> lam(-2, 2);
    for (int N = 1; N <= 4; ++N)
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> c(N + 1);
        for (auto& x : c) x = cplx(gauss(rng), gauss(rng));
        const auto p = polynomial(c);
        const double l0 = lam(rng);
        for (long n : {-6L, -1L, 0L, 2L, 5L, 8L})
          for (double h : {1.0, 0.5, 0.25}) {
            const NewtonResult nr = discrete_taylor(p, l0, n, h, N);
            // Scale: the size of the polynomial's terms at the far end of the range.
            double scale = 0;
            const double x = std::abs(l0) + std::abs(n * h) + 1;
            for (int k = 0; k <= N; ++k) scale += std::abs(c[k]) * std::pow(x, k);
            worst = std::max(worst, std::abs(nr.value - p(l0 + n * h)) / scale);
          }
      }
    r.below("Newton series exactness on polynomials deg <= N (relative to term size)", worst, 1e-12);
  }
  // The asymptotic product with N = deg + deg reproduces the twisted product.
  {
    const RationalLattice ls{0.5, 0.25}, lt{0.75, 0.5};
    const auto poly_symbol = [](const RationalLattice& lat, const std::vector<int>& idx, const std::vector<std::vector<cplx>>& c) {
      BohrSymbol s;
      s.lattice = lat;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        s.freq.push_back(-lat.point(idx[k]));
        s.coeff.push_back(polynomial(c[k]));
      }
      return s;
    };
    const BohrSymbol s = poly_symbol(ls, {-1, 0, 2}, {{1.0, cplx(0, 1), 0.5}, {2.0, -1.0}, {cplx(0, 0.3), 0.0, 1.0}});
    const BohrSymbol t = poly_symbol(lt, {0, 1}, {{cplx(1, 1), 0.7}, {-0.2, cplx(0, -1)}});
    double worst = 0;
    for (double eps : {1.0, 0.5}) worst = std::max(worst, symbol_distance(asymptotic_product(s, t, eps, 3), twisted_product(s, t, eps), LambdaWindow{-4, 4, 0.25}));
    r.below("asymptotic product N = 3 vs twisted product (degrees 2 and 1)", worst, 1e-12);
  }
  // Lattice arithmetic.
  {
    std::uniform_int_distribution<int> pq(1, 9);
    std::uniform_real_distribution<double> off(0.0, 1.0), sp(0.2, 2.0);
    double spacing = 0, offset = 0;
    int outside = 0;
    for (int trial = 0; trial < 20; ++trial) {
      int p = pq(rng), q = pq(rng);
      const int g = std::gcd(p, q);
      p /= g;
      q /= g;
      const RationalLattice ls{sp(rng), off(rng)};
      const RationalLattice lphi{ls.lambda0 * p / q, off(rng)};
      const RationalLattice lout = sum_lattice(ls, lphi);
      spacing = std::max(spacing, std::abs(lout.lambda0 - ls.lambda0 / q) / ls.lambda0);
      const double j = std::fmod(q * ls.j0 + p * lphi.j0, 1.0);
      const double dj = std::abs(lout.j0 - j);
      offset = std::max(offset, std::min(dj, std::abs(dj - 1.0)));
      const BohrSymbol s = random_bohr_symbol(rng, ls, 3, 6);
      const FiniteSupportFn out = apply_symbol(s, random_state(rng, lphi, 5, 8), 1.0);
      for (double l : out.support()) outside += !lout.contains(l);
    }
    r.below("lattice spacing lambda0'' = lambda0/q, 20 rational pairs, relative", spacing, 1e-13);
    r.below("lattice offset (q j0 + p j0') mod 1, 20 rational pairs", offset, 1e-12);
    r.below("output support points off the sum lattice", double(outside), 0.5);
  }
  // Young inequality on 50 random states.
  {
    const RationalLattice lat{0.5, 0.0};
    std::uniform_int_distribution<int> idx(-8, 8);
    double worst = -1e300;
    for (int trial = 0; trial < 50; ++trial) {
      FiniteKernel h;
      for (int k = 0; k < 25; ++k) h.add(lat.point(idx(rng)), lat.point(idx(rng)), cplx(gauss(rng), gauss(rng)));
      const FiniteSupportFn phi = random_state(rng, lat, 7, 8);
      for (double p : {1.0, 1.5, 2.0, 4.0}) {
        const YoungCheck yc = young_check(h, phi, p);
        worst = std::max(worst, yc.lhs / yc.rhs);
      }
    }
    r.below("Young: max ||K Phi|| / (C1^{1/p} C2^{1/q} ||Phi||), 50 states x 4 p", worst, 1.0 + 1e-14);
  }
  // Sobolev boundedness on 50 random states.
  {
    const RationalLattice lat{0.5, 0.0};
    std::vector<double> inputs;
    for (int k = -40; k <= 40; ++k) inputs.push_back(lat.point(k));
    std::vector<FiniteSupportFn> states;
    for (int k = 0; k < 50; ++k) states.push_back(random_state(rng, lat, 8, 40));
    const BohrSymbol absl = zero_frequency_symbol([](double l) { return cplx(std::abs(l)); }, {1, 1, 0});
    BohrSymbol gs = random_bohr_symbol(rng, lat, 4, 3);
    for (auto& c : gs.coeff) c = [c](double l) { return c(0.0) * std::exp(-0.1 * l * l); };
    gs.order = {0, 1, 0};
    struct Case {
      const BohrSymbol* s;
      const char* name;
      double sob_s, t, p;
    };
    const Case cases[] = {{&absl, "|lambda|, s=t=1, p=2", 1, 1, 2}, {&absl, "|lambda|, s=3, t=1, p=1", 3, 1, 1},
                          {&gs, "Gaussian equivariant, s=0.5, t=0, p=1", 0.5, 0, 1},
                          {&gs, "Gaussian equivariant, s=0.5, t=0, p=2", 0.5, 0, 2},
                          {&gs, "Gaussian equivariant, s=0.5, t=0, p=3", 0.5, 0, 3}};
    for (const auto& c : cases) {
      const SobolevReport rep = sobolev_bound_check(*c.s, c.sob_s, c.t, c.p, inputs, states);
      r.below(std::string("Sobolev: max ratio / sampled constant, ") + c.name + ", 50 states", rep.max_ratio / rep.constant, 1.0 + 1e-12);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// U(1) Berezin smoothing

Report suite_berezin(const RunConfig& cfg) {
  Report r{"berezin_u1", cfg.seed};
  double route_i = 0, route_ii = 0, eigen = 0, exact_i = 0, exact_ii = 0, real_dev = 0, kn = 0;
  for (double t : {0.5, 1.0})
    for (double j0 : {0.0, 0.3}) {
      const U1Space s = u1_space(t, j0, 4.0);
      const MatrixXc x = u1_annihilation(s);
      for (double phi : {0.0, 1.1, -2.5})
        for (double l : {-2.0, 0.0, 0.7, 3.0}) {
          const VectorXc v = u1_coherent(s, phi, l).c;
          eigen = std::max(eigen, (x * v - std::exp(cplx(-l, phi)) * v).norm() / v.norm());
        }
      // Laurent monomials xi^a xibar^b: the heat identity is exact.
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
          const U1Mode md = u1_monomial(a, b);
          const MatrixXc aw = u1_berezin_operator({md}, s);
          for (double l : {-0.7, 0.9}) {
            const double phi = 0.8;
            const cplx mode = u1_eval({md}, phi, l);
            const cplx heat = std::exp(-0.5 * t * (double(md.m * md.m) + md.kappa * md.kappa)) * mode;
            route_i = std::max(route_i, std::abs(u1_lower_symbol_overlap({md}, s, phi, l) - heat) / std::abs(mode));
            route_ii = std::max(route_ii, std::abs(u1_lower_symbol(aw, s, phi, l) - u1_wick_multiplier(md.m, md.kappa, t) * mode) / std::abs(mode));
          }
        }
      // Real frequencies: exact period-factor formula, and the size of its departure from pure heat flow.
      for (auto [m, k] : std::vector<std::pair<int, double>>{{1, 0.0}, {-2, 0.0}, {0, 0.7}, {1, -1.3}, {3, 0.4}}) {
        const U1TrigPoly f = {{m, k, 1.0}};
        const MatrixXc q = u1_berezin_operator(f, s);
        for (double l : {-1.5, 0.9}) {
          const double phi = -2.1;
          const cplx exact = u1_lower_symbol_exact(f, s, phi, l);
          exact_i = std::max(exact_i, std::abs(u1_lower_symbol_overlap(f, s, phi, l) - exact));
          exact_ii = std::max(exact_ii, std::abs(u1_lower_symbol(q, s, phi, l) - exact));
          real_dev = std::max(real_dev, std::abs(exact - std::exp(-0.5 * t * (m * m + k * k)) * u1_eval(f, phi, l)));
        }
      }
      U1KNSymbol k3;
      k3.m = {0, 1, -2};
      k3.s = {[](int k) { return cplx(1.0 / (1.0 + 0.1 * k * k)); }, [](int k) { return cplx(std::cos(0.3 * k), 0.2); },
              [](int k) { return cplx(0.0, std::exp(-0.05 * k * k)); }};
      const MatrixXc ka = u1_kn_operator(k3, s);
      for (double l : {-1.0, 0.5, 1.7}) kn = std::max(kn, std::abs(u1_kn_lower_symbol_series(k3, s, 1.3, l) - u1_lower_symbol(ka, s, 1.3, l)));
    }
  r.below("Laurent modes xi^a xibar^b, |a|,|b| <= 2: theta3 overlap integral vs e^{-t(m^2+kappa^2)/2} mode, relative", route_i, 1e-9);
  r.below("Laurent modes: operator lower symbol vs Wick multiplier e^{2tab} mode, relative", route_ii, 1e-9);
  r.below("annihilation eigenrelation X v = xi v, relative", eigen, 1e-10);
  r.below("real modes: overlap integral vs exact period-factor formula", exact_i, 1e-10);
  r.below("real modes: operator lower symbol vs exact period-factor formula", exact_ii, 1e-12);
  r.below("real modes: departure of the exact lower symbol from pure heat flow (information)", real_dev, 1e-9, false);
  r.below("KN smoothing: Gaussian-sum formula vs operator lower symbol, 3-mode symbol", kn, 1e-8);
  return r;
}

}  // namespace qg
