#include "qg/bohrcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qg {

namespace {

double key_tol(double lambda) { return bohr_key_tol * std::max(1.0, std::abs(lambda)); }

bool same_key(double a, double b) { return std::abs(a - b) <= key_tol(std::max(std::abs(a), std::abs(b))); }

constexpr double index_tol = 1e-9;

// Frequencies grouped up to key tolerance, each with the list of contributing source indices.
struct FreqGroups {
  std::vector<double> freq;
  std::vector<std::vector<std::size_t>> members;

  std::size_t slot(double nu) {
    for (std::size_t k = 0; k < freq.size(); ++k)
      if (same_key(freq[k], nu)) return k;
    freq.push_back(nu);
    members.emplace_back();
    return freq.size() - 1;
  }
};

std::optional<RationalLattice> product_lattice(const BohrSymbol& s, const BohrSymbol& t) {
  if (!s.lattice || !t.lattice) return std::nullopt;
  if (!rational_ratio(t.lattice->lambda0 / s.lattice->lambda0)) return std::nullopt;
  return sum_lattice(*s.lattice, *t.lattice);
}

}  // namespace

FiniteSupportFn::Map::const_iterator FiniteSupportFn::find(double lambda) const {
  auto it = m_.lower_bound(lambda - key_tol(lambda));
  if (it != m_.end() && it->first <= lambda + key_tol(lambda)) return it;
  return m_.end();
}

void FiniteSupportFn::add(double lambda, cplx v) {
  auto it = find(lambda);
  if (it == m_.end())
    m_.emplace(lambda, v);
  else
    m_[it->first] += v;
}

cplx FiniteSupportFn::at(double lambda) const {
  auto it = find(lambda);
  return it == m_.end() ? cplx(0.0) : it->second;
}

bool FiniteSupportFn::contains(double lambda) const { return find(lambda) != m_.end(); }

void FiniteSupportFn::prune(double cut) {
  for (auto it = m_.begin(); it != m_.end();) it = std::abs(it->second) <= cut ? m_.erase(it) : std::next(it);
}

std::vector<double> FiniteSupportFn::support() const {
  std::vector<double> s;
  s.reserve(m_.size());
  for (const auto& kv : m_) s.push_back(kv.first);
  return s;
}

FiniteSupportFn delta_fn(double lambda, cplx v) {
  FiniteSupportFn f;
  f.add(lambda, v);
  return f;
}

double max_abs_diff(const FiniteSupportFn& a, const FiniteSupportFn& b) {
  double d = 0;
  for (const auto& [l, v] : a.data()) d = std::max(d, std::abs(v - b.at(l)));
  for (const auto& [l, v] : b.data())
    if (!a.contains(l)) d = std::max(d, std::abs(v));
  return d;
}

cplx l2_pairing(const FiniteSupportFn& a, const FiniteSupportFn& b) {
  cplx acc = 0;
  for (const auto& [l, v] : a.data()) acc += std::conj(v) * b.at(l);
  return acc;
}

cplx bohr_mean(const FiniteSupportFn& f, const FiniteSupportFn& fp) { return l2_pairing(f, fp); }

double sobolev_norm(const FiniteSupportFn& phi, double s, double p) {
  require(p >= 1.0, "sobolev_norm: p must lie in [1, inf]");
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& [l, v] : phi.data()) m = std::max(m, std::pow(bracket(l), s) * std::abs(v));
    return m;
  }
  double acc = 0;
  for (const auto& [l, v] : phi.data()) acc += std::pow(std::pow(bracket(l), s) * std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

bool RationalLattice::contains(double lambda) const {
  const double x = lambda / lambda0 - j0;
  return std::abs(x - std::round(x)) <= index_tol;
}

long RationalLattice::index(double lambda) const {
  const double x = lambda / lambda0 - j0;
  require(std::abs(x - std::round(x)) <= index_tol, "RationalLattice::index: point is off the lattice");
  return std::lround(x);
}

std::optional<Ratio> rational_ratio(double x, long max_den) {
  if (!(x > 0) || !std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents.
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (a > 1e12) break;
    const long ai = (long)a;
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(double(p1) / double(q1) - x) <= 1e-12 * x) return Ratio{p1, q1};
    const double frac = r - a;
    if (frac <= 0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

RationalLattice sum_lattice(const RationalLattice& a, const RationalLattice& b) {
  const auto r = rational_ratio(b.lambda0 / a.lambda0);
  require(r.has_value(), "sum_lattice: lattice spacings are not relatively rational");
  RationalLattice c;
  c.lambda0 = a.lambda0 / double(r->q);
  double j = std::fmod(double(r->q) * a.j0 + double(r->p) * b.j0, 1.0);
  if (j < 0) j += 1.0;
  if (std::abs(j - 1.0) <= index_tol) j = 0.0;
  c.j0 = j;
  return c;
}

cplx BohrSymbol::operator()(double x, double lambda) const {
  cplx acc = 0;
  for (std::size_t k = 0; k < freq.size(); ++k) acc += coeff[k](lambda) * std::exp(I * (freq[k] * x));
  return acc;
}

cplx BohrSymbol::hat1(double lambda_p, double lambda) const {
  cplx acc = 0;
  for (std::size_t k = 0; k < freq.size(); ++k)
    if (same_key(freq[k], -lambda_p)) acc += coeff[k](lambda);
  return acc;
}

BohrSymbol zero_frequency_symbol(std::function<cplx(double)> c, SymbolOrder order) {
  BohrSymbol s;
  s.freq = {0.0};
  s.coeff = {std::move(c)};
  s.order = order;
  return s;
}

BohrSymbol add_symbols(const BohrSymbol& a, const BohrSymbol& b) {
  FreqGroups g;
  std::vector<std::function<cplx(double)>> all = a.coeff;
  all.insert(all.end(), b.coeff.begin(), b.coeff.end());
  for (std::size_t k = 0; k < a.size(); ++k) g.members[g.slot(a.freq[k])].push_back(k);
  for (std::size_t k = 0; k < b.size(); ++k) g.members[g.slot(b.freq[k])].push_back(a.size() + k);
  BohrSymbol r;
  r.freq = g.freq;
  for (const auto& mem : g.members) {
    std::vector<std::function<cplx(double)>> fs;
    for (std::size_t i : mem) fs.push_back(all[i]);
    r.coeff.push_back([fs](double l) {
      cplx acc = 0;
      for (const auto& f : fs) acc += f(l);
      return acc;
    });
  }
  r.order = {std::max(a.order.m, b.order.m), std::min(a.order.rho, b.order.rho), std::max(a.order.delta, b.order.delta)};
  r.lattice = product_lattice(a, b);
  return r;
}

FiniteSupportFn apply_symbol(const BohrSymbol& s, const FiniteSupportFn& phi, double eps) {
  FiniteSupportFn out;
  for (const auto& [lp, v] : phi.data())
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double l = lp - eps * s.freq[k];
      out.add(l, s.coeff[k](0.5 * (l + lp)) * v);
    }
  return out;
}

BohrSymbol formal_adjoint(const BohrSymbol& s) {
  BohrSymbol r;
  r.order = s.order;
  for (std::size_t k = 0; k < s.size(); ++k) {
    r.freq.push_back(-s.freq[k]);
    auto c = s.coeff[k];
    r.coeff.push_back([c](double l) { return std::conj(c(l)); });
  }
  if (s.lattice) {
    RationalLattice l = *s.lattice;
    l.j0 = l.j0 == 0.0 ? 0.0 : 1.0 - l.j0;
    r.lattice = l;
  }
  return r;
}

BohrSymbol twisted_product(const BohrSymbol& s, const BohrSymbol& t, double eps) {
  // c^rho_{nu_s + nu_t}(l) = sum c^s_{nu_s}(l - eps/2 nu_t) c^t_{nu_t}(l + eps/2 nu_s).
  FreqGroups g;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) {
      g.members[g.slot(s.freq[i] + t.freq[j])].push_back(pairs.size());
      pairs.emplace_back(i, j);
    }
  BohrSymbol r;
  r.freq = g.freq;
  for (const auto& mem : g.members) {
    struct Term {
      std::function<cplx(double)> cs, ct;
      double ds, dt;
    };
    std::vector<Term> terms;
    for (std::size_t m : mem) {
      const auto [i, j] = pairs[m];
      terms.push_back({s.coeff[i], t.coeff[j], -0.5 * eps * t.freq[j], 0.5 * eps * s.freq[i]});
    }
    r.coeff.push_back([terms](double l) {
      cplx acc = 0;
      for (const auto& tm : terms) acc += tm.cs(l + tm.ds) * tm.ct(l + tm.dt);
      return acc;
    });
  }
  r.order = {s.order.m + t.order.m, std::min(s.order.rho, t.order.rho), std::max(s.order.delta, t.order.delta)};
  r.lattice = product_lattice(s, t);
  return r;
}

double binom_general(long n, int a) {
  double b = 1.0;
  for (int i = 0; i < a; ++i) b *= double(n - i) / double(i + 1);
  return b;
}

cplx forward_difference(const std::function<cplx(double)>& f, double lambda, double h, int a) {
  cplx acc = 0;
  for (int i = 0; i <= a; ++i) acc += ((a - i) % 2 ? -1.0 : 1.0) * binom_general(a, i) * f(lambda + i * h);
  return acc;
}

NewtonResult discrete_taylor(const std::function<cplx(double)>& phi, double lambda, long n, double h, int N) {
  require(N >= 0, "discrete_taylor: N must be non-negative");
  NewtonResult r;
  for (int a = 0; a <= N; ++a) r.value += binom_general(n, a) * forward_difference(phi, lambda, h, a);
  r.remainder = phi(lambda + n * h) - r.value;
  const double w = std::abs(binom_general(n, N + 1));
  if (w > 0) {
    double m = 0;
    for (long k = -std::abs(n); k <= std::abs(n); ++k) m = std::max(m, std::abs(forward_difference(phi, lambda + k * h, h, N + 1)));
    r.bound = w * m;
  }
  return r;
}

BohrSymbol asymptotic_product(const BohrSymbol& s, const BohrSymbol& t, double eps, int N) {
  require(s.lattice.has_value() && t.lattice.has_value(), "asymptotic_product: both symbols need an equivariant lattice");
  require(rational_ratio(t.lattice->lambda0 / s.lattice->lambda0).has_value(),
          "asymptotic_product: lattice spacings are not relatively rational");
  require(N >= 0, "asymptotic_product: N must be non-negative");
  const RationalLattice ls = *s.lattice, lt = *t.lattice;
  // nu_s = -lambda_s (m_s + j_s): c^t is expanded at l - eps/2 lambda_s j_s in steps -h_s (index m_s),
  // c^s at l + eps/2 lambda_t j_t in steps h_t (index m_t).
  const double hs = 0.5 * eps * ls.lambda0, ht = 0.5 * eps * lt.lambda0;
  const double base_s = 0.5 * eps * lt.lambda0 * lt.j0, base_t = -0.5 * eps * ls.lambda0 * ls.j0;

  FreqGroups g;
  struct Pair {
    std::size_t i, j;
    long ms, mt;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) {
      g.members[g.slot(s.freq[i] + t.freq[j])].push_back(pairs.size());
      pairs.push_back({i, j, ls.index(-s.freq[i]), lt.index(-t.freq[j])});
    }
  BohrSymbol r;
  r.freq = g.freq;
  for (const auto& mem : g.members) {
    struct Term {
      std::function<cplx(double)> cs, ct;
      std::vector<double> ws, wt;  // binom(m_t, k), binom(-m_s, k)
    };
    std::vector<Term> terms;
    for (std::size_t m : mem) {
      const Pair& p = pairs[m];
      Term tm{s.coeff[p.i], t.coeff[p.j], {}, {}};
      for (int k = 0; k <= N; ++k) {
        tm.ws.push_back(binom_general(p.mt, k));
        tm.wt.push_back(binom_general(-p.ms, k));
      }
      terms.push_back(std::move(tm));
    }
    r.coeff.push_back([terms, N, hs, ht, base_s, base_t](double l) {
      cplx acc = 0;
      for (const auto& tm : terms) {
        std::vector<cplx> ds(N + 1), dt(N + 1);
        for (int k = 0; k <= N; ++k) {
          ds[k] = tm.ws[k] == 0.0 ? cplx(0.0) : forward_difference(tm.cs, l + base_s, ht, k);
          dt[k] = tm.wt[k] == 0.0 ? cplx(0.0) : forward_difference(tm.ct, l + base_t, hs, k);
        }
        for (int n = 0; n <= N; ++n)
          for (int k = 0; k <= n; ++k) acc += tm.ws[k] * ds[k] * tm.wt[n - k] * dt[n - k];
      }
      return acc;
    });
  }
  r.order = {s.order.m + t.order.m, std::min(s.order.rho, t.order.rho), std::max(s.order.delta, t.order.delta)};
  r.lattice = sum_lattice(ls, lt);
  return r;
}

std::vector<double> LambdaWindow::points() const {
  require(step > 0 && hi >= lo, "LambdaWindow: need step > 0 and hi >= lo");
  std::vector<double> p;
  const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) p.push_back(lo + k * step);
  return p;
}

double symbol_distance(const BohrSymbol& a, const BohrSymbol& b, const LambdaWindow& w) {
  const BohrSymbol nb = [&] {
    BohrSymbol m = b;
    for (auto& c : m.coeff) c = [c](double l) { return -c(l); };
    return m;
  }();
  const BohrSymbol d = add_symbols(a, nb);
  double worst = 0;
  for (double l : w.points())
    for (const auto& c : d.coeff) worst = std::max(worst, std::abs(c(l)));
  return worst;
}

std::vector<double> sampled_order_constants(const BohrSymbol& s, const LambdaWindow& w, int beta_max) {
  std::vector<double> c(beta_max + 1, 0.0);
  for (int b = 0; b <= beta_max; ++b)
    for (double l : w.points())
      for (const auto& f : s.coeff)
        c[b] = std::max(c[b], std::abs(forward_difference(f, l, 1.0, b)) / std::pow(bracket(l), s.order.m - s.order.rho * b));
  return c;
}

void FiniteKernel::add(double r, double c, cplx v) {
  row.push_back(r);
  col.push_back(c);
  value.push_back(v);
}

YoungConstants young_bound(const FiniteKernel& h) {
  FiniteSupportFn rows, cols;
  for (std::size_t k = 0; k < h.value.size(); ++k) {
    rows.add(h.row[k], std::abs(h.value[k]));
    cols.add(h.col[k], std::abs(h.value[k]));
  }
  YoungConstants c;
  for (const auto& kv : rows.data()) c.c1 = std::max(c.c1, kv.second.real());
  for (const auto& kv : cols.data()) c.c2 = std::max(c.c2, kv.second.real());
  return c;
}

FiniteSupportFn apply_kernel(const FiniteKernel& h, const FiniteSupportFn& phi) {
  FiniteSupportFn out;
  for (std::size_t k = 0; k < h.value.size(); ++k)
    if (phi.contains(h.col[k])) out.add(h.row[k], h.value[k] * phi.at(h.col[k]));
  return out;
}

YoungCheck young_check(const FiniteKernel& h, const FiniteSupportFn& phi, double p) {
  const YoungConstants c = young_bound(h);
  YoungCheck y;
  y.lhs = sobolev_norm(apply_kernel(h, phi), 0.0, p);
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  y.rhs = std::pow(c.c1, ip) * std::pow(c.c2, 1.0 - ip) * sobolev_norm(phi, 0.0, p);
  return y;
}

std::optional<double> sobolev_feasible_r(const SymbolOrder& o, double s, double t) {
  if (o.delta < 0 || o.delta >= 1) return std::nullopt;
  const double need = std::abs(o.m) - 1 + std::abs(t) + std::abs(s - t);
  if (t - o.m < 0) return std::nullopt;
  const double lo = std::max(0.0, need / (1 - o.delta));
  if (o.delta == 0) return need < 0 ? 0.0 : lo + 1.0;
  const double hi = (t - o.m) / o.delta;
  if (need < 0) return 0.0;
  if (hi > lo) return 0.5 * (lo + hi);
  return std::nullopt;
}

SobolevReport sobolev_bound_check(const BohrSymbol& s, double sob_s, double t, double p,
                                  const std::vector<double>& inputs, const std::vector<FiniteSupportFn>& states,
                                  double eps) {
  const auto r = sobolev_feasible_r(s.order, sob_s, t);
  require(r.has_value(),
          "sobolev_bound_check: no r >= 0 with delta r <= t - m and (1 - delta) r > |m| - 1 + |t| + |s - t|");
  FiniteSupportFn in;
  for (double l : inputs) in.add(l, 1.0);
  FiniteKernel h;
  for (double lp : in.support())
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double l = lp - eps * s.freq[k];
      h.add(l, lp, std::pow(bracket(l - lp), std::abs(sob_s - t)) * std::pow(bracket(lp), -t) * s.coeff[k](0.5 * (l + lp)));
    }
  SobolevReport rep;
  rep.r = *r;
  const YoungConstants c = young_bound(h);
  rep.c1 = c.c1;
  rep.c2 = c.c2;
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  rep.constant = std::pow(2.0, std::abs(sob_s - t)) * std::pow(c.c1, ip) * std::pow(c.c2, 1.0 - ip);
  for (const auto& phi : states) {
    for (double l : phi.support()) require(in.contains(l), "sobolev_bound_check: state supported outside the sampled inputs");
    const double den = sobolev_norm(phi, sob_s, p);
    if (den == 0) continue;
    rep.max_ratio = std::max(rep.max_ratio, sobolev_norm(apply_symbol(s, phi, eps), sob_s - t, p) / den);
  }
  rep.holds = rep.max_ratio <= rep.constant * (1 + 1e-12);
  return rep;
}

json fn_to_json(const FiniteSupportFn& f) {
  json a = json::array();
  for (const auto& [l, v] : f.data()) a.push_back({l, v.real(), v.imag()});
  return a;
}

FiniteSupportFn fn_from_json(const json& j) {
  FiniteSupportFn f;
  for (const auto& e : j) f.add(e.at(0).get<double>(), cplx(e.at(1).get<double>(), e.at(2).get<double>()));
  return f;
}

json symbol_to_json(const BohrSymbol& s, const LambdaWindow& w) {
  json j;
  j["frequencies"] = s.freq;
  j["window"] = {{"lo", w.lo}, {"hi", w.hi}, {"step", w.step}};
  json table = json::array();
  const auto pts = w.points();
  for (const auto& c : s.coeff) {
    json row = json::array();
    for (double l : pts) {
      const cplx v = c(l);
      row.push_back({v.real(), v.imag()});
    }
    table.push_back(row);
  }
  j["coefficients"] = table;
  j["order"] = {{"m", s.order.m}, {"rho", s.order.rho}, {"delta", s.order.delta}};
  j["lattice"] = s.lattice ? json{{"lambda0", s.lattice->lambda0}, {"j0", s.lattice->j0}} : json(nullptr);
  return j;
}

BohrSymbol symbol_from_json(const json& j) {
  BohrSymbol s;
  s.freq = j.at("frequencies").get<std::vector<double>>();
  const LambdaWindow w{j.at("window").at("lo").get<double>(), j.at("window").at("hi").get<double>(),
                       j.at("window").at("step").get<double>()};
  const auto& tab = j.at("coefficients");
  require(tab.size() == s.freq.size(), "symbol_from_json: coefficient rows do not match the frequencies");
  const std::size_t npts = w.points().size();
  for (const auto& row : tab) {
    require(row.size() == npts, "symbol_from_json: coefficient table does not match the window");
    std::vector<cplx> vals;
    for (const auto& e : row) vals.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    s.coeff.push_back([vals, w](double l) {
      const double x = (l - w.lo) / w.step;
      const long k = std::lround(x);
      require(k >= 0 && k < (long)vals.size() && std::abs(w.lo + k * w.step - l) <= key_tol(l),
              "tabulated symbol evaluated off its window");
      return vals[k];
    });
  }
  s.order = {j.at("order").at("m").get<double>(), j.at("order").at("rho").get<double>(),
             j.at("order").at("delta").get<double>()};
  if (!j.at("lattice").is_null()) s.lattice = RationalLattice{j["lattice"]["lambda0"].get<double>(), j["lattice"]["j0"].get<double>()};
  return s;
}

}  // namespace qg
