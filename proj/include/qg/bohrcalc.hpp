#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qg/core.hpp"
#include "qg/io.hpp"

namespace qg {

// Keys closer than this (relative to max(1, |lambda|)) are the same point of R_disc.
inline constexpr double bohr_key_tol = 1e-12;

inline double bracket(double lambda) { return std::sqrt(1.0 + lambda * lambda); }

// Finitely supported function R -> C. Also used for trig polynomials, keyed by frequency.
class FiniteSupportFn {
 public:
  using Map = std::map<double, cplx>;

  FiniteSupportFn() = default;

  // Adds v at lambda, merging with an existing key within bohr_key_tol.
  void add(double lambda, cplx v);
  cplx at(double lambda) const;
  bool contains(double lambda) const;
  // Drops entries with |value| <= cut.
  void prune(double cut = 0.0);

  const Map& data() const { return m_; }
  std::size_t size() const { return m_.size(); }
  bool empty() const { return m_.empty(); }
  std::vector<double> support() const;

 private:
  Map::const_iterator find(double lambda) const;
  Map m_;
};

FiniteSupportFn delta_fn(double lambda, cplx v = 1.0);
double max_abs_diff(const FiniteSupportFn& a, const FiniteSupportFn& b);
// (a, b) in l^2 = sum conj(a) b.
cplx l2_pairing(const FiniteSupportFn& a, const FiniteSupportFn& b);

// Mean of conj(f) f' over R_Bohr for trig polynomials given by their frequency coefficients.
cplx bohr_mean(const FiniteSupportFn& f, const FiniteSupportFn& fp);

// (sum (<lambda>^s |Phi|)^p)^{1/p}; p = infinity gives sup <lambda>^s |Phi|.
double sobolev_norm(const FiniteSupportFn& phi, double s, double p);

// lambda0 (Z + j0).
struct RationalLattice {
  double lambda0 = 1.0;
  double j0 = 0.0;

  bool contains(double lambda) const;
  // Integer m with lambda = lambda0 (m + j0); throws off the lattice.
  long index(double lambda) const;
  double point(long m) const { return lambda0 * (m + j0); }
};

struct Ratio {
  long p = 0, q = 1;
};
// p/q with q <= max_den matching x to relative 1e-12; nullopt when none exists.
std::optional<Ratio> rational_ratio(double x, long max_den = 100000);

// Lattice of Z^{a} + Z^{b}: spacing a.lambda0 / q with b.lambda0 / a.lambda0 = p / q, offset (q a.j0 + p b.j0) mod 1.
// Throws when the spacings are not relatively rational.
RationalLattice sum_lattice(const RationalLattice& a, const RationalLattice& b);

struct SymbolOrder {
  double m = 0, rho = 1, delta = 0;
};

// sigma(x, lambda) = sum_nu c_nu(lambda) e^{i nu x}, so sigma^1(lambda', lambda) = c_{-lambda'}(lambda).
// The lattice, when present, carries supp sigma^1 = {-nu}.
struct BohrSymbol {
  std::vector<double> freq;
  std::vector<std::function<cplx(double)>> coeff;
  SymbolOrder order;
  std::optional<RationalLattice> lattice;

  std::size_t size() const { return freq.size(); }
  cplx operator()(double x, double lambda) const;
  // sigma^1(lambda', lambda); zero off the frequency set.
  cplx hat1(double lambda_p, double lambda) const;
};

BohrSymbol zero_frequency_symbol(std::function<cplx(double)> c, SymbolOrder order = {});
BohrSymbol add_symbols(const BohrSymbol& a, const BohrSymbol& b);

// (A Phi)(lambda) = sum_{lambda'} sigma^1((lambda - lambda')/eps, (lambda + lambda')/2) Phi(lambda').
// Each frequency nu sends lambda' to lambda' - eps nu.
FiniteSupportFn apply_symbol(const BohrSymbol& s, const FiniteSupportFn& phi, double eps);
// Conjugated coefficients on negated frequencies.
BohrSymbol formal_adjoint(const BohrSymbol& s);
// rho^1(l', l) = sum_{l''} sigma^1(l'', l + eps/2 (l' - l'')) tau^1(l' - l'', l - eps/2 l'').
BohrSymbol twisted_product(const BohrSymbol& s, const BohrSymbol& t, double eps);

struct NewtonResult {
  cplx value = 0;        // sum_{a <= N} binom(n, a) Delta_h^a Phi(lambda)
  cplx remainder = 0;    // Phi(lambda + n h) - value
  double bound = 0;      // |binom(n, N+1)| max_{|k| <= |n|} |Delta_h^{N+1} Phi(lambda + k h)|
};
// Newton series of Phi at lambda in steps of h, evaluated at lambda + n h.
NewtonResult discrete_taylor(const std::function<cplx(double)>& phi, double lambda, long n, double h, int N);
// Generalized binomial n (n-1) ... (n-a+1) / a!.
double binom_general(long n, int a);
// Forward difference Delta_h^a f(lambda).
cplx forward_difference(const std::function<cplx(double)>& f, double lambda, double h, int a);

// Partial sum through order N of the Newton-series expansion of the twisted product for
// equivariant symbols on relatively rational lattices. Exact once N >= deg c^sigma + deg c^tau
// for polynomial coefficients.
BohrSymbol asymptotic_product(const BohrSymbol& s, const BohrSymbol& t, double eps, int N);

// Sampling window for coefficient tables and constants.
struct LambdaWindow {
  double lo = -8, hi = 8, step = 0.5;
  std::vector<double> points() const;
};
// max over the union of frequencies and sampled lambda of |c^a_nu - c^b_nu|.
double symbol_distance(const BohrSymbol& a, const BohrSymbol& b, const LambdaWindow& w);

// C_beta = max_{nu, lambda} |Delta_1^beta c_nu(lambda)| / <lambda>^{m - rho beta} sampled on the window.
std::vector<double> sampled_order_constants(const BohrSymbol& s, const LambdaWindow& w, int beta_max);

// Finitely supported kernel h(lambda, lambda') as triplets.
struct FiniteKernel {
  std::vector<double> row, col;
  std::vector<cplx> value;
  void add(double r, double c, cplx v);
};

struct YoungConstants {
  double c1 = 0, c2 = 0;  // sup_row sum_col |h|, sup_col sum_row |h|
};
YoungConstants young_bound(const FiniteKernel& h);
FiniteSupportFn apply_kernel(const FiniteKernel& h, const FiniteSupportFn& phi);

struct YoungCheck {
  double lhs = 0;  // ||K_h Phi||_(0,p)
  double rhs = 0;  // C1^{1/p} C2^{1/q} ||Phi||_(0,p)
};
YoungCheck young_check(const FiniteKernel& h, const FiniteSupportFn& phi, double p);

// r >= 0 with delta r <= t - m and (1 - delta) r > |m| - 1 + |t| + |s - t|, or nullopt.
std::optional<double> sobolev_feasible_r(const SymbolOrder& o, double s, double t);

struct SobolevReport {
  double constant = 0;   // 2^{|s-t|} (C1)^{1/p} (C2)^{1/q} of the sampled kernel
  double c1 = 0, c2 = 0;
  double r = 0;          // witness of the feasibility inequality
  double max_ratio = 0;  // max ||A Phi||_(s-t,p) / ||Phi||_(s,p) over the states
  bool holds = false;
};
// Kernel h(l'', l') = <l'' - l'>^{|s-t|} <l'>^{-t} sigma^1((l'' - l')/eps, (l'' + l')/2) sampled on
// input points `inputs`; throws when (s, t) is infeasible for the declared order.
SobolevReport sobolev_bound_check(const BohrSymbol& s, double sob_s, double t, double p,
                                  const std::vector<double>& inputs, const std::vector<FiniteSupportFn>& states,
                                  double eps = 1.0);

json fn_to_json(const FiniteSupportFn& f);
FiniteSupportFn fn_from_json(const json& j);
// {frequencies, window, coefficients [[re, im] per lambda] per frequency, order, lattice}.
json symbol_to_json(const BohrSymbol& s, const LambdaWindow& w);
// Tabulated symbol: coefficients are looked up at window points and throw elsewhere.
BohrSymbol symbol_from_json(const json& j);

}  // namespace qg
