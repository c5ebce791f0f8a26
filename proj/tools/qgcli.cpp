#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "suites.hpp"

using namespace qg;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    is.imbue(std::locale::classic());
    double v;
    is >> v;
    require(!is.fail() && (is >> std::ws).eof(), "--eps-list: cannot parse '" + item + "'");
    out.push_back(v);
  }
  require(out.size() >= 3, "--eps-list needs at least three values");
  return out;
}

// Numbers, or the names e and pi.
double parse_t(const std::string& text) {
  if (text == "e") return std::numbers::e;
  if (text == "pi") return pi;
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v;
  is >> v;
  require(!is.fail() && (is >> std::ws).eof() && v > 0, "--t: expected a positive number, e or pi");
  return v;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) std::cout << text;
  else write_text(cfg.out, text);
}

int finish(const RunConfig& cfg, const Report& r) {
  const std::string fmt = cfg.format.empty() ? "json" : cfg.format;
  emit(cfg, fmt == "csv" ? r.to_csv() : dump17(r.to_json()) + "\n");
  if (const Check* c = r.first_failure()) {
    std::cerr << "FAIL " << r.suite << ": " << c->name << " = " << format17(c->value);
    if (c->target) std::cerr << ", target " << format17(*c->target) << " +- " << format17(c->tol) << "\n";
    else std::cerr << ", tolerance " << format17(c->tol) << "\n";
    return 1;
  }
  return 0;
}

int run(const RunConfig& cfg) {
  require(cfg.format.empty() || cfg.format == "csv" || cfg.format == "json", "--format must be csv or json");
  if (cfg.command == "table1") {
    const Table1 t = run_table1(cfg);
    emit(cfg, cfg.format == "json" ? dump17(table1_json(t)) + "\n" : table1_csv(t));
    if (t.first_failure >= 0) {
      const auto& r = t.rows[t.first_failure];
      std::cerr << "FAIL table1: first failing cell t=" << r.t_label << " n=" << r.n << ": I = " << format17(r.value)
                << ", expected " << format17(r.expected) << ", rel_err " << format17(r.rel_err) << " >= " << format17(t.tol) << "\n";
      return 1;
    }
    return 0;
  }
  if (cfg.command == "resolution_u1") return finish(cfg, suite_resolution_u1(cfg));
  if (cfg.command == "moyal_fit") return finish(cfg, suite_moyal(cfg, false));
  if (cfg.command == "sw_props") return finish(cfg, suite_sw(cfg));
  if (cfg.command == "bohr_props") return finish(cfg, suite_bohr(cfg));
  throw Error("unknown command '" + cfg.command + "' (table1, resolution_u1, moyal_fit, sw_props, bohr_props)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-kernel coherent states and quantization calculi"};
  RunConfig cfg;
  double tol = 0;
  int n = 0;
  std::string t, eps;
  app.add_option("--cmd", cfg.command, "table1 | resolution_u1 | moyal_fit | sw_props | bohr_props")->required();
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "csv or json (table1 defaults to csv, the rest to json)");
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "override the main threshold (table1, resolution_u1)");
  app.add_option("--quad-degree", cfg.quad_degree, "table1: fixed number of quadrature panels (0 = adaptive)")->check(CLI::NonNegativeNumber);
  app.add_option("--j", cfg.j, "sw_props: largest spin")->capture_default_str();
  auto* t_opt = app.add_option("--t", t, "heat time; table1 takes one of 1, 2, e, pi, 4");
  auto* n_opt = app.add_option("--n", n, "table1: irrep dimension 1..5");
  auto* eps_opt = app.add_option("--eps-list", eps, "moyal_fit: comma-separated eps = 1/k values");
  CLI11_PARSE(app, argc, argv);
  if (*tol_opt) cfg.tol = tol;
  if (*n_opt) cfg.n = n;
  try {
    if (*t_opt) cfg.t = parse_t(t);
    if (*eps_opt) cfg.eps_list = parse_list(eps);
    return run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
