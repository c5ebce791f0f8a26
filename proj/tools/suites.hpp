#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qg/io.hpp"

namespace qg {

struct RunConfig {
  std::string command;
  std::string out;              // empty: stdout
  std::string format;           // csv or json; empty picks the command's default
  std::uint64_t seed = 20240611;
  std::optional<double> tol;    // overrides the command's main threshold
  int quad_degree = 0;          // 0: adaptive defaults
  double j = 4.0;               // largest spin for the orbit suite
  std::optional<double> t;
  std::optional<int> n;
  std::vector<double> eps_list = {0.25, 0.125, 0.0625, 0.03125};
};

// One measured number and the test it was held to. Kinds: value < tol, or |value - target| <= tol.
struct Check {
  std::string name;
  double value = 0;
  double tol = 0;
  std::optional<double> target;
  bool gating = true;

  bool pass() const;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  json data = json::object();  // raw series behind the fitted numbers

  void below(const std::string& name, double value, double tol, bool gating = true);
  void near(const std::string& name, double value, double target, double tol, bool gating = true);
  void append(const Report& other, const std::string& prefix = "");
  bool pass() const;
  // First failing gating check, if any.
  const Check* first_failure() const;
  json to_json() const;
  std::string to_csv() const;
};

struct Table1Row {
  double t = 0;
  std::string t_label;
  int n = 0;
  double value = 0;
  double expected = 0;
  double rel_err = 0;
};
struct Table1 {
  std::vector<Table1Row> rows;
  double tol = 2e-3;
  std::uint64_t seed = 0;
  int first_failure = -1;  // row index
};

// I(t,n) on t in {1, 2, e, pi, 4}, n in {1..5}, optionally restricted by cfg.t / cfg.n.
Table1 run_table1(const RunConfig& cfg);
std::string table1_csv(const Table1& t);
json table1_json(const Table1& t);

// Criterion suites; each returns its checks with the tolerance used.
Report suite_table1(const Table1& t);
Report suite_resolution_u1(const RunConfig& cfg);
Report suite_closed_form(const Table1& t);
Report suite_schur(const RunConfig& cfg);
Report suite_kn(const RunConfig& cfg);
Report suite_weyl_reality(const RunConfig& cfg);
// dirac_gating = false reports the Dirac slope without letting it decide the outcome.
Report suite_moyal(const RunConfig& cfg, bool dirac_gating = true);
Report suite_sw(const RunConfig& cfg);
Report suite_bohr(const RunConfig& cfg);
Report suite_berezin(const RunConfig& cfg);
Report suite_theta(const RunConfig& cfg);

}  // namespace qg
