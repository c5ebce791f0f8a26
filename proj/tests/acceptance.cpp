// Runs every acceptance criterion and prints one PASS/FAIL line each. Exit status 1 if any fails.
// Usage: acceptance [criterion ...]

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>

#include "suites.hpp"

using namespace qg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> notes;
};

// Worst gating check relative to its tolerance, and every failing or informational line.
Outcome judge(const Report& r) {
  Outcome o;
  o.pass = r.pass();
  std::size_t gating = 0;
  for (const auto& c : r.checks) {
    gating += c.gating;
    if (c.gating && c.pass()) continue;
    std::string line = c.gating ? "  failed: " : "  info:   ";
    line += c.name + " = " + format17(c.value);
    line += c.target ? ", target " + format17(*c.target) + " +- " + format17(c.tol) : ", tolerance " + format17(c.tol);
    if (!c.gating) line += c.pass() ? " (within)" : " (outside)";
    o.notes.push_back(line);
  }
  o.summary = std::to_string(gating) + " checks";
  return o;
}

Outcome with_runtime(Outcome o, double secs, double limit) {
  char buf[96];
  std::snprintf(buf, sizeof buf, ", runtime %.1f s (limit %.0f s)", secs, limit);
  o.summary += buf;
  if (!(secs < limit)) {
    o.pass = false;
    o.notes.push_back("  failed: runtime over the limit");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto wanted = [&](int k) { return only.empty() || only.count(k); };

  RunConfig cfg;
  Table1 table;
  double table_secs = 0;
  if (wanted(1) || wanted(3)) {
    const auto t0 = Clock::now();
    table = run_table1(cfg);
    table_secs = seconds_since(t0);
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Table 1 reproduction", [&] { return with_runtime(judge(suite_table1(table)), table_secs, 60); }},
      {"U(1) resolution constant", [&] { return judge(suite_resolution_u1(cfg)); }},
      {"closed form I(t,n) = t^3 n / 8", [&] { return judge(suite_closed_form(table)); }},
      {"SU(2) Schur residual",
       [&] {
         const auto t0 = Clock::now();
         const Report r = suite_schur(cfg);
         return with_runtime(judge(r), seconds_since(t0), 120);
       }},
      {"KN calculus", [&] { return judge(suite_kn(cfg)); }},
      {"Weyl reality", [&] { return judge(suite_weyl_reality(cfg)); }},
      {"semiclassical rates", [&] { return judge(suite_moyal(cfg, true)); }},
      {"Stratonovich-Weyl calculus, j <= 4", [&] { return judge(suite_sw(cfg)); }},
      {"Bohr calculus", [&] { return judge(suite_bohr(cfg)); }},
      {"U(1) Berezin smoothing", [&] { return judge(suite_berezin(cfg)); }},
      {"theta3 identities", [&] { return judge(suite_theta(cfg)); }},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!wanted(int(k) + 1)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, "error", {std::string("  error: ") + e.what()}};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first << " (" << o.summary << ")\n";
    for (const auto& n : o.notes) std::cout << n << "\n";
    std::cout.flush();
  }
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
