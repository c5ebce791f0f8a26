#include <doctest.h>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "qg/io.hpp"

using namespace qg;

TEST_CASE("format17 round-trips doubles bit for bit") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 2000) {
    const std::uint64_t b = bits(rng);
    double x;
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    const double y = std::strtod(format17(x).c_str(), nullptr);
    std::uint64_t by;
    std::memcpy(&by, &y, sizeof y);
    CHECK(by == b);
    ++checked;
  }
  for (double x : {0.1, 1.0 / 3.0, 2e-3, 1e-300, 5e-324, std::numeric_limits<double>::max(), -0.0}) {
    const double y = std::strtod(format17(x).c_str(), nullptr);
    CHECK(std::memcmp(&x, &y, sizeof x) == 0);
  }
  CHECK(format17(0.1) == "0.10000000000000001");
  CHECK(format17(2.0) == "2");
  CHECK(format17(std::nan("")) == "NaN");
}

TEST_CASE("format17 ignores the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") || std::setlocale(LC_NUMERIC, "fr_FR.UTF-8")) {
    CHECK(format17(1.5) == "1.5");
    CHECK(to_csv({{"x"}, {{format17(0.25)}}, {}}) == "x\n0.25\n");
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
  CHECK(format17(1.5) == "1.5");
}

TEST_CASE("dump17 writes 17 significant digits and parses back exactly") {
  json j;
  j["seed"] = 42;
  j["name"] = "x";
  j["values"] = {0.1, 1.0 / 3.0, -2.5e-17};
  j["nested"] = {{"tol", 1e-9}, {"ok", true}};
  const std::string s = dump17(j);
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  const json back = json::parse(s);
  CHECK(back["seed"].get<int>() == 42);
  CHECK(back["values"][1].get<double>() == 1.0 / 3.0);
  CHECK(back["values"][2].get<double>() == -2.5e-17);
  CHECK(back["nested"]["tol"].get<double>() == 1e-9);
  // Key order is preserved.
  CHECK(s.find("\"seed\"") < s.find("\"name\""));
  CHECK(dump17(json::parse(s)) == s);
  CHECK(dump17(json::object()) == "{}");
  CHECK(dump17(json::array()) == "[]");
  CHECK(dump17({{"a", 1.5}}, 0) == "{\"a\":1.5}");
}

TEST_CASE("complex matrices round-trip through json") {
  MatrixXc m(2, 3);
  m << cplx(1, 2), cplx(0.1, -0.3), cplx(1.0 / 7, 0), cplx(-1e-300, 5), cplx(3, 3), cplx(0, -1.0 / 3);
  const json j = complex_to_json(m);
  CHECK(j.size() == 12);
  CHECK(j[2].get<double>() == 0.1);
  CHECK(j[3].get<double>() == -0.3);
  const MatrixXc back = complex_from_json(json::parse(dump17(j)), 2, 3);
  CHECK(back == m);
  CHECK_THROWS(complex_from_json(j, 3, 3));
}

TEST_CASE("csv layout and file io") {
  CsvTable t;
  t.comments = {"seed=1"};
  t.header = {"t", "n", "I"};
  t.rows = {{"1", "2", format17(0.25)}, {"2", "3", format17(3.0)}};
  const std::string csv = to_csv(t);
  CHECK(csv == "# seed=1\nt,n,I\n1,2,0.25\n2,3,3\n");
  const std::string path = (std::filesystem::temp_directory_path() / "qg_io_test.csv").string();
  write_text(path, csv);
  CHECK(read_text(path) == csv);
  std::filesystem::remove(path);
  CHECK_THROWS(read_text("/nonexistent/dir/file.csv"));
  CHECK_THROWS(write_text("/nonexistent/dir/file.csv", "x"));
}
