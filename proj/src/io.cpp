#include "qg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qg {

std::string format17(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "NaN" : (x > 0 ? "Infinity" : "-Infinity");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void dump_rec(const json& j, int indent, int level, std::string& out) {
  const std::string pad = indent > 0 ? std::string(indent * (level + 1), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(indent * level, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump_rec(it.value(), indent, level + 1, out);
      }
      out += nl + pad_close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) out += nl + pad;
        first = false;
        dump_rec(v, indent, level + 1, out);
      }
      if (!flat) out += nl + pad_close;
      out += "]";
      return;
    }
    case json::value_t::number_float:
      out += format17(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump17(const json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

json complex_to_json(const MatrixXc& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      a.push_back(m(r, c).real());
      a.push_back(m(r, c).imag());
    }
  return a;
}

MatrixXc complex_from_json(const json& j, int rows, int cols) {
  require(j.is_array() && static_cast<int>(j.size()) == 2 * rows * cols, "complex_from_json: size mismatch");
  MatrixXc m(rows, cols);
  int k = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, k += 2) m(r, c) = cplx(j[k].get<double>(), j[k + 1].get<double>());
  return m;
}

std::string to_csv(const CsvTable& t) {
  std::ostringstream os;
  for (const auto& c : t.comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot open " + path + " for writing");
  f << text;
  require(static_cast<bool>(f), "write to " + path + " failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace qg
