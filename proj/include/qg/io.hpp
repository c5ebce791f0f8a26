#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qg/core.hpp"

namespace qg {

using json = nlohmann::ordered_json;

// Locale-independent %.17g; round-trips every finite double.
std::string format17(double x);
// Compact JSON with every floating-point number written by format17.
std::string dump17(const json& j, int indent = 2);

// Complex arrays as flat [re, im, re, im, ...] lists, row-major for matrices.
json complex_to_json(const MatrixXc& m);
MatrixXc complex_from_json(const json& j, int rows, int cols);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;  // written as leading "# " lines
};
std::string to_csv(const CsvTable& t);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace qg
