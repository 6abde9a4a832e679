#include "divform/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace divform {

std::string format_number(double v) {
  char buf[64];
  if (v != 0.0 && std::isfinite(v) && std::abs(v) < 1e-4)
    std::snprintf(buf, sizeof(buf), "%.12e", v);
  else
    std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  auto emit = [&f](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) f << ',';
      f << csv_field(cells[i]);
    }
    f << '\n';
  };
  emit(header);
  for (const auto& r : rows) {
    if (r.size() != header.size())
      throw std::runtime_error("csv row width mismatch in " + path);
    emit(r);
  }
}

}  // namespace divform
