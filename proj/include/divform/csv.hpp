#pragma once

#include <string>
#include <vector>

namespace divform {

/// Decimal-point formatting with exponent notation for small magnitudes
/// (|v| < 1e-4, v != 0); locale-independent.
std::string format_number(double v);

/// RFC-4180-style quoting: fields containing comma, quote, or newline are
/// quoted with embedded quotes doubled.
std::string csv_field(const std::string& s);

/// Writes header + rows; every row must match the header width.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace divform
