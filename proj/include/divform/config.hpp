#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace divform {

struct ConfigError : std::runtime_error {
  int line = 0;
  ConfigError(const std::string& msg, int line_no)
      : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"),
        line(line_no) {}
};

/// Strict sectioned key-value document:
///   # comment
///   [section]
///   key = value
/// Keys must be consumed by the dispatcher; ensure_consumed() reports the
/// first key nobody asked for (catching typos in tolerance names).
class Config {
 public:
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  // Comma- or whitespace-separated list of numbers.
  std::vector<double> get_list(const std::string& section, const std::string& key) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  void ensure_consumed() const;  // throws ConfigError on the first unused key

  // Canonical digest of the parsed document (stable under key reordering).
  std::string digest() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };
  const Entry* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace divform
