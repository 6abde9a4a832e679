#include "divform/config.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace divform {

namespace {
std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line_no);
      cfg.sections_[section];  // allow empty sections
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", line_no);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (section.empty()) throw ConfigError("key before any [section]", line_no);
    auto [it, inserted] = cfg.sections_[section].try_emplace(key, Entry{value, line_no});
    if (!inserted) throw ConfigError("duplicate key '" + key + "'", line_no);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path, 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const Config::Entry* Config::find(const std::string& section,
                                  const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  k->second.consumed = true;
  return &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) throw ConfigError("missing required key [" + section + "] " + key, 0);
  return e->value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) throw ConfigError("missing required key [" + section + "] " + key, 0);
  size_t pos = 0;
  double v;
  try {
    v = std::stod(e->value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not a number", e->line);
  }
  if (pos != e->value.size())
    throw ConfigError("key '" + key + "' has trailing characters", e->line);
  return v;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const {
  double v = get_double(section, key);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("key '" + key + "' must be an integer", 0);
  return i;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "on" || e->value == "true" || e->value == "1") return true;
  if (e->value == "off" || e->value == "false" || e->value == "0") return false;
  throw ConfigError("key '" + key + "' must be on/off", e->line);
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) throw ConfigError("missing required key [" + section + "] " + key, 0);
  std::string s = e->value;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof())
    throw ConfigError("key '" + key + "' is not a numeric list", e->line);
  return out;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  return has(section, key) ? get_list(section, key) : fallback;
}

void Config::ensure_consumed() const {
  for (const auto& [sec, keys] : sections_)
    for (const auto& [key, entry] : keys)
      if (!entry.consumed)
        throw ConfigError("unknown key '" + key + "' in section [" + sec + "]",
                          entry.line);
}

std::string Config::digest() const {
  // FNV-1a over the canonical (sorted) section/key/value serialization.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x1f;
    h *= 1099511628211ull;
  };
  for (const auto& [sec, keys] : sections_) {
    mix(sec);
    for (const auto& [key, entry] : keys) {
      mix(key);
      mix(entry.value);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace divform
