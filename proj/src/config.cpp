#include "fedkrr/config.hpp"

#include <cerrno>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fedkrr/csv.hpp"

namespace fedkrr {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "': '" + value + "' is not a number");
  return x;
}

long long parse_ll(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "': '" + value + "' is not an integer");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || *end != '\0' || value.find('-') != std::string::npos)
    throw ConfigError("config: key '" + key + "': '" + value +
                      "' is not an unsigned integer");
  return std::uint64_t(x);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_string(buf.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  cfg.raw_ = text;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.kv_.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                        "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::require_value(const std::string& key) const {
  consumed_[key] = true;
  return kv_.at(key);
}

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
  const std::string v = has(key) ? require_value(key) : fallback;
  resolved_[key] = v;
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  const double v = has(key) ? parse_double(key, require_value(key)) : fallback;
  resolved_[key] = csv::format(v);
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  const long long v = has(key) ? parse_ll(key, require_value(key)) : fallback;
  if (v < INT_MIN || v > INT_MAX)
    throw ConfigError("config: key '" + key + "': value out of int range");
  resolved_[key] = std::to_string(v);
  return int(v);
}

long Config::get_long(const std::string& key, long fallback) const {
  const long long v = has(key) ? parse_ll(key, require_value(key)) : fallback;
  resolved_[key] = std::to_string(v);
  return long(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const std::uint64_t v = has(key) ? parse_u64(key, require_value(key)) : fallback;
  resolved_[key] = std::to_string(v);
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  bool v = fallback;
  if (has(key)) {
    const std::string s = require_value(key);
    if (s == "true" || s == "1")
      v = true;
    else if (s == "false" || s == "0")
      v = false;
    else
      throw ConfigError("config: key '" + key + "': '" + s + "' is not a boolean");
  }
  resolved_[key] = v ? "true" : "false";
  return v;
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& fallback) const {
  std::vector<double> v;
  if (has(key)) {
    for (const auto& item : split(require_value(key), ','))
      v.push_back(parse_double(key, item));
  } else {
    v = fallback;
  }
  std::string joined;
  for (size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + csv::format(v[i]);
  resolved_[key] = joined;
  return v;
}

std::vector<std::string> Config::get_strs(const std::string& key,
                                          const std::vector<std::string>& fallback) const {
  std::vector<std::string> v = has(key) ? split(require_value(key), ',') : fallback;
  std::string joined;
  for (size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + v[i];
  resolved_[key] = joined;
  return v;
}

std::vector<std::uint64_t> Config::get_u64s(
    const std::string& key, const std::vector<std::uint64_t>& fallback) const {
  std::vector<std::uint64_t> v;
  if (has(key)) {
    for (const auto& item : split(require_value(key), ','))
      v.push_back(parse_u64(key, item));
  } else {
    v = fallback;
  }
  std::string joined;
  for (size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + std::to_string(v[i]);
  resolved_[key] = joined;
  return v;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : kv_)
    if (!consumed_.count(key)) out.push_back(key);
  return out;
}

}  // namespace fedkrr
