#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedkrr {

// Parse or validation failure; the message carries origin and line where known.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key=value configuration. '#' starts a comment, blank lines are
// ignored, duplicate keys are an error. Every get_* records the value it
// resolved to (explicit or default), so the manifest can list the complete
// effective configuration including filled-in defaults.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_str(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<std::string> get_strs(const std::string& key,
                                    const std::vector<std::string>& fallback) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key,
                                      const std::vector<std::uint64_t>& fallback) const;

  // Keys present in the source that no getter ever consumed (usually typos).
  std::vector<std::string> unused_keys() const;
  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  const std::string& origin() const { return origin_; }
  const std::string& raw_text() const { return raw_; }

 private:
  std::string require_value(const std::string& key) const;
  std::map<std::string, std::string> kv_;
  mutable std::map<std::string, std::string> resolved_;
  mutable std::map<std::string, bool> consumed_;
  std::string origin_ = "<defaults>";
  std::string raw_;
};

}  // namespace fedkrr
