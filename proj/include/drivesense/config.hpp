#pragma once

#include <map>
#include <string_view>

#include "drivesense/types.hpp"

namespace drivesense {

/// Flat key-value configuration document, TOML-style subset:
/// `key = value` lines, `[section]` headers prefixing the keys that follow
/// as `section.key`, `#` comments, double-quoted or bare string values,
/// numbers and true/false. No nesting, no arrays.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Required variants throw ConfigError when the key is absent.
  std::string require_string(const std::string& key) const;
  double require_double(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace drivesense
