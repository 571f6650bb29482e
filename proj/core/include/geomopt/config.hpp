#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geomopt {

/// Key-value configuration read from a TOML subset: [section] headers,
/// `key = value` lines with strings, numbers, booleans and one-level arrays,
/// and '#' comments. Keys are stored as "section.key"; every key must appear
/// in the known schema, otherwise ConfigError names it.
class Config {
 public:
  struct Value {
    std::vector<std::string> items;
    bool is_list = false;
  };

  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  /// Command-line override. `key` is "section.key" or a bare key, which is
  /// resolved through the schema. Commas in `raw` separate list items.
  void set_override(const std::string& key, const std::string& raw);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;
  std::vector<std::uint64_t> get_uint_list(const std::string& key, const std::vector<std::uint64_t>& fallback) const;
  /// String value read as a path; relative paths resolve against the config file's directory.
  std::string get_path(const std::string& key) const;

  const std::map<std::string, Value>& values() const noexcept { return values_; }

  /// "section.key" for a bare or qualified key; throws ConfigError if unknown.
  static std::string qualify(const std::string& key);

 private:
  const Value* find(const std::string& key) const;
  std::string scalar(const std::string& key) const;

  std::map<std::string, Value> values_;
  std::string base_dir_;
};

}  // namespace geomopt
