#include "geomopt/config.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string_view>

#include "geomopt/errors.hpp"

namespace geomopt {
namespace {

struct KeySpec {
  std::string_view section;
  std::string_view key;
};

constexpr std::array<KeySpec, 41> kSchema{{
    {"problem", "a"},           {"problem", "y"},
    {"problem", "q"},           {"problem", "linear"},
    {"problem", "features"},    {"problem", "labels"},
    {"problem", "smooth_kind"}, {"problem", "reg_kind"},
    {"problem", "eta"},         {"problem", "c_cap"},
    {"problem", "alpha"},       {"problem", "g_eq"},
    {"problem", "h_eq"},        {"problem", "m_ineq"},
    {"problem", "r_ineq"},      {"problem", "x0"},
    {"solver", "step_policy"},  {"solver", "step"},
    {"solver", "max_iter"},     {"solver", "gradmap_tol"},
    {"solver", "record_every"}, {"experiment", "n"},
    {"experiment", "d"},        {"experiment", "dims"},
    {"experiment", "s"},        {"experiment", "ensemble"},
    {"experiment", "rho"},      {"experiment", "eta_policy"},
    {"experiment", "eta_value"}, {"experiment", "eta_multiplier"},
    {"experiment", "trials"},   {"experiment", "seed"},
    {"experiment", "noise"},    {"experiment", "separation"},
    {"experiment", "restriction"}, {"experiment", "samples"},
    {"experiment", "out"},      {"experiment", "constants_out"},
    {"experiment", "solution_out"}, {"experiment", "timestamp"},
    {"experiment", "polish_every"},
}};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Removes a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string parse_scalar(const std::string& raw, const std::string& key) {
  const std::string t = trim(raw);
  if (t.empty()) throw ConfigError("empty value for key '" + key + "'", key);
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') throw ConfigError("unterminated string for key '" + key + "'", key);
    std::string out;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      if (t[i] == '\\' && i + 2 < t.size()) {
        const char e = t[++i];
        out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
      } else {
        out += t[i];
      }
    }
    return out;
  }
  if (t.front() == '\'') {
    if (t.size() < 2 || t.back() != '\'') throw ConfigError("unterminated string for key '" + key + "'", key);
    return t.substr(1, t.size() - 2);
  }
  return t;
}

std::vector<std::string> split_items(const std::string& body, const std::string& key) {
  std::vector<std::string> items;
  std::string current;
  char quote = 0;
  for (char c : body) {
    if (quote) {
      current += c;
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
      current += c;
    } else if (c == ',') {
      items.push_back(parse_scalar(current, key));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty()) items.push_back(parse_scalar(current, key));
  return items;
}

Config::Value parse_value(const std::string& raw, const std::string& key) {
  const std::string t = trim(raw);
  Config::Value v;
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ConfigError("unterminated array for key '" + key + "'", key);
    v.is_list = true;
    v.items = split_items(t.substr(1, t.size() - 2), key);
  } else {
    v.items.push_back(parse_scalar(t, key));
  }
  return v;
}

bool known(std::string_view section, std::string_view key) {
  return std::any_of(kSchema.begin(), kSchema.end(),
                     [&](const KeySpec& s) { return s.section == section && s.key == key; });
}

}  // namespace

std::string Config::qualify(const std::string& key) {
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    if (!known(std::string_view(key).substr(0, dot), std::string_view(key).substr(dot + 1)))
      throw ConfigError("unknown configuration key '" + key + "'", key);
    return key;
  }
  for (const auto& s : kSchema)
    if (s.key == key) return std::string(s.section) + "." + key;
  throw ConfigError("unknown configuration key '" + key + "'", key);
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(source + ":" + std::to_string(lineno) + ": malformed section", t);
      section = trim(t.substr(1, t.size() - 2));
      if (section != "problem" && section != "solver" && section != "experiment")
        throw ConfigError("unknown configuration section '" + section + "'", section);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'", t);
    const std::string key = trim(t.substr(0, eq));
    if (section.empty()) throw ConfigError("key '" + key + "' appears before any section", key);
    const std::string full = section + "." + key;
    if (!known(section, key)) throw ConfigError("unknown configuration key '" + full + "'", full);
    std::string raw = t.substr(eq + 1);
    // arrays may continue over several lines
    if (trim(raw).starts_with("[")) {
      while (trim(raw).back() != ']') {
        if (!std::getline(in, line)) throw ConfigError("unterminated array for key '" + full + "'", full);
        ++lineno;
        raw += " " + trim(strip_comment(line));
      }
    }
    cfg.values_[full] = parse_value(raw, full);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", path);
  Config cfg = parse(in, path);
  cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
  return cfg;
}

void Config::set_override(const std::string& key, const std::string& raw) {
  const std::string q = qualify(key);
  Value v;
  const std::string t = trim(raw);
  if (!t.empty() && t.front() == '[') {
    v = parse_value(t, q);
  } else if (t.find(',') != std::string::npos) {
    v.is_list = true;
    v.items = split_items(t, q);
  } else {
    v.items.push_back(t);
  }
  values_[q] = std::move(v);
}

const Config::Value* Config::find(const std::string& key) const {
  const auto it = values_.find(qualify(key));
  return it == values_.end() ? nullptr : &it->second;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

std::string Config::scalar(const std::string& name) const {
  const std::string key = qualify(name);
  const Value* v = find(key);
  if (!v) throw ConfigError("missing required key '" + key + "'", key);
  if (v->is_list || v->items.size() != 1) throw ConfigError("key '" + key + "' expects a single value", key);
  return v->items.front();
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? scalar(key) : fallback;
}

double Config::get_double(const std::string& name, double fallback) const {
  if (!has(name)) return fallback;
  const std::string key = qualify(name);
  const std::string s = scalar(key);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("key '" + key + "' expects a real number, got '" + s + "'", key);
  return v;
}

namespace {

std::uint64_t to_uint(const std::string& s, const std::string& key) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("key '" + key + "' expects a nonnegative integer, got '" + s + "'", key);
  errno = 0;
  const auto v = std::strtoull(s.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError("key '" + key + "' is out of range", key);
  return v;
}

}  // namespace

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? to_uint(scalar(key), qualify(key)) : fallback;
}

bool Config::get_bool(const std::string& name, bool fallback) const {
  if (!has(name)) return fallback;
  const std::string key = qualify(name);
  const std::string s = scalar(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + s + "'", key);
}

std::vector<std::string> Config::get_list(const std::string& key, const std::vector<std::string>& fallback) const {
  const Value* v = find(key);
  return v ? v->items : fallback;
}

std::vector<std::uint64_t> Config::get_uint_list(const std::string& key,
                                                 const std::vector<std::uint64_t>& fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& item : v->items) out.push_back(to_uint(item, qualify(key)));
  return out;
}

std::string Config::get_path(const std::string& key) const {
  const std::filesystem::path p(scalar(key));
  if (p.is_absolute() || base_dir_.empty()) return p.string();
  return (std::filesystem::path(base_dir_) / p).string();
}

}  // namespace geomopt
