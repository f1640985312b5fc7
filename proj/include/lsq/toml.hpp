#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lsq {

// Minimal reader for the flat key = value subset of TOML the bench configs
// use: strings, numbers, booleans, homogeneous arrays, # comments. Dotted
// keys and tables are out of scope.
class TomlTable {
 public:
  using Value = std::variant<bool, double, std::string, std::vector<double>,
                             std::vector<std::string>>;

  static TomlTable parse(const std::string& text);
  static TomlTable parse_file(const std::string& path);

  bool contains(const std::string& key) const { return values_.count(key) > 0; }

  bool get_bool(const std::string& key, bool fallback) const;
  double get_number(const std::string& key, double fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_numbers(const std::string& key) const;         // empty if absent
  std::vector<std::string> get_strings(const std::string& key) const;   // empty if absent

 private:
  const Value* find(const std::string& key) const;
  std::map<std::string, Value> values_;
};

}  // namespace lsq
