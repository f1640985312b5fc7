#include "lsq/toml.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lsq {

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& token, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(line, "cannot parse number '" + token + "'");
  return v;
}

// Splits a [ ... ] body at top-level commas, honoring quoted strings.
std::vector<std::string> split_array(const std::string& body, std::size_t line) {
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (quoted) {
      cur.push_back(c);
      if (c == '"') quoted = false;
    } else if (c == '"') {
      cur.push_back(c);
      quoted = true;
    } else if (c == ',') {
      items.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) fail(line, "unterminated string in array");
  const std::string tail = strip(cur);
  if (!tail.empty()) items.push_back(tail);
  return items;
}

TomlTable::Value parse_value(const std::string& token, std::size_t line) {
  if (token.empty()) fail(line, "missing value");
  if (token == "true") return true;
  if (token == "false") return false;
  if (token.front() == '"') {
    if (token.size() < 2 || token.back() != '"') fail(line, "unterminated string");
    return token.substr(1, token.size() - 2);
  }
  if (token.front() == '[') {
    if (token.back() != ']') fail(line, "unterminated array");
    const auto items = split_array(token.substr(1, token.size() - 2), line);
    if (items.empty()) return std::vector<double>{};
    if (items.front().front() == '"') {
      std::vector<std::string> out;
      for (const auto& item : items) {
        if (item.size() < 2 || item.front() != '"' || item.back() != '"') {
          fail(line, "array mixes strings and non-strings");
        }
        out.push_back(item.substr(1, item.size() - 2));
      }
      return out;
    }
    std::vector<double> out;
    for (const auto& item : items) out.push_back(parse_number(item, line));
    return out;
  }
  return parse_number(token, line);
}

// Removes a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
  TomlTable table;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = strip(line.substr(0, eq));
    if (key.empty()) fail(lineno, "empty key");
    table.values_[key] = parse_value(strip(line.substr(eq + 1)), lineno);
  }
  return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const TomlTable::Value* TomlTable::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (const bool* b = std::get_if<bool>(v)) return *b;
  throw std::runtime_error("config key '" + key + "' is not a boolean");
}

double TomlTable::get_number(const std::string& key, double fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (const double* d = std::get_if<double>(v)) return *d;
  throw std::runtime_error("config key '" + key + "' is not a number");
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  if (const std::string* s = std::get_if<std::string>(v)) return *s;
  throw std::runtime_error("config key '" + key + "' is not a string");
}

std::vector<double> TomlTable::get_numbers(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return {};
  if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
  if (const double* d = std::get_if<double>(v)) return {*d};
  throw std::runtime_error("config key '" + key + "' is not a numeric array");
}

std::vector<std::string> TomlTable::get_strings(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return {};
  if (const auto* a = std::get_if<std::vector<std::string>>(v)) return *a;
  if (const std::string* s = std::get_if<std::string>(v)) return {*s};
  throw std::runtime_error("config key '" + key + "' is not a string array");
}

}  // namespace lsq
