#pragma once

// Flat `key = value` configuration files. Blank lines and lines starting
// with '#' are ignored; a key may appear once.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "lexshift/common.hpp"
#include "lexshift/io.hpp"

namespace lexshift {

class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text, std::filesystem::path base_dir = {}) {
    KeyValueConfig cfg;
    cfg.base_dir_ = std::move(base_dir);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = trim(text.substr(pos, end - pos));
      ++line_no;
      pos = end + 1;
      if (line.empty() || line.front() == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw InvalidInput("config line " + std::to_string(line_no) + ": expected key = value");
      std::string key(trim(line.substr(0, eq)));
      std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw InvalidInput("config line " + std::to_string(line_no) + ": empty key");
      if (!cfg.values_.emplace(key, value).second)
        throw InvalidInput("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return cfg;
  }

  static KeyValueConfig load(const std::filesystem::path& path) {
    std::string text;
    for (const auto& l : io::read_lines(path)) text += l + "\n";
    return parse(text, std::filesystem::absolute(path).parent_path());
  }

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  [[nodiscard]] std::string get(const std::string& key, const std::string& fallback) const {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  /// Relative paths resolve against the directory of the config file.
  [[nodiscard]] std::filesystem::path get_path(const std::string& key, const std::filesystem::path& fallback = {}) const {
    std::filesystem::path p = has(key) ? std::filesystem::path(get(key, "")) : fallback;
    if (p.empty() || p.is_absolute() || base_dir_.empty()) return p;
    return base_dir_ / p;
  }

  [[nodiscard]] double get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return number<double>(key);
  }
  [[nodiscard]] std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    return number<std::int64_t>(key);
  }
  [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    return number<std::uint64_t>(key);
  }
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = get(key, "");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidInput("config key '" + key + "': expected a boolean, got '" + v + "'");
  }

  /// Keys present in the file but never read.
  [[nodiscard]] std::set<std::string> unused_keys() const {
    std::set<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) out.insert(k);
    return out;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  template <class T>
  T number(const std::string& key) const {
    std::string v = get(key, "");
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
      throw InvalidInput("config key '" + key + "': cannot parse '" + v + "'");
    return out;
  }

  std::map<std::string, std::string> values_;
  std::filesystem::path base_dir_;
  mutable std::set<std::string> used_;
};

}  // namespace lexshift
