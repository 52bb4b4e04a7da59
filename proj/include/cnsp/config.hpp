#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cnsp/errors.hpp"

namespace cnsp {

/// Flat key-value configuration with dotted section keys:
///   model.gamma = 2.0        # comment
/// Values are strings until typed access; lists are comma-separated.
class Config {
public:
  Config() = default;

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
  }

  static Config from_string(const std::string& text, const std::string& origin = "<string>") {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw config_error(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = trim(t.substr(0, eq));
      const std::string val = trim(t.substr(eq + 1));
      if (key.empty())
        throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
      c.kv_[key] = val;
    }
    return c;
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_str(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw config_error("missing config key '" + key + "'");
    return it->second;
  }
  std::string get_str(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  double get_num(const std::string& key) const { return parse_num(key, get_str(key)); }
  double get_num(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : parse_num(key, it->second);
  }
  long get_int(const std::string& key) const {
    return static_cast<long>(get_num(key));
  }
  long get_int(const std::string& key, long dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : static_cast<long>(parse_num(key, it->second));
  }
  bool get_bool(const std::string& key, bool dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config key '" + key + "': expected boolean, got '" + v + "'");
  }
  std::vector<double> get_list(const std::string& key) const { return parse_list(key, get_str(key)); }
  std::vector<double> get_list(const std::string& key, const std::vector<double>& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : parse_list(key, it->second);
  }

  void set(const std::string& key, const std::string& val) { kv_[key] = val; }
  const std::map<std::string, std::string>& items() const { return kv_; }

private:
  static std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
  static double parse_num(const std::string& key, const std::string& v) {
    // small rational convenience: "5/3" parses as a quotient
    const std::size_t slash = v.find('/');
    try {
      if (slash != std::string::npos)
        return std::stod(v.substr(0, slash)) / std::stod(v.substr(slash + 1));
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw config_error("config key '" + key + "': expected number, got '" + v + "'");
    }
  }
  static std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(parse_num(key, trim(cell)));
    return out;
  }

  std::map<std::string, std::string> kv_;
};

}  // namespace cnsp
