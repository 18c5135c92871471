#pragma once

// Run configuration: INI text with one section per module. The canonical form
// is the sorted list of `section.key=value` lines; its SHA-256 is the config
// hash and its first 16 hex digits the run id.

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mup/error.hpp"

namespace mup {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

class RunConfig {
 public:
  static inline const std::set<std::string> kSections{"run",   "grid",   "embedding", "family",
                                                      "experiment", "budget", "tolerances"};

  RunConfig() = default;

  static RunConfig parse(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
      boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw Error(ErrorCode::configuration, std::string("malformed config: ") + e.message() + " (line " +
                                                std::to_string(e.line()) + ")");
    }
    RunConfig c;
    for (const auto& [section, body] : tree) {
      if (!body.data().empty()) throw Error(ErrorCode::configuration, "malformed config: key outside a section: " + section);
      if (!kSections.count(section)) throw Error(ErrorCode::configuration, "unknown config section: " + section);
      for (const auto& [key, value] : body) c.set(section + "." + key, value.data());
    }
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::configuration, "cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  void set(const std::string& key, const std::string& value) { values_[key] = trim(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  std::string require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::configuration, "missing config key " + key);
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? to_double(key, require(key)) : fallback;
  }
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const double v = to_double(key, require(key));
    if (v != static_cast<double>(static_cast<std::int64_t>(v)))
      throw Error(ErrorCode::configuration, "config key " + key + " must be an integer");
    return static_cast<std::int64_t>(v);
  }
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback = {}) const {
    if (!has(key)) return fallback;
    std::string s = require(key);
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(to_double(key, tok));
    return out;
  }

  /// Sorted `section.key=value` lines.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
  }
  std::string hash() const { return sha256_hex(canonical()); }
  std::string run_id() const { return hash().substr(0, 16); }

  std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("run.seed", 1)); }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
  static double to_double(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw Error(ErrorCode::configuration, "config key " + key + ": not a number: '" + s + "'");
    return v;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace mup
