#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "conewolff/curve.hpp"

namespace conewolff::cli {

// Plain-text config: key = value lines, optional [section] headers, '#' or ';' comments.
// Keys are addressed as "section.key" (top-level keys have no prefix).
//
// Numbers accept decimals, fractions ("1/16") and powers of two ("2^-4").
// Lists are comma separated. Every key read through the accessors is recorded
// with its effective value (defaults included) for the config echo; keys that are
// present but never read are rejected by finish().
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  std::string origin() const { return origin_; }

  std::string get_string(const std::string& key, const std::string& def);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double def);
  int get_int(const std::string& key, int def);
  std::uint64_t get_seed(const std::string& key, std::uint64_t def);
  bool get_bool(const std::string& key, bool def);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def);
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& def);
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& def);
  // Curve spec "name" or "name(a, b)"; domain and arclength from the keys beside it.
  // `name_out` and `params_out` receive the parsed name and parameters (defaults 1, 1).
  Curve get_curve(const std::string& key, const std::string& def, std::string* name_out = nullptr,
                  Vec2* params_out = nullptr);
  // Reads a key that steers where results go but not what they are; kept out of the echo.
  std::optional<std::string> take(const std::string& key);

  // Throws ConfigError naming the first key that was given but never read.
  void finish() const;

  // Effective values of every key read, in section order.
  std::string echo() const;
  nlohmann::json echo_json() const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  std::optional<std::string> raw(const std::string& key) const;
  void record(const std::string& key, const std::string& value);

  boost::property_tree::ptree tree_;
  std::string origin_;
  std::map<std::string, std::string> used_;
  std::set<std::string> taken_;
  std::map<std::string, int> lines_;  // key -> line number in the source text
};

double parse_number(const std::string& text);

}  // namespace conewolff::cli
