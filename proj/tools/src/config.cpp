#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include "conewolff/errors.hpp"

namespace conewolff::cli {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (boost::algorithm::trim_copy(s).empty()) return out;
  boost::algorithm::split(out, s, boost::algorithm::is_any_of(","));
  for (auto& x : out) boost::algorithm::trim(x);
  return out;
}

std::string join(const std::vector<std::string>& v) { return boost::algorithm::join(v, ", "); }

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = boost::algorithm::trim_copy(text);
  static const std::regex pow2(R"(^2\^\s*([+-]?\d+)$)");
  std::smatch m;
  if (std::regex_match(t, m, pow2)) return std::ldexp(1.0, std::stoi(m[1]));
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const double num = parse_number(t.substr(0, slash)), den = parse_number(t.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("zero denominator");
    return num / den;
  }
  double v = 0.0;
  const char* end = t.data() + t.size();
  const auto r = std::from_chars(t.data(), end, v);
  if (t.empty() || r.ec != std::errc() || r.ptr != end) throw std::invalid_argument("not a number");
  return v;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  // The tree does not keep positions; a second light pass maps keys to lines.
  std::istringstream again(text);
  std::string line, section;
  for (int no = 1; std::getline(again, line); ++no) {
    boost::algorithm::trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line[0] == '[') {
      section = boost::algorithm::trim_copy(line.substr(1, line.find(']') - 1));
      continue;
    }
    const std::string key = boost::algorithm::trim_copy(line.substr(0, line.find('=')));
    c.lines_[section.empty() ? key : section + "." + key] = no;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& key) const { return raw(key).has_value(); }

std::optional<std::string> Config::raw(const std::string& key) const {
  const auto node = tree_.get_child_optional(key);
  if (!node || !node->empty()) return std::nullopt;
  return boost::algorithm::trim_copy(node->data());
}

void Config::record(const std::string& key, const std::string& value) { used_[key] = value; }

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = lines_.find(key);
  const std::string where = it == lines_.end() ? origin_ : origin_ + ":" + std::to_string(it->second);
  throw ConfigError(where + ": field '" + key + "': " + message);
}

std::string Config::get_string(const std::string& key, const std::string& def) {
  const std::string v = raw(key).value_or(def);
  record(key, v);
  return v;
}

std::string Config::require_string(const std::string& key) {
  const auto v = raw(key);
  if (!v || v->empty()) fail(key, "required");
  record(key, *v);
  return *v;
}

double Config::get_double(const std::string& key, double def) {
  const auto v = raw(key);
  if (!v) {
    record(key, format_double(def));
    return def;
  }
  double x = 0.0;
  try {
    x = parse_number(*v);
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + *v + "'");
  }
  if (!std::isfinite(x)) fail(key, "must be finite");
  record(key, *v);
  return x;
}

int Config::get_int(const std::string& key, int def) {
  const double x = get_double(key, def);
  if (x != std::floor(x) || std::abs(x) > 1e9) fail(key, "expected an integer");
  return static_cast<int>(x);
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t def) {
  const auto v = raw(key);
  if (!v) {
    record(key, std::to_string(def));
    return def;
  }
  std::uint64_t x = 0;
  const char* end = v->data() + v->size();
  const auto r = std::from_chars(v->data(), end, x);
  if (v->empty() || r.ec != std::errc() || r.ptr != end) fail(key, "expected an unsigned integer, got '" + *v + "'");
  record(key, *v);
  return x;
}

bool Config::get_bool(const std::string& key, bool def) {
  const auto v = raw(key);
  if (!v) {
    record(key, def ? "true" : "false");
    return def;
  }
  const std::string l = boost::algorithm::to_lower_copy(*v);
  bool b = false;
  if (l == "true" || l == "yes" || l == "1" || l == "on")
    b = true;
  else if (!(l == "false" || l == "no" || l == "0" || l == "off"))
    fail(key, "expected true or false, got '" + *v + "'");
  record(key, b ? "true" : "false");
  return b;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& def) {
  const auto v = raw(key);
  if (!v) {
    std::vector<std::string> s;
    for (double d : def) s.push_back(format_double(d));
    record(key, join(s));
    return def;
  }
  std::vector<double> out;
  for (const auto& item : split_list(*v)) {
    try {
      out.push_back(parse_number(item));
    } catch (const std::exception&) {
      fail(key, "list entry '" + item + "' is not a number");
    }
  }
  if (out.empty()) fail(key, "empty list");
  record(key, join(split_list(*v)));
  return out;
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& def) {
  std::vector<double> d(def.begin(), def.end());
  std::vector<int> out;
  for (double x : get_doubles(key, d)) {
    if (x != std::floor(x) || std::abs(x) > 1e9) fail(key, "expected integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key, const std::vector<std::string>& def) {
  const auto v = raw(key);
  const std::vector<std::string> out = v ? split_list(*v) : def;
  if (v && out.empty()) fail(key, "empty list");
  record(key, join(out));
  return out;
}

Curve Config::get_curve(const std::string& key, const std::string& def, std::string* name_out, Vec2* params_out) {
  const std::string spec = get_string(key, def);
  static const std::regex form(R"(^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(spec, m, form)) fail(key, "expected name or name(a, b), got '" + spec + "'");
  std::vector<double> args;
  for (const auto& a : split_list(m[2])) {
    try {
      args.push_back(parse_number(a));
    } catch (const std::exception&) {
      fail(key, "curve parameter '" + a + "' is not a number");
    }
  }
  if (args.size() > 2) fail(key, "at most two curve parameters");
  const std::vector<double> dom = get_doubles(key + "_domain", {-1.0, 1.0});
  if (dom.size() != 2 || !(dom[0] < dom[1])) fail(key + "_domain", "expected lo, hi with lo < hi");
  const bool arclength = get_bool(key + "_arclength", true);
  const Vec2 ab(args.size() > 0 ? args[0] : 1.0, args.size() > 1 ? args[1] : 1.0);
  if (name_out) *name_out = m[1];
  if (params_out) *params_out = ab;
  try {
    return curve_by_name(m[1], ab(0), ab(1), arclength, {dom[0], dom[1]});
  } catch (const Error& e) {
    fail(key, e.what());
  }
}

std::optional<std::string> Config::take(const std::string& key) {
  taken_.insert(key);
  return raw(key);
}

void Config::finish() const {
  for (const auto& [name, node] : tree_) {
    if (node.empty()) {
      if (!used_.count(name) && !taken_.count(name)) fail(name, "unknown key for this experiment");
      continue;
    }
    for (const auto& [sub, leaf] : node) {
      const std::string key = name + "." + sub;
      if (!used_.count(key) && !taken_.count(key)) fail(key, "unknown key for this experiment");
    }
  }
}

std::string Config::echo() const {
  std::ostringstream o;
  std::string section;
  for (const auto& [key, value] : used_)
    if (key.find('.') == std::string::npos) o << key << " = " << value << '\n';
  for (const auto& [key, value] : used_) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) continue;
    if (key.substr(0, dot) != section) {
      section = key.substr(0, dot);
      o << "\n[" << section << "]\n";
    }
    o << key.substr(dot + 1) << " = " << value << '\n';
  }
  return o.str();
}

nlohmann::json Config::echo_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : used_) j[key] = value;
  return j;
}

}  // namespace conewolff::cli
