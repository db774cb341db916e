#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "conewolff/errors.hpp"

namespace conewolff::cli {

namespace {

std::string num(double v, int digits = 6) {
  char buf[48];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, r.ptr);
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) throw Error("IoError", "cannot write " + p.string());
}

}  // namespace

nlohmann::json Check::to_json() const {
  nlohmann::json j = {{"name", name}, {"value", value}, {"relation", relation}, {"bound", bound}, {"pass", pass}};
  if (relation == "in") j["upper"] = upper;
  return j;
}

Check check_in(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, "in", lo, hi, value >= lo && value <= hi};
}

std::string describe(const Check& c) {
  std::ostringstream o;
  o << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.value << ' ' << c.relation << ' ';
  if (c.relation == "in")
    o << '[' << c.bound << ", " << c.upper << ']';
  else
    o << c.bound;
  return o.str();
}

Check check_le(std::string name, double value, double bound) {
  return {std::move(name), value, "<=", bound, 0.0, value <= bound};
}

Check check_ge(std::string name, double value, double bound) {
  return {std::move(name), value, ">=", bound, 0.0, value >= bound};
}

Check check_true(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, "==", 1.0, 0.0, ok}; }

bool ExperimentOutput::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string render_svg(const PlotSpec& spec) {
  const double W = 640, H = 420, ml = 70, mr = 150, mt = 40, mb = 50;
  auto tx = [&](double v) { return spec.logx ? std::log2(v) : v; };
  auto ty = [&](double v) { return spec.logy ? std::log2(v) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double X = tx(s.x[i]), Y = ty(s.y[i]);
      if (!std::isfinite(X) || !std::isfinite(Y)) continue;
      x0 = std::min(x0, X), x1 = std::max(x1, X), y0 = std::min(y0, Y), y1 = std::max(y1, Y);
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto px = [&](double X) { return ml + (X - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double Y) { return H - mb - (Y - y0) / (y1 - y0) * (H - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title) << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double X = x0 + (x1 - x0) * i / 4, Y = y0 + (y1 - y0) * i / 4;
    o << "<text x=\"" << num(px(X)) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">"
      << (spec.logx ? "2^" : "") << num(X, 3) << "</text>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << num(py(Y) + 4) << "\" text-anchor=\"end\">" << (spec.logy ? "2^" : "")
      << num(Y, 3) << "</text>\n";
  }
  o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(spec.xlabel)
    << "</text>\n";
  o << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (mt + H - mb) / 2 << ")\">" << escape(spec.ylabel) << "</text>\n";
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* col = colors[k % 6];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double X = tx(s.x[i]), Y = ty(s.y[i]);
      if (std::isfinite(X) && std::isfinite(Y)) o << num(px(X)) << ',' << num(py(Y)) << ' ';
    }
    o << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double X = tx(s.x[i]), Y = ty(s.y[i]);
      if (std::isfinite(X) && std::isfinite(Y))
        o << "<circle cx=\"" << num(px(X)) << "\" cy=\"" << num(py(Y)) << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
    }
    o << "<text x=\"" << W - mr + 10 << "\" y=\"" << mt + 16 * (k + 1) << "\" fill=\"" << col << "\">"
      << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

nlohmann::json build_report(const std::string& experiment, const nlohmann::json& config, const ExperimentOutput& out) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : out.checks) checks.push_back(c.to_json());
  return {{"experiment", experiment},
          {"config", config},
          {"results", out.results},
          {"checks", checks},
          {"asserted", !out.checks.empty()},
          {"passed", out.passed()}};
}

std::filesystem::path write_report(const std::filesystem::path& root, const std::string& experiment,
                                   const nlohmann::json& report, const ExperimentOutput& out,
                                   const std::string& config_echo, const nlohmann::json& metadata) {
  const std::string stamp = metadata.value("stamp", "run");
  std::filesystem::path dir = root / (experiment + "-" + stamp);
  for (int i = 1; std::filesystem::exists(dir); ++i) dir = root / (experiment + "-" + stamp + "-" + std::to_string(i));
  std::filesystem::create_directories(dir / "plots");
  write_file(dir / "report.json", report.dump(2) + "\n");
  write_file(dir / "data.csv", out.csv);
  write_file(dir / "config.echo", config_echo);
  write_file(dir / "metadata.json", metadata.dump(2) + "\n");
  for (const auto& p : out.plots) write_file(dir / "plots" / (p.name + ".svg"), render_svg(p));
  return dir;
}

}  // namespace conewolff::cli
