#include "conewolff/curve.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "conewolff/errors.hpp"
#include "conewolff/frenet.hpp"
#include "conewolff/numdiff.hpp"
#include "conewolff/quadrature.hpp"

namespace conewolff {

Curve::Curve(std::string name, Jet jet, int supplied_order, Interval domain, bool arclength,
             Displacement displacement)
    : name_(std::move(name)),
      jet_(std::move(jet)),
      supplied_order_(supplied_order),
      domain_(domain),
      arclength_(arclength),
      displacement_(std::move(displacement)) {
  if (supplied_order_ < 0) throw DomainError("curve must supply at least order 0");
  if (!(domain_.hi > domain_.lo)) throw DomainError("curve domain must be a nondegenerate interval");
}

Vec3 Curve::derivative(double s, int order) const {
  if (order < 0 || order > kMaxOrder) throw DomainError("derivative order outside 0..5");
  if (order <= supplied_order_) return jet_(s, order);
  return richardson_derivative([&](double x) { return Vec3(derivative(x, order - 1)); }, s, kFdStep);
}

Vec3 Curve::displacement(double s, double s0) const {
  if (displacement_) return displacement_(s, s0);
  return eval(s) - eval(s0);
}

Curve Curve::with_domain(Interval d) const {
  Curve c = *this;
  c.domain_ = d;
  return c;
}

namespace {

double falling(int n, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= (n - i);
  return r;
}

double mono(double s, int n, int j) {
  if (j > n) return 0.0;
  return falling(n, j) * std::pow(s, n - j);
}

// s^n - s0^n without cancellation.
double mono_diff(double s, double s0, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::pow(s, i) * std::pow(s0, n - 1 - i);
  return (s - s0) * acc;
}

Curve polynomial_curve(std::string name, int p1, int p2, int p3, double c1, double c2, double c3, Interval d,
                       bool arclength = false) {
  auto jet = [=](double s, int j) {
    return Vec3(c1 * (p1 > 0 ? mono(s, p1, j) : 0.0), c2 * (p2 > 0 ? mono(s, p2, j) : 0.0),
                c3 * (p3 > 0 ? mono(s, p3, j) : 0.0));
  };
  auto disp = [=](double s, double s0) {
    return Vec3(c1 * (p1 > 0 ? mono_diff(s, s0, p1) : 0.0), c2 * (p2 > 0 ? mono_diff(s, s0, p2) : 0.0),
                c3 * (p3 > 0 ? mono_diff(s, s0, p3) : 0.0));
  };
  return Curve(std::move(name), jet, Curve::kMaxOrder, d, arclength, disp);
}

Curve trig_helix(std::string name, double a, double b, double w, bool arclength, Interval d) {
  auto jet = [=](double s, int j) {
    const double wj = std::pow(w, j);
    const double ph = w * s + j * M_PI_2;
    double z = 0.0;
    if (j == 0) z = b * w * s;
    if (j == 1) z = b * w;
    return Vec3(a * wj * std::cos(ph), a * wj * std::sin(ph), z);
  };
  auto disp = [=](double s, double s0) {
    const double m = 0.5 * w * (s + s0);
    const double h = std::sin(0.5 * w * (s - s0));
    return Vec3(-2.0 * a * std::sin(m) * h, 2.0 * a * std::cos(m) * h, b * w * (s - s0));
  };
  return Curve(std::move(name), jet, Curve::kMaxOrder, d, arclength, disp);
}

}  // namespace

Curve helix(double a, double b, bool arclength, Interval domain) {
  const double c = std::hypot(a, b);
  if (c == 0.0) throw DomainError("helix needs (a,b) != 0");
  std::ostringstream nm;
  nm << "helix(" << a << "," << b << (arclength ? ",arclength)" : ")");
  return trig_helix(nm.str(), a, b, arclength ? 1.0 / c : 1.0, arclength, domain);
}

Curve helix_family(double a, double b, Interval domain) {
  // (a cos 2 pi s, a sin 2 pi s, b s): the z-rate is b, so pass b / (2 pi) to the w-scaled form.
  std::ostringstream nm;
  nm << "helix_family(" << a << "," << b << ")";
  const double w = 2.0 * M_PI;
  return trig_helix(nm.str(), a, b / w, w, false, domain);
}

Curve twisted_cubic(Interval domain) { return polynomial_curve("twisted_cubic", 1, 2, 3, 1, 1, 1, domain); }
Curve quartic_curve(Interval domain) { return polynomial_curve("quartic", 1, 2, 4, 1, 1, 1, domain); }
Curve straight_line(Interval domain) { return polynomial_curve("line", 1, 0, 0, 1, 0, 0, domain, true); }
Curve quadratic_normal_form(Interval domain) {
  return polynomial_curve("normal_form", 1, 2, 0, 1, 0.5, 0, domain);
}
Curve planar_circle(Interval domain) { return trig_helix("circle", 1.0, 0.0, 1.0, true, domain); }

Curve curve_by_name(const std::string& name, double a, double b, bool arclength, Interval domain) {
  if (name == "helix") return helix(a, b, arclength, domain);
  if (name == "helix_family") return helix_family(a, b, domain);
  if (name == "twisted_cubic") {
    auto c = twisted_cubic(domain);
    return arclength ? reparametrize_by_arclength(c, 1e-10, 0.0) : c;
  }
  if (name == "quartic") return quartic_curve(domain);
  if (name == "circle") return planar_circle(domain);
  if (name == "line") return straight_line(domain);
  if (name == "normal_form") return quadratic_normal_form(domain);
  throw DomainError("unknown curve '" + name + "'");
}

std::vector<std::string> benchmark_curve_names() {
  return {"circle", "helix", "helix_family", "line", "normal_form", "quartic", "twisted_cubic"};
}

namespace {

struct ArclengthTable {
  Curve base;
  std::vector<double> t;  // old parameter nodes
  std::vector<double> S;  // cumulative length at nodes, shifted by origin
  double tol;

  double speed(double x) const { return base.derivative(x, 1).norm(); }

  double length_between(double a, double b) const {
    QuadOptions o;
    o.abs_tol = tol * 1e-3;
    o.rel_tol = 1e-14;
    return integrate_gk15([&](double x) { return cplx(speed(x), 0.0); }, a, b, o).value.real();
  }

  double old_param(double s) const {
    auto it = std::upper_bound(S.begin(), S.end(), s);
    std::size_t i = it == S.begin() ? 0 : static_cast<std::size_t>(it - S.begin()) - 1;
    if (i + 1 >= S.size()) i = S.size() - 2;
    double lo = t[i], hi = t[i + 1];
    // Monotone (linear) interpolation seeds Newton; the bracket guards it.
    double x = lo + (hi - lo) * (s - S[i]) / (S[i + 1] - S[i]);
    if (s <= S.front()) x = t.front() + (s - S.front()) / speed(t.front());
    if (s >= S.back()) x = t.back() + (s - S.back()) / speed(t.back());
    const bool extrapolate = s < S.front() || s > S.back();
    for (int it2 = 0; it2 < 50; ++it2) {
      const double f = S[i] + length_between(t[i], x) - s;
      const double step = f / speed(x);
      double nx = x - step;
      if (!extrapolate) {
        if (f > 0) hi = std::min(hi, x); else lo = std::max(lo, x);
        if (nx <= lo || nx >= hi) nx = 0.5 * (lo + hi);
      }
      if (std::abs(nx - x) < 1e-15 * (1.0 + std::abs(x))) {
        x = nx;
        break;
      }
      x = nx;
    }
    return x;
  }
};

}  // namespace

Curve reparametrize_by_arclength(const Curve& c, double tol, double origin) {
  auto tab = std::make_shared<ArclengthTable>(ArclengthTable{c, {}, {}, tol});
  const int nodes = 256;
  const Interval d = c.domain();
  tab->t.resize(nodes + 1);
  tab->S.resize(nodes + 1);
  tab->S[0] = 0.0;
  for (int i = 0; i <= nodes; ++i) tab->t[i] = d.lo + d.length() * i / nodes;
  for (int i = 0; i < nodes; ++i) tab->S[i + 1] = tab->S[i] + tab->length_between(tab->t[i], tab->t[i + 1]);
  double shift = 0.0;
  if (!std::isnan(origin)) {
    const auto it = std::upper_bound(tab->t.begin(), tab->t.end(), origin);
    const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - tab->t.begin() - 1, 0), nodes - 1);
    shift = tab->S[i] + tab->length_between(tab->t[i], origin);
  }
  for (double& v : tab->S) v -= shift;

  auto jet = [tab](double s, int j) -> Vec3 {
    const double x = tab->old_param(s);
    if (j == 0) return tab->base.eval(x);
    const Vec3 d1 = tab->base.derivative(x, 1);
    const Vec3 d2 = tab->base.derivative(x, 2);
    const Vec3 d3 = tab->base.derivative(x, 3);
    const double v = d1.norm();
    const double vt = d1.dot(d2) / v;
    const double vtt = (d2.dot(d2) + d1.dot(d3)) / v - vt * vt / v;
    const double t1 = 1.0 / v;
    const double t2 = -vt / (v * v * v);
    const double t3 = (-vtt / (v * v * v) + 3.0 * vt * vt / (v * v * v * v)) / v;
    if (j == 1) return d1 * t1;
    if (j == 2) return d2 * (t1 * t1) + d1 * t2;
    return d3 * (t1 * t1 * t1) + d2 * (3.0 * t1 * t2) + d1 * t3;
  };
  const Interval nd{tab->S.front(), tab->S.back()};
  return Curve(c.name() + "@arclength", jet, 3, nd, true);
}

std::vector<CurveSample> sample_curve(const Curve& c, int count) {
  std::vector<CurveSample> out;
  const Interval d = c.domain();
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? d.mid() : d.lo + d.length() * i / (count - 1);
    CurveSample cs{s, c.eval(s), NAN, NAN};
    try {
      const FrenetFrame f = frenet_frame(c, s);
      cs.kappa = f.kappa;
      cs.tau = f.tau;
    } catch (const DegenerateCurvature&) {
      cs.kappa = 0.0;
    }
    out.push_back(cs);
  }
  return out;
}

std::string curve_samples_csv(const std::vector<CurveSample>& samples) {
  std::ostringstream os;
  os << std::setprecision(17) << "s,x,y,z,kappa,tau\n";
  for (const auto& q : samples)
    os << q.s << ',' << q.x.x() << ',' << q.x.y() << ',' << q.x.z() << ',' << q.kappa << ',' << q.tau << '\n';
  return os.str();
}

}  // namespace conewolff
