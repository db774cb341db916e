#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "conewolff/types.hpp"

namespace conewolff {

// A C^5 space curve with derivative access. The jet supplies derivatives up to
// `supplied_order`; higher orders (up to 5) come from Richardson-extrapolated
// central differences of the highest supplied one.
class Curve {
 public:
  using Jet = std::function<Vec3(double s, int order)>;
  using Displacement = std::function<Vec3(double s, double s0)>;

  static constexpr int kMaxOrder = 5;
  static constexpr double kFdStep = 1e-4;

  Curve(std::string name, Jet jet, int supplied_order, Interval domain, bool arclength,
        Displacement displacement = nullptr);

  Vec3 eval(double s) const { return jet_(s, 0); }
  Vec3 derivative(double s, int order) const;
  // gamma(s) - gamma(s0), evaluated without cancellation when a closed form exists.
  Vec3 displacement(double s, double s0) const;

  const std::string& name() const { return name_; }
  const Interval& domain() const { return domain_; }
  bool arclength() const { return arclength_; }
  int supplied_order() const { return supplied_order_; }

  Curve with_domain(Interval d) const;

 private:
  std::string name_;
  Jet jet_;
  int supplied_order_;
  Interval domain_;
  bool arclength_;
  Displacement displacement_;
};

// Benchmark curves. Helix parameters follow (a cos u, a sin u, b u); with
// `arclength` the parameter is rescaled by sqrt(a^2 + b^2).
Curve helix(double a = 1.0, double b = 1.0, bool arclength = true, Interval domain = {-1.0, 1.0});
// (a cos 2 pi s, a sin 2 pi s, b s), the two-parameter family used for maximal averages.
Curve helix_family(double a, double b, Interval domain = {-1.0, 1.0});
Curve twisted_cubic(Interval domain = {-1.0, 1.0});
Curve quartic_curve(Interval domain = {-1.0, 1.0});  // (s, s^2, s^4)
Curve planar_circle(Interval domain = {-1.0, 1.0});
Curve straight_line(Interval domain = {-1.0, 1.0});
Curve quadratic_normal_form(Interval domain = {-1.0, 1.0});  // (s, s^2/2, 0)

// Build a benchmark curve by name: helix, helix_family, twisted_cubic, quartic,
// circle, line, normal_form. Parameters a, b apply to the helices.
Curve curve_by_name(const std::string& name, double a = 1.0, double b = 1.0, bool arclength = true,
                    Interval domain = {-1.0, 1.0});
std::vector<std::string> benchmark_curve_names();

// Arclength reparametrization: adaptive quadrature of |gamma'| on a node table,
// then a safeguarded Newton inverse seeded by monotone interpolation. The new
// parameter starts at 0 at domain().lo unless `origin` is given, in which case
// the new parameter is 0 at old parameter `origin`.
Curve reparametrize_by_arclength(const Curve& c, double tol = 1e-10, double origin = NAN);

struct CurveSample {
  double s;
  Vec3 x;
  double kappa;
  double tau;
};

std::vector<CurveSample> sample_curve(const Curve& c, int count);
std::string curve_samples_csv(const std::vector<CurveSample>& samples);

}  // namespace conewolff
