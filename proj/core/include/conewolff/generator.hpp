#pragma once

#include <functional>
#include <optional>
#include <string>

#include "conewolff/curve.hpp"

namespace conewolff {

// Circle data for generators of the form c + rho (cos(w a + phase), sin(w a + phase)).
struct CircleParams {
  Vec2 center{0.0, 0.0};
  double rho = 1.0;
  double omega = 1.0;
  double phase = 0.0;
};

// A C^3 plane curve g with the bounds b0 (C^3 norm), b1 (min |g'|) and
// b2 (min |det(g', g'')|) filled by sampling over the domain.
class GeneratorCurve {
 public:
  using Jet = std::function<Vec2(double alpha, int order)>;

  GeneratorCurve(std::string name, Jet jet, Interval domain, std::optional<CircleParams> circle = std::nullopt,
                 int bound_samples = 257);

  Vec2 eval(double a) const { return jet_(a, 0); }
  Vec2 derivative(double a, int order) const { return jet_(a, order); }
  double det12(double a) const;  // g1' g2'' - g2' g1''

  const std::string& name() const { return name_; }
  const Interval& domain() const { return domain_; }
  const std::optional<CircleParams>& circle() const { return circle_; }
  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double b2() const { return b2_; }

 private:
  std::string name_;
  Jet jet_;
  Interval domain_;
  std::optional<CircleParams> circle_;
  double b0_ = 0, b1_ = 0, b2_ = 0;
};

GeneratorCurve unit_circle_generator(Interval domain = {0.0, 6.283185307179586});
// g(a) = (cos 2 pi a, sin 2 pi a); one period per unit of a.
GeneratorCurve wolff_circle_generator(Interval domain = {0.0, 1.0});
GeneratorCurve parabola_generator(Interval domain = {-1.0, 1.0});  // (a, a^2/2)
GeneratorCurve tilted_circle_generator(double a, double b, double rho, Interval domain = {0.0, 6.283185307179586});
GeneratorCurve circle_generator(const CircleParams& p, Interval domain);

// g(s) = (B1/B3, B2/B3)(s). Throws B3TooSmall if B3 <= 1/2 on the sample grid.
GeneratorCurve binormal_generator(const Curve& c, Interval I, int grid = 257);

struct DetIdentity {
  double lhs = 0.0;         // g1' g2'' - g2' g1'' by finite differences of B/B3
  double rhs_kappa_tau = 0.0;   // kappa tau |gamma'|^3 / B3^3
  double rhs_frenet = 0.0;  // kappa tau^2 |gamma'|^3 / B3^3
};

DetIdentity generator_det_identity(const Curve& c, double s);

}  // namespace conewolff
