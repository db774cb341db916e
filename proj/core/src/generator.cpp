#include "conewolff/generator.hpp"

#include <algorithm>
#include <cmath>

#include "conewolff/errors.hpp"
#include "conewolff/frenet.hpp"
#include "conewolff/numdiff.hpp"

namespace conewolff {

GeneratorCurve::GeneratorCurve(std::string name, Jet jet, Interval domain, std::optional<CircleParams> circle,
                               int bound_samples)
    : name_(std::move(name)), jet_(std::move(jet)), domain_(domain), circle_(circle) {
  b0_ = 0.0;
  b1_ = INFINITY;
  b2_ = INFINITY;
  for (int i = 0; i < bound_samples; ++i) {
    const double a = domain_.lo + domain_.length() * i / std::max(1, bound_samples - 1);
    for (int j = 0; j <= 3; ++j) b0_ = std::max(b0_, jet_(a, j).norm());
    b1_ = std::min(b1_, jet_(a, 1).norm());
    b2_ = std::min(b2_, std::abs(det12(a)));
  }
}

double GeneratorCurve::det12(double a) const {
  const Vec2 d1 = jet_(a, 1);
  const Vec2 d2 = jet_(a, 2);
  return d1.x() * d2.y() - d1.y() * d2.x();
}

GeneratorCurve circle_generator(const CircleParams& p, Interval domain) {
  auto jet = [p](double a, int j) {
    const double ph = p.omega * a + p.phase + j * M_PI_2;
    const double sc = p.rho * std::pow(p.omega, j);
    Vec2 v(sc * std::cos(ph), sc * std::sin(ph));
    if (j == 0) v += p.center;
    return v;
  };
  return GeneratorCurve("circle", jet, domain, p);
}

GeneratorCurve unit_circle_generator(Interval domain) { return circle_generator(CircleParams{}, domain); }

GeneratorCurve wolff_circle_generator(Interval domain) {
  CircleParams p;
  p.omega = 2.0 * M_PI;
  return circle_generator(p, domain);
}

GeneratorCurve tilted_circle_generator(double a, double b, double rho, Interval domain) {
  CircleParams p;
  p.center = Vec2(a, b);
  p.rho = rho;
  return circle_generator(p, domain);
}

GeneratorCurve parabola_generator(Interval domain) {
  auto jet = [](double a, int j) {
    switch (j) {
      case 0: return Vec2(a, 0.5 * a * a);
      case 1: return Vec2(1.0, a);
      case 2: return Vec2(0.0, 1.0);
      default: return Vec2(0.0, 0.0);
    }
  };
  return GeneratorCurve("parabola", jet, domain);
}

GeneratorCurve binormal_generator(const Curve& c, Interval I, int grid) {
  for (int i = 0; i < grid; ++i) {
    const double s = I.lo + I.length() * i / std::max(1, grid - 1);
    const FrenetFrame f = frenet_frame(c, s);
    if (f.B.z() <= 0.5) throw B3TooSmall("B3 = " + std::to_string(f.B.z()) + " at s=" + std::to_string(s));
    if (std::abs(f.tau) < kCurvatureFloor) throw DegenerateCurvature("vanishing torsion at s=" + std::to_string(s));
  }
  auto g = [c](double s) {
    const Vec3 B = frenet_frame(c, s).B;
    return Vec2(B.x() / B.z(), B.y() / B.z());
  };
  auto jet = [g](double s, int j) -> Vec2 {
    switch (j) {
      case 0: return g(s);
      case 1: return richardson_derivative(g, s, 1e-4);
      case 2: return richardson_second_derivative(g, s, 1e-3);
      default:
        return richardson_derivative([&](double x) { return Vec2(richardson_second_derivative(g, x, 1e-3)); }, s,
                                     1e-3);
    }
  };
  return GeneratorCurve("binormal(" + c.name() + ")", jet, I, std::nullopt, grid);
}

DetIdentity generator_det_identity(const Curve& c, double s) {
  const FrenetFrame f = frenet_frame(c, s);
  auto g = [c](double x) {
    const Vec3 B = frenet_frame(c, x).B;
    return Vec2(B.x() / B.z(), B.y() / B.z());
  };
  const Vec2 d1 = richardson_derivative(g, s, 1e-4);
  const Vec2 d2 = richardson_second_derivative(g, s, 1e-3);
  DetIdentity r;
  r.lhs = d1.x() * d2.y() - d1.y() * d2.x();
  const double v3 = f.speed * f.speed * f.speed;
  const double b3 = std::pow(f.B.z(), 3);
  r.rhs_kappa_tau = f.kappa * f.tau * v3 / b3;
  r.rhs_frenet = f.kappa * f.tau * f.tau * v3 / b3;
  return r;
}

}  // namespace conewolff
