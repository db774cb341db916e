#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <memory>
#include <vector>

#include "conewolff/generator.hpp"

namespace conewolff {

// (delta, lambda)-plate at alpha with extension factor A:
//   lambda/(2A) <= <u1,xi> <= 2A lambda,
//   |<u2, xi - xi3 u1>| <= A lambda sqrt(delta),
//   |<u3, xi>| <= A lambda delta.
struct Plate {
  double alpha = 0.0;
  Vec3 u1, u2, u3;
  double delta = 1.0;
  double lambda = 1.0;
  double A = 1.0;

  // Coordinates (<u1,xi>, <u2, xi - xi3 u1>, <u3,xi>); linear in xi.
  Mat3 coordinate_map() const;
  Vec3 coordinates(const Vec3& xi) const { return coordinate_map() * xi; }
  // Smallest extension factor whose plate contains xi (infinite if <u1,xi> <= 0).
  double required_extension(const Vec3& xi) const;
  Vec3 center() const;  // lambda u1 / |u1|^2, so that <u1, center> = lambda
  std::array<Vec3, 8> corners() const;
  Plate extended(double factor) const;
};

Plate make_plate(const GeneratorCurve& g, double alpha, double delta, double lambda, double A = 1.0);
bool plate_contains(const Plate& p, const Vec3& xi);

struct PlateFamily {
  std::vector<Plate> plates;
  double delta = 0, lambda = 0, theta = 0, sigma = 0;
  std::shared_ptr<const GeneratorCurve> generator;
};

// Anchors on the uniform sigma-grid alpha_start + i sigma inside [alpha_start, alpha_start + theta].
// Requires sigma <= sqrt(delta); a window shorter than sigma yields a single plate.
PlateFamily make_family(const GeneratorCurve& g, double delta, double lambda, double theta, double sigma,
                        double alpha_start);
PlateFamily make_family(const GeneratorCurve& g, double delta, double lambda, double theta, double sigma);

// Checks the standing family assumptions; returns an empty string when they hold.
std::string family_violation(const PlateFamily& f);

// Smooth bump adapted to a plate: a tensor product of the mollifier profile
// exp(1 - 1/(1 - t^2)) in the plate coordinates, supported in the plate.
struct BumpFunction {
  Plate plate;
  double operator()(const Vec3& xi) const;
};

double bump_profile(double t);  // exp(1 - 1/(1 - t^2)) on |t| < 1

struct BumpDerivativeReport {
  double max_ratio = 0.0;  // max over grid and orders of |D^n phi| / scaling
  int points = 0;
};

// Directional derivatives <u1,grad>^n1 <u2,grad>^n2 <u3,grad>^n3 phi for n1+n2+n3 <= 2 by
// central differences at `points` seeded interior samples, each divided by
// lambda^-(n1+n2+n3) delta^-(n2/2) delta^-n3.
BumpDerivativeReport bump_derivative_check(const BumpFunction& b, int points, std::uint64_t seed);

}  // namespace conewolff
