#pragma once

#include <vector>

#include "conewolff/curve.hpp"

namespace conewolff {

struct FrenetFrame {
  Vec3 T, N, B;
  double kappa = 0.0;
  double tau = 0.0;
  double speed = 1.0;  // |gamma'|, 1 for arclength curves
};

constexpr double kCurvatureFloor = 1e-10;

// Throws DegenerateCurvature when |gamma' x gamma''| < floor.
FrenetFrame frenet_frame(const Curve& c, double s, double floor = kCurvatureFloor);

struct FiniteTypeReport {
  std::vector<double> s;
  std::vector<int> type;  // per sample
  int max_type = 0;
  double witness_constant = 0.0;  // min over (s, xi) of sum_{j<=type} |<gamma^(j), xi>|
};

struct ExponentTriple {
  int n1 = 0, n2 = 0, n3 = 0;
};

// Smallest n per s with min over xi of sum_{j<=n}|<gamma^(j)(s), xi>| > c_floor.
// The xi list is augmented with the least-singular direction of the derivative
// matrix at each n, so exactly degenerate directions are never missed.
FiniteTypeReport finite_type(const Curve& c, const std::vector<double>& s_samples,
                             const std::vector<Vec3>& xi_samples, int n_max, double c_floor = 1e-6);

// (n1 < n2 < n3): orders at which the derivative span first reaches rank 1, 2, 3.
ExponentTriple exponent_triple(const Curve& c, double s0, double tol = 1e-8);

// Unit vectors on a latitude/longitude grid, used as the default xi sample.
std::vector<Vec3> sphere_grid(int n_theta, int n_phi);

}  // namespace conewolff
