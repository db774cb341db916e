#pragma once

#include <cmath>

#include "conewolff/curve.hpp"

namespace conewolff {

struct ChartOptions {
  double u_over_r_cap = 0.2;
  int coarse_grid = 64;
  int max_newton = 60;
  double jacobian_floor = 1e-12;
  // Optional search window for sigma (both ends finite). Used on structured
  // grids where the relevant root is known to lie near a given parameter.
  double window_lo = NAN, window_hi = NAN;
};

struct ConeCoordinates {
  double r = 0.0;
  double u = 0.0;
  double sigma = 0.0;
};

// Solves <xi, N(sigma)> = 0 on the curve's domain; r = <xi,B>, u = <xi,T>.
ConeCoordinates cone_coordinates(const Curve& c, const Vec3& xi, const ChartOptions& opt = {});

// r B(sigma) + u T(sigma).
Vec3 cone_point(const Curve& c, const ConeCoordinates& q);

struct ChartGradients {
  Vec3 grad_r, grad_u, grad_sigma;
};

// grad r = B, grad u = T, grad sigma = N / (|gamma'| (u kappa - r tau)).
ChartGradients scr_gradients(const Curve& c, const Vec3& xi, const ChartOptions& opt = {});

}  // namespace conewolff
