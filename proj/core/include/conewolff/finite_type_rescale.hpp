#pragma once

#include <array>

#include "conewolff/curve.hpp"

namespace conewolff {

// gamma(s0 + a) = gamma(s0) + R^T (b1 a^n1 phi1(a), b2 a^n2 phi2(a), b3 a^n3 phi3(a)), phi_i(0) = 1.
struct FiniteTypeRescaling {
  Curve curve;
  double s0 = 0.0;
  int j = 0;
  std::array<int, 3> n{0, 0, 0};
  Vec3 beta = Vec3::Zero();
  Mat3 R = Mat3::Identity();  // rows theta_1, theta_2, theta_3

  Vec3 dilate(const Vec3& x) const;  // delta_j
  Vec3 contract(const Vec3& x) const;  // delta_{-j}
  Vec3 Gamma(double u) const;
  Vec3 Gamma_derivative(double u, int order) const;
  double det(double u) const;        // det(Gamma', Gamma'', Gamma''')
  double limit_det(double u) const;  // j -> infinity limit
  // max over u in +-(c1, c2) of |det / limit_det - 1|
  double det_deviation(double c1, double c2, int samples = 201) const;
};

FiniteTypeRescaling finite_type_rescale(const Curve& c, double s0, int j, double tol = 1e-8, double beta_floor = 1e-8);

}  // namespace conewolff
