#include "conewolff/finite_type_rescale.hpp"

#include <cmath>

#include "conewolff/errors.hpp"

namespace conewolff {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Vec3 FiniteTypeRescaling::dilate(const Vec3& x) const {
  return {std::ldexp(x(0), j * n[0]), std::ldexp(x(1), j * n[1]), std::ldexp(x(2), j * n[2])};
}

Vec3 FiniteTypeRescaling::contract(const Vec3& x) const {
  return {std::ldexp(x(0), -j * n[0]), std::ldexp(x(1), -j * n[1]), std::ldexp(x(2), -j * n[2])};
}

Vec3 FiniteTypeRescaling::Gamma(double u) const {
  return dilate(R * curve.displacement(s0 + std::ldexp(u, -j), s0));
}

Vec3 FiniteTypeRescaling::Gamma_derivative(double u, int order) const {
  return std::ldexp(1.0, -j * order) * dilate(R * curve.derivative(s0 + std::ldexp(u, -j), order));
}

double FiniteTypeRescaling::det(double u) const {
  Mat3 m;
  m.col(0) = Gamma_derivative(u, 1);
  m.col(1) = Gamma_derivative(u, 2);
  m.col(2) = Gamma_derivative(u, 3);
  return m.determinant();
}

double FiniteTypeRescaling::limit_det(double u) const {
  const double P = double(n[0]) * n[1] * n[2] * (n[1] - n[0]) * (n[2] - n[0]) * (n[2] - n[1]);
  return beta.prod() * P * std::pow(u, n[0] + n[1] + n[2] - 6);
}

double FiniteTypeRescaling::det_deviation(double c1, double c2, int samples) const {
  double worst = 0.0;
  for (int sgn : {-1, 1})
    for (int i = 0; i < samples; ++i) {
      const double u = sgn * (c1 + (c2 - c1) * i / (samples - 1));
      worst = std::max(worst, std::abs(det(u) / limit_det(u) - 1.0));
    }
  return worst;
}

FiniteTypeRescaling finite_type_rescale(const Curve& c, double s0, int j, double tol, double beta_floor) {
  FiniteTypeRescaling f{c, s0, j};
  Vec3 d[Curve::kMaxOrder + 1];
  for (int m = 1; m <= Curve::kMaxOrder; ++m) d[m] = c.derivative(s0, m);
  Vec3 th[3];
  int m = 1;
  for (; m <= Curve::kMaxOrder && d[m].norm() <= tol; ++m) {
  }
  if (m > Curve::kMaxOrder) throw DegenerateExpansion("curve is stationary to order 5");
  f.n[0] = m;
  th[0] = d[m].normalized();
  for (++m; m <= Curve::kMaxOrder && (d[m] - d[m].dot(th[0]) * th[0]).norm() <= tol; ++m) {
  }
  if (m > Curve::kMaxOrder) throw DegenerateExpansion("derivatives stay on a line up to order 5");
  f.n[1] = m;
  th[1] = (d[m] - d[m].dot(th[0]) * th[0]).normalized();
  th[2] = th[0].cross(th[1]);
  for (++m; m <= Curve::kMaxOrder && std::abs(d[m].dot(th[2])) <= tol; ++m) {
  }
  if (m > Curve::kMaxOrder) throw DegenerateExpansion("derivatives stay in a plane up to order 5");
  f.n[2] = m;
  if (d[m].dot(th[2]) < 0) th[2] = -th[2];
  for (int i = 0; i < 3; ++i) {
    f.R.row(i) = th[i].transpose();
    f.beta(i) = th[i].dot(d[f.n[i]]) / factorial(f.n[i]);
    if (std::abs(f.beta(i)) < beta_floor) throw DegenerateExpansion("expansion coefficient below floor");
  }
  return f;
}

}  // namespace conewolff
