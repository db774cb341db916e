#include "conewolff/plates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conewolff/errors.hpp"
#include "conewolff/rng.hpp"

namespace conewolff {

Mat3 Plate::coordinate_map() const {
  Mat3 M;
  M.row(0) = u1.transpose();
  M.row(1) = (u2 - u2.dot(u1) * Vec3::UnitZ()).transpose();
  M.row(2) = u3.transpose();
  return M;
}

double Plate::required_extension(const Vec3& xi) const {
  const Vec3 y = coordinates(xi);
  if (y(0) <= 0.0) return std::numeric_limits<double>::infinity();
  const double a1 = std::max(lambda / (2.0 * y(0)), y(0) / (2.0 * lambda));
  const double a2 = std::abs(y(1)) / (lambda * std::sqrt(delta));
  const double a3 = std::abs(y(2)) / (lambda * delta);
  return std::max({a1, a2, a3});
}

Vec3 Plate::center() const { return lambda * u1 / u1.squaredNorm(); }

std::array<Vec3, 8> Plate::corners() const {
  const Mat3 inv = coordinate_map().inverse();
  const double y1[2] = {lambda / (2.0 * A), 2.0 * A * lambda};
  const double y2 = A * lambda * std::sqrt(delta);
  const double y3 = A * lambda * delta;
  std::array<Vec3, 8> out;
  int k = 0;
  for (double a : y1)
    for (double b : {-y2, y2})
      for (double c : {-y3, y3}) out[k++] = inv * Vec3(a, b, c);
  return out;
}

Plate Plate::extended(double factor) const {
  Plate p = *this;
  p.A = factor;
  return p;
}

Plate make_plate(const GeneratorCurve& g, double alpha, double delta, double lambda, double A) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("plate needs 0 < delta <= 1");
  if (!(lambda > 0.0)) throw DomainError("plate needs lambda > 0");
  if (!(A >= 1.0)) throw DomainError("extension factor must be >= 1");
  const Vec2 g0 = g.eval(alpha);
  const Vec2 g1 = g.derivative(alpha, 1);
  Plate p;
  p.alpha = alpha;
  p.u1 = Vec3(g0.x(), g0.y(), 1.0);
  p.u2 = Vec3(g1.x(), g1.y(), 0.0);
  p.u3 = p.u1.cross(p.u2);
  p.delta = delta;
  p.lambda = lambda;
  p.A = A;
  return p;
}

bool plate_contains(const Plate& p, const Vec3& xi) { return p.required_extension(xi) <= p.A * (1.0 + 1e-12); }

PlateFamily make_family(const GeneratorCurve& g, double delta, double lambda, double theta, double sigma,
                        double alpha_start) {
  if (!(sigma > 0.0) || sigma > std::sqrt(delta) * (1.0 + 1e-12))
    throw DomainError("family needs 0 < sigma <= sqrt(delta)");
  if (!(theta > 0.0)) throw EmptyFamily("window length theta must be positive");
  const int count = static_cast<int>(std::floor(theta / sigma + 1e-9)) + 1;
  if (count > 1 && std::sqrt(delta) > theta * (1.0 + 1e-12)) throw DomainError("family needs sqrt(delta) <= theta");
  PlateFamily f;
  f.delta = delta;
  f.lambda = lambda;
  f.theta = theta;
  f.sigma = sigma;
  f.generator = std::make_shared<GeneratorCurve>(g);
  const Interval d = g.domain();
  for (int i = 0; i < count; ++i) {
    const double a = alpha_start + i * sigma;
    if (a < d.lo - 1e-12 || a > d.hi + 1e-12) continue;
    f.plates.push_back(make_plate(g, a, delta, lambda));
  }
  if (f.plates.empty()) throw EmptyFamily("no anchor of the window lies in the generator domain");
  return f;
}

PlateFamily make_family(const GeneratorCurve& g, double delta, double lambda, double theta, double sigma) {
  return make_family(g, delta, lambda, theta, sigma, g.domain().lo);
}

std::string family_violation(const PlateFamily& f) {
  std::ostringstream os;
  const auto& P = f.plates;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j)
      if (std::abs(P[i].alpha - P[j].alpha) < f.sigma * (1.0 - 1e-12)) os << "anchors closer than sigma; ";
  if (!P.empty()) {
    const auto [lo, hi] = std::minmax_element(P.begin(), P.end(),
                                              [](const Plate& a, const Plate& b) { return a.alpha < b.alpha; });
    if (hi->alpha - lo->alpha > f.theta * (1.0 + 1e-12)) os << "anchor spread exceeds theta; ";
  }
  if (f.sigma > std::sqrt(f.delta) * (1.0 + 1e-12)) os << "sigma > sqrt(delta); ";
  if (P.size() > 1 && std::sqrt(f.delta) > f.theta * (1.0 + 1e-12)) os << "sqrt(delta) > theta; ";
  return os.str();
}

double bump_profile(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double BumpFunction::operator()(const Vec3& xi) const {
  const Vec3 y = plate.coordinates(xi);
  const double t1 = (y(0) / plate.lambda - 1.25) / 0.75;
  const double t2 = y(1) / (plate.lambda * std::sqrt(plate.delta));
  const double t3 = y(2) / (plate.lambda * plate.delta);
  return bump_profile(t1) * bump_profile(t2) * bump_profile(t3);
}

BumpDerivativeReport bump_derivative_check(const BumpFunction& b, int points, std::uint64_t seed) {
  const Plate& p = b.plate;
  const Mat3 inv = p.coordinate_map().inverse();
  const Vec3 dir[3] = {p.u1, p.u2, p.u3};
  const double h0 = 1e-3 * p.lambda * p.delta;
  double h[3];
  for (int i = 0; i < 3; ++i) h[i] = h0 / dir[i].norm();
  const double scale[3] = {1.0 / p.lambda, 1.0 / (p.lambda * std::sqrt(p.delta)), 1.0 / (p.lambda * p.delta)};
  CounterRng rng(seed);
  BumpDerivativeReport rep;
  for (int k = 0; k < points; ++k) {
    const Vec3 t(rng.next(-0.95, 0.95), rng.next(-0.95, 0.95), rng.next(-0.95, 0.95));
    const Vec3 y((1.25 + 0.75 * t(0)) * p.lambda, t(1) * p.lambda * std::sqrt(p.delta), t(2) * p.lambda * p.delta);
    const Vec3 x = inv * y;
    double worst = std::abs(b(x));
    for (int i = 0; i < 3; ++i) {
      const Vec3 e = h[i] * dir[i];
      const double d1 = (b(x + e) - b(x - e)) / (2 * h[i]);
      const double d2 = (b(x + e) - 2 * b(x) + b(x - e)) / (h[i] * h[i]);
      worst = std::max(worst, std::abs(d1) / scale[i]);
      worst = std::max(worst, std::abs(d2) / (scale[i] * scale[i]));
      for (int j = i + 1; j < 3; ++j) {
        const Vec3 f = h[j] * dir[j];
        const double m = (b(x + e + f) - b(x + e - f) - b(x - e + f) + b(x - e - f)) / (4 * h[i] * h[j]);
        worst = std::max(worst, std::abs(m) / (scale[i] * scale[j]));
      }
    }
    rep.max_ratio = std::max(rep.max_ratio, worst);
    ++rep.points;
  }
  return rep;
}

}  // namespace conewolff
