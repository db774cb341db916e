#include "conewolff/cone_maps.hpp"

#include <algorithm>
#include <cmath>

#include "conewolff/errors.hpp"
#include "conewolff/rng.hpp"

namespace conewolff {
namespace {

const CircleParams& centred_circle(const GeneratorCurve& g) {
  if (!g.circle() || g.circle()->center.norm() > 1e-14) throw NotCircular("generator '" + g.name() + "' is not a centred circle");
  return *g.circle();
}

}  // namespace

Mat3 rotation_step1(const GeneratorCurve& g, double alpha0) {
  const double ang = centred_circle(g).omega * alpha0;
  Mat3 R;
  R << std::cos(ang), -std::sin(ang), 0, std::sin(ang), std::cos(ang), 0, 0, 0, 1;
  return R;
}

PlateFamily rotate_step1(const PlateFamily& family, double alpha0) {
  const Mat3 R = rotation_step1(*family.generator, alpha0);
  PlateFamily out = family;
  for (Plate& p : out.plates) {
    p.u1 = R * p.u1;
    p.u2 = R * p.u2;
    p.u3 = R * p.u3;
    p.alpha += alpha0;
  }
  return out;
}

Mat3 parabolic_rescale_step1(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("parabolic rescaling needs 0 < theta <= 1");
  Mat3 V;
  V << 1, 0, 1, 0, 1, 0, 1, 0, -1;  // columns (1,0,1), (0,1,0), (1,0,-1)
  const Eigen::DiagonalMatrix<double, 3> D(1.0, 1.0 / theta, 1.0 / (theta * theta));
  return V * D * V.inverse();
}

Mat3 tilt_normalize(double a, double b, double rho, double K) {
  if (!(rho > 0.0) || std::abs(a) + std::abs(b) + rho + 1.0 / rho > K)
    throw DomainError("tilt parameters violate |a|+|b|+rho+1/rho <= K");
  Mat3 L;
  L << 1.0 / rho, 0, -a / rho, 0, 1.0 / rho, -b / rho, 0, 0, 1;
  return L;
}

double light_cone_residual(const Vec3& x) {
  return std::abs(x(0) * x(0) + x(1) * x(1) - x(2) * x(2)) / x.squaredNorm();
}

double step1_image_anchor(const GeneratorCurve& circle, double alpha, double theta) {
  const CircleParams& c = centred_circle(circle);
  const double psi = c.omega * alpha + c.phase;
  const double img = 2.0 * std::atan(std::tan(0.5 * psi) / theta);
  return (img - c.phase) / c.omega;
}

OsculatingCircle osculating_circle(const GeneratorCurve& g, double alpha_mu) {
  const Vec2 g0 = g.eval(alpha_mu);
  const Vec2 g1 = g.derivative(alpha_mu, 1);
  const double det = g.det12(alpha_mu);
  const double speed = g1.norm();
  if (std::abs(det) < 1e-14 * std::pow(speed, 3)) throw DegenerateCurvature("generator curvature vanishes");
  const double rho = std::pow(speed, 3) / det;
  const Vec2 n(-g1.y() / speed, g1.x() / speed);
  const Vec2 center = g0 + rho * n;
  // |g'| sin(phi/rho) = g1', |g'| cos(phi/rho) = g2'; phi/rho is fixed mod 2 pi.
  double phi = rho * std::atan2(g1.x(), g1.y());
  const double period = 2.0 * M_PI * std::abs(rho);
  phi = std::fmod(phi, period);
  if (phi < 0) phi += period;
  CircleParams cp;
  cp.center = center;
  cp.rho = std::abs(rho);
  cp.omega = 1.0 / rho;
  cp.phase = -(alpha_mu + phi) / rho + (rho < 0 ? M_PI : 0.0);
  return {center, rho, phi, circle_generator(cp, g.domain())};
}

double osculating_deviation(const GeneratorCurve& g, const OsculatingCircle& oc, double alpha_mu, double delta,
                            int samples) {
  const double w = std::cbrt(delta);
  double dev = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double a = alpha_mu - w + 2.0 * w * i / (samples - 1);
    dev = std::max(dev, (g.eval(a) - oc.circle.eval(a)).norm());
  }
  return dev;
}

ContainmentReport verify_containment(const std::vector<MappedPlate>& mapped, const PlateFamily& target, double A,
                                     int interior_samples, std::uint64_t seed) {
  ContainmentReport rep;
  rep.A = A;
  CounterRng rng(seed);
  for (const MappedPlate& mp : mapped) {
    if (mp.target_index >= target.plates.size()) throw DomainError("mapped plate points past the target family");
    const Plate& t = target.plates[mp.target_index];
    ContainmentEntry e;
    e.alpha = mp.source.alpha;
    e.target_alpha = t.alpha;
    for (const Vec3& c : mp.source.corners()) e.corner_A = std::max(e.corner_A, t.required_extension(mp.map * c));
    const Mat3 inv = mp.source.coordinate_map().inverse();
    const Plate& s = mp.source;
    for (int k = 0; k < interior_samples; ++k) {
      const Vec3 y(rng.next(s.lambda / (2 * s.A), 2 * s.A * s.lambda), rng.next(-1, 1) * s.A * s.lambda * std::sqrt(s.delta),
                   rng.next(-1, 1) * s.A * s.lambda * s.delta);
      e.sampled_A = std::max(e.sampled_A, t.required_extension(mp.map * (inv * y)));
    }
    rep.max_A = std::max({rep.max_A, e.corner_A, e.sampled_A});
    rep.entries.push_back(e);
  }
  rep.holds = rep.max_A <= A * (1.0 + 1e-12);
  return rep;
}

Step1Rescaling step1_rescaling(const GeneratorCurve& circle, double delta, double lambda, double theta,
                               int interior_samples, std::uint64_t seed) {
  const CircleParams& c = centred_circle(circle);
  if (std::abs(c.omega - 1.0) > 1e-14 || c.phase != 0.0 || std::abs(c.rho - 1.0) > 1e-14)
    throw NotCircular("step 1 rescaling is set up on the unit-speed unit circle");
  Step1Rescaling out;
  out.L2 = parabolic_rescale_step1(theta);
  const double sigma = std::sqrt(delta);
  out.source = make_family(circle, delta, lambda, theta, sigma, -0.5 * theta);
  out.target.delta = delta / (theta * theta);
  out.target.lambda = lambda;
  out.target.theta = 1.0;
  out.target.generator = out.source.generator;
  std::vector<MappedPlate> mapped;
  double prev = -INFINITY;
  out.image_separation = INFINITY;
  for (std::size_t i = 0; i < out.source.plates.size(); ++i) {
    const Plate& p = out.source.plates[i];
    const double a = step1_image_anchor(circle, p.alpha, theta);
    out.target.plates.push_back(make_plate(circle, a, std::min(1.0, out.target.delta), lambda));
    mapped.push_back({p, out.L2, i});
    if (i > 0) out.image_separation = std::min(out.image_separation, a - prev);
    prev = a;
  }
  out.target.sigma = out.image_separation;
  out.containment = verify_containment(mapped, out.target, 8.0, interior_samples, seed);
  return out;
}

}  // namespace conewolff
