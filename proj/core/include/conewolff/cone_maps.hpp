#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conewolff/plates.hpp"

namespace conewolff {

// Rotation about the xi3 axis taking the circle anchor alpha to alpha + alpha0.
// Throws NotCircular unless the family generator is a circle centred at 0.
PlateFamily rotate_step1(const PlateFamily& family, double alpha0);
Mat3 rotation_step1(const GeneratorCurve& g, double alpha0);

// L2 with L2(1,0,1) = (1,0,1), L2(0,1,0) = (0,1,0)/theta, L2(1,0,-1) = (1,0,-1)/theta^2.
Mat3 parabolic_rescale_step1(double theta);

// Xi1 = (xi1 - a xi3)/rho, Xi2 = (xi2 - b xi3)/rho, Xi3 = xi3. Requires |a|+|b|+rho+1/rho <= K.
Mat3 tilt_normalize(double a, double b, double rho, double K = 10.0);

// Residual |x1^2 + x2^2 - x3^2| / |x|^2 of the light cone equation.
double light_cone_residual(const Vec3& x);

// Anchor of the image plate under L2 on a circle generator: tan(w a'/2) = tan(w a/2)/theta.
double step1_image_anchor(const GeneratorCurve& circle, double alpha, double theta);

struct OsculatingCircle {
  Vec2 center;
  double rho = 1.0;  // signed reciprocal curvature
  double phi = 0.0;  // phase in [0, 2 pi |rho|)
  GeneratorCurve circle;
};

// g_mu(a) = g(a_mu) + rho n(a_mu) + rho (cos((a - a_mu - phi)/rho), sin((a - a_mu - phi)/rho)).
OsculatingCircle osculating_circle(const GeneratorCurve& g, double alpha_mu);

// max over |a - a_mu| <= delta^(1/3) of |g(a) - g_mu(a)|, sampled on `samples` points.
double osculating_deviation(const GeneratorCurve& g, const OsculatingCircle& oc, double alpha_mu, double delta,
                            int samples = 2001);

// A source plate carried by a linear map, paired with the target plate it should land in.
struct MappedPlate {
  Plate source;
  Mat3 map = Mat3::Identity();
  std::size_t target_index = 0;
};

struct ContainmentEntry {
  double alpha = 0.0;         // anchor of the source plate
  double target_alpha = 0.0;  // anchor of the matched target plate
  double corner_A = 0.0;      // exact: smallest A containing all 8 mapped corners
  double sampled_A = 0.0;     // max over random interior points
};

struct ContainmentReport {
  std::vector<ContainmentEntry> entries;
  double max_A = 0.0;
  double A = 1.0;  // the extension tested
  bool holds = false;
};

// Corners decide containment exactly (images of parallelepipeds under linear
// maps are parallelepipeds and the A-extension is convex); random interior points
// are sampled as well and reported alongside.
ContainmentReport verify_containment(const std::vector<MappedPlate>& mapped, const PlateFamily& target, double A,
                                     int interior_samples = 10000, std::uint64_t seed = 1);

struct Step1Rescaling {
  PlateFamily source;       // (delta, lambda, theta) family centred at anchor 0
  PlateFamily target;       // (delta/theta^2, lambda, 1) family at the image anchors
  Mat3 L2;
  ContainmentReport containment;
  double image_separation = 0.0;  // min gap between image anchors
};

Step1Rescaling step1_rescaling(const GeneratorCurve& circle, double delta, double lambda, double theta,
                               int interior_samples = 10000, std::uint64_t seed = 1);

}  // namespace conewolff
