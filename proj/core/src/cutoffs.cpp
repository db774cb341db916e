#include "conewolff/cutoffs.hpp"

#include <cmath>

namespace conewolff {

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double e = 1.0 / x - 1.0 / (1.0 - x);
  if (e > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(e));
}

double CutoffSystem::eta0(double t) const { return smooth_step(2.0 * (1.0 - std::abs(t))); }

double CutoffSystem::eta1(double t) const { return eta0(0.25 * t) - eta0(t); }

double CutoffSystem::zeta(double t) const {
  const double a = std::abs(t);
  return a < 1.0 ? smooth_step(1.0 - a) : 0.0;
}

CutoffSystem build_cutoffs() { return {}; }

}  // namespace conewolff
