#pragma once

namespace conewolff {

// Smooth step: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

// eta0: even, 1 on [-1/2,1/2], 0 outside (-1,1). eta1 = eta0(./4) - eta0.
// zeta: supported in (-1,1) with sum_nu zeta(t - nu) = 1.
struct CutoffSystem {
  double eta0(double t) const;
  double eta1(double t) const;
  double zeta(double t) const;
};

CutoffSystem build_cutoffs();

}  // namespace conewolff
