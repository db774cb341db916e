#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace conewolff {

using cplx = std::complex<double>;

struct QuadResult {
  cplx value{0.0, 0.0};
  double error = 0.0;  // Kronrod minus Gauss estimate, summed over panels
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a,b]. Interior breakpoints, if any,
// seed the initial panels (used to split at a stationary point).
QuadResult integrate_gk15(const std::function<cplx(double)>& f, double a, double b,
                          const QuadOptions& opt = {}, const std::vector<double>& breakpoints = {});

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1,1] (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

// Composite rule on [a,b]: `panels` equal panels, `order` points each.
GaussRule composite_gauss(double a, double b, int panels, int order);

}  // namespace conewolff
