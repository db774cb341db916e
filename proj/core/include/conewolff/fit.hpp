#pragma once

#include <vector>

namespace conewolff {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fit of log2(y) against x (or log2(x) when log_x is set).
LineFit fit_log2(const std::vector<double>& x, const std::vector<double>& y, bool log_x = false);

}  // namespace conewolff
