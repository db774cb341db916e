#pragma once

#include <string>
#include <vector>

namespace conewolff {

struct ExponentSchedule {
  double p = 0.0;
  double eps = 0.0;
  std::vector<double> betas;             // beta_0 .. beta_{n_star}
  std::vector<std::string> betas_exact;  // same, as reduced fractions
  int n_star = 0;
  double fixed_point = 0.0;  // 1/2 - 2/p + eps/2
  // Exact rational checks: recursion equals the closed form, strict decrease,
  // the distance bound to the fixed point, and the final target bound.
  bool recursion_matches_closed_form = false;
  bool strictly_decreasing = false;
  bool distance_bound = false;
  bool final_bound = false;
};

// p and eps given as decimal or fraction strings ("74", "0.1", "1/10"), which are
// read exactly. beta_n = (2/3)^n + (1 - (2/3)^n)(1/2 - 2/p + eps/2) and
// n_star is the smallest integer above log(2/eps)/log(3/2).
ExponentSchedule exponent_schedule(const std::string& p, const std::string& eps);
ExponentSchedule exponent_schedule(double p, double eps);

}  // namespace conewolff
