#pragma once

#include <vector>

#include "conewolff/quadrature.hpp"

namespace conewolff::detail {

// Unnormalized in-place multidimensional DFT, row-major; sign -1 forward, +1 backward.
void fft_inplace(cplx* data, const std::vector<int>& dims, int sign);

// (sum |v|^p cell)^{1/p}, scaled by the max to stay in range; max for p = inf.
double lp_norm_values(const std::vector<cplx>& v, double p, double cell);

}  // namespace conewolff::detail
