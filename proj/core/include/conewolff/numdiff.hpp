#pragma once

#include <type_traits>

namespace conewolff {

// Central difference with one Richardson step: error O(h^4) for smooth f.
// F maps double to a value type supporting +, - and scalar * (double, Eigen
// vectors). Intermediates are materialised to the value type, so expression
// templates never outlive their operands.
template <class F>
auto richardson_derivative(const F& f, double x, double h = 1e-4) {
  using R = std::decay_t<decltype(f(x))>;
  auto d = [&](double hh) -> R { return R((f(x + hh) - f(x - hh)) * (0.5 / hh)); };
  const R coarse = d(h);
  const R fine = d(0.5 * h);
  return R((fine * 4.0 - coarse) * (1.0 / 3.0));
}

// Second derivative, same extrapolation.
template <class F>
auto richardson_second_derivative(const F& f, double x, double h = 1e-3) {
  using R = std::decay_t<decltype(f(x))>;
  const R fx = f(x);
  auto d = [&](double hh) -> R { return R((f(x + hh) - fx * 2.0 + f(x - hh)) * (1.0 / (hh * hh))); };
  const R coarse = d(h);
  const R fine = d(0.5 * h);
  return R((fine * 4.0 - coarse) * (1.0 / 3.0));
}

}  // namespace conewolff
