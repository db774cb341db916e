#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "conewolff/quadrature.hpp"
#include "conewolff/types.hpp"

namespace conewolff {

// Periodic cube [0, L)^3 sampled at n^3 points x = (L/n) j. The dual lattice is
// (2 pi / L) m with m in {-n/2, ..., n/2 - 1}^3; storage uses FFTW order.
class Grid3 {
 public:
  Grid3(int n, double L);

  int n() const { return n_; }
  double L() const { return L_; }
  double dx() const { return L_ / n_; }
  double dxi() const { return 2.0 * M_PI / L_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  double volume() const { return L_ * L_ * L_; }

  std::size_t index(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * n_ + i1) * n_ + i2;
  }
  int mode(int slot) const { return slot < n_ / 2 ? slot : slot - n_; }
  int slot(int mode) const { return ((mode % n_) + n_) % n_; }
  Eigen::Vector3i modes(std::size_t idx) const;
  Vec3 frequency(std::size_t idx) const { return dxi() * modes(idx).cast<double>(); }
  Vec3 position(std::size_t idx) const;
  double nyquist() const { return 0.5 * n_ * dxi(); }

  bool operator==(const Grid3& o) const { return n_ == o.n_ && L_ == o.L_; }

 private:
  int n_;
  double L_;
};

enum class Space { physical, frequency };

// Frequency values approximate the continuous transform:
//   F(xi_m) = dx^3 sum_j f(x_j) exp(-i <xi_m, x_j>),  f(x_j) = L^{-3} sum_m F(xi_m) exp(i <xi_m, x_j>).
// Fields are immutable; every operation returns a new one.
class Field3 {
 public:
  Field3(Grid3 grid, std::vector<cplx> values, Space space);
  static Field3 zeros(const Grid3& grid, Space space);
  static Field3 from_function(const Grid3& grid, const std::function<cplx(const Vec3&)>& f);

  const Grid3& grid() const { return grid_; }
  Space space() const { return space_; }
  const std::vector<cplx>& values() const { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }

  Field3 to_frequency() const;
  Field3 to_physical() const;
  Field3 in(Space s) const { return s == Space::physical ? to_physical() : to_frequency(); }

  // ||f||_2 over the box; in frequency space the normalized l2 (L^{-3} sum |F|^2)^{1/2}.
  double l2_norm() const;
  double max_abs_imag() const;  // physical space
  double max_abs() const;

  Field3 operator+(const Field3& o) const;
  Field3 operator-(const Field3& o) const;
  Field3 scaled(cplx c) const;
  Field3 real_part() const;  // physical space
  // f(x - v dx) on the periodic lattice (exact index roll).
  Field3 translated(const Eigen::Vector3i& shift) const;

 private:
  Grid3 grid_;
  std::vector<cplx> values_;
  Space space_;
};

// Multiplier values per lattice slot (FFTW order).
using LatticeSymbol = std::vector<cplx>;

// Samples m on the lattice. On the Nyquist planes the value is averaged over the
// alias frequencies +-n/2, which keeps Hermitian symmetry (real in, real out).
LatticeSymbol lattice_symbol(const Grid3& g, const std::function<cplx(const Vec3&)>& m);

// Pointwise product in frequency space; the result is returned in the input's space.
Field3 apply_multiplier(const Field3& f, const std::function<cplx(const Vec3&)>& m);
Field3 apply_multiplier(const Field3& f, const LatticeSymbol& m);

// Riemann-sum L^p norm over the box, max for p = inf. With oversample > 1 the
// trigonometric polynomial is evaluated on a refined grid by zero padding.
double lp_norm(const Field3& f, double p, int oversample = 1);

// Largest |m_i| over slots with nonzero frequency value, per axis.
Eigen::Vector3i spectral_extent(const Field3& f);

}  // namespace conewolff
