#include "conewolff/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conewolff/errors.hpp"
#include "conewolff/parallel.hpp"
#include "fft.hpp"

namespace conewolff {

Grid3::Grid3(int n, double L) : n_(n), L_(L) {
  if (n < 2 || (n & (n - 1)) != 0) throw DomainError("grid size must be a power of 2");
  if (!(L > 0.0)) throw DomainError("box length must be positive");
  if (static_cast<double>(n) * n * n > 0x1p27) throw GridTooLarge("n^3 above 2^27 points");
}

Eigen::Vector3i Grid3::modes(std::size_t idx) const {
  const int i2 = static_cast<int>(idx % n_);
  const int i1 = static_cast<int>((idx / n_) % n_);
  const int i0 = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
  return {mode(i0), mode(i1), mode(i2)};
}

Vec3 Grid3::position(std::size_t idx) const {
  const int i2 = static_cast<int>(idx % n_);
  const int i1 = static_cast<int>((idx / n_) % n_);
  const int i0 = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
  return dx() * Vec3(i0, i1, i2);
}

Field3::Field3(Grid3 grid, std::vector<cplx> values, Space space)
    : grid_(grid), values_(std::move(values)), space_(space) {
  if (values_.size() != grid_.size()) throw DomainError("field size does not match grid");
}

Field3 Field3::zeros(const Grid3& grid, Space space) { return Field3(grid, std::vector<cplx>(grid.size()), space); }

Field3 Field3::from_function(const Grid3& grid, const std::function<cplx(const Vec3&)>& f) {
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.position(i));
  return Field3(grid, std::move(v), Space::physical);
}

Field3 Field3::to_frequency() const {
  if (space_ == Space::frequency) return *this;
  std::vector<cplx> v = values_;
  const int n = grid_.n();
  detail::fft_inplace(v.data(), {n, n, n}, -1);
  const double s = std::pow(grid_.dx(), 3);
  for (auto& z : v) z *= s;
  return Field3(grid_, std::move(v), Space::frequency);
}

Field3 Field3::to_physical() const {
  if (space_ == Space::physical) return *this;
  std::vector<cplx> v = values_;
  const int n = grid_.n();
  detail::fft_inplace(v.data(), {n, n, n}, +1);
  const double s = 1.0 / grid_.volume();
  for (auto& z : v) z *= s;
  return Field3(grid_, std::move(v), Space::physical);
}

double Field3::l2_norm() const {
  double s = 0.0;
  for (const auto& z : values_) s += std::norm(z);
  if (space_ == Space::physical) return std::sqrt(s * std::pow(grid_.dx(), 3));
  return std::sqrt(s / grid_.volume());
}

double Field3::max_abs_imag() const {
  const Field3 f = to_physical();
  double m = 0.0;
  for (const auto& z : f.values_) m = std::max(m, std::abs(z.imag()));
  return m;
}

double Field3::max_abs() const {
  double m = 0.0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

Field3 Field3::operator+(const Field3& o) const {
  if (!(grid_ == o.grid_)) throw DomainError("grid mismatch");
  const Field3 b = o.in(space_);
  std::vector<cplx> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + b.values_[i];
  return Field3(grid_, std::move(v), space_);
}

Field3 Field3::operator-(const Field3& o) const { return *this + o.scaled(-1.0); }

Field3 Field3::scaled(cplx c) const {
  std::vector<cplx> v = values_;
  for (auto& z : v) z *= c;
  return Field3(grid_, std::move(v), space_);
}

Field3 Field3::real_part() const {
  Field3 f = to_physical();
  for (auto& z : f.values_) z = cplx(z.real(), 0.0);
  return f;
}

Field3 Field3::translated(const Eigen::Vector3i& shift) const {
  const Field3 f = to_physical();
  const int n = grid_.n();
  std::vector<cplx> v(values_.size());
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        v[grid_.index(grid_.slot(i0 + shift(0)), grid_.slot(i1 + shift(1)), grid_.slot(i2 + shift(2)))] =
            f.values_[grid_.index(i0, i1, i2)];
  return Field3(grid_, std::move(v), Space::physical);
}

LatticeSymbol lattice_symbol(const Grid3& g, const std::function<cplx(const Vec3&)>& m) {
  const int n = g.n();
  const int nyq = -n / 2;
  LatticeSymbol out(g.size());
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0) {
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const std::size_t idx = g.index(static_cast<int>(i0), i1, i2);
        const Eigen::Vector3i md = g.modes(idx);
        if (md(0) != nyq && md(1) != nyq && md(2) != nyq) {
          out[idx] = m(g.dxi() * md.cast<double>());
          continue;
        }
        // average over the sign flips of the Nyquist components
        cplx acc = 0.0;
        int count = 0;
        for (int mask = 0; mask < 8; ++mask) {
          Eigen::Vector3i mm = md;
          bool skip = false;
          for (int d = 0; d < 3; ++d)
            if (mask & (1 << d)) {
              if (md(d) != nyq) skip = true;
              mm(d) = -md(d);
            }
          if (skip) continue;
          acc += m(g.dxi() * mm.cast<double>());
          ++count;
        }
        out[idx] = acc / static_cast<double>(count);
      }
  });
  return out;
}

Field3 apply_multiplier(const Field3& f, const LatticeSymbol& m) {
  if (m.size() != f.grid().size()) throw DomainError("symbol size does not match grid");
  const Field3 F = f.to_frequency();
  std::vector<cplx> v = F.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
  return Field3(f.grid(), std::move(v), Space::frequency).in(f.space());
}

Field3 apply_multiplier(const Field3& f, const std::function<cplx(const Vec3&)>& m) {
  return apply_multiplier(f, lattice_symbol(f.grid(), m));
}

namespace detail {

double lp_norm_values(const std::vector<cplx>& v, double p, double cell) {
  double mx = 0.0;
  for (const auto& z : v) mx = std::max(mx, std::abs(z));
  if (std::isinf(p)) return mx;
  if (mx == 0.0) return 0.0;
  // block partial sums reduced in order, so the value is independent of the thread count
  const std::size_t blocks = 256;
  const std::size_t len = (v.size() + blocks - 1) / blocks;
  std::vector<double> part(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    double s = 0.0;
    const std::size_t hi = std::min(v.size(), (b + 1) * len);
    for (std::size_t i = b * len; i < hi; ++i) {
      const double a = std::abs(v[i]) / mx;
      s += p == 2.0 ? a * a : std::pow(a, p);
    }
    part[b] = s;
  });
  double s = 0.0;
  for (double x : part) s += x;
  return mx * std::pow(s * cell, 1.0 / p);
}

}  // namespace detail

double lp_norm(const Field3& f, double p, int oversample) {
  if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
  if (oversample < 1 || (oversample & (oversample - 1)) != 0) throw DomainError("oversample must be a power of 2");
  const Grid3& g = f.grid();
  if (oversample == 1) {
    const Field3 x = f.to_physical();
    return detail::lp_norm_values(x.values(), p, std::pow(g.dx(), 3));
  }
  const Grid3 big(g.n() * oversample, g.L());
  const Field3 F = f.to_frequency();
  std::vector<cplx> v(big.size());
  const int n = g.n();
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        v[big.index(big.slot(g.mode(i0)), big.slot(g.mode(i1)), big.slot(g.mode(i2)))] = F[g.index(i0, i1, i2)];
  const Field3 x = Field3(big, std::move(v), Space::frequency).to_physical();
  return detail::lp_norm_values(x.values(), p, std::pow(big.dx(), 3));
}

Eigen::Vector3i spectral_extent(const Field3& f) {
  const Field3 F = f.to_frequency();
  const Grid3& g = f.grid();
  double mx = F.max_abs();
  Eigen::Vector3i e(-1, -1, -1);
  if (mx == 0.0) return e;
  const double floor = mx * 1e-300;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(F[i]) <= floor) continue;
    e = e.cwiseMax(g.modes(i).cwiseAbs());
  }
  return e;
}

}  // namespace conewolff
