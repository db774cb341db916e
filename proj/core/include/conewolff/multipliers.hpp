#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conewolff/quadrature.hpp"
#include "conewolff/symbols.hpp"

namespace conewolff {

struct MultiplierSample {
  Vec3 xi;
  cplx value{0.0, 0.0};
  int k = 0, l = 0, nu = 0;
  double quadrature_error = 0.0;
  int evaluations = 0;
};

// m_k[a](xi) = int a(s, 2^{-k} xi) exp(-i <gamma(s), xi>) ds for |xi| ~ 2^k.
// Adaptive Gauss-Kronrod over the piece's s-support, split at sigma(2^{-k} xi).
// Throws QuadratureFailure when the error estimate stays above tol.
MultiplierSample mk_multiplier(const SymbolPiece& piece, const Vec3& xi, double tol = 1e-10);

struct VdcPoint {
  int k = 0;
  double sup = 0.0;
  Vec3 argmax = Vec3::Zero();  // normalized frequency attaining the sup
};

struct VdcSweep {
  std::string curve;
  PieceKind kind = PieceKind::Aklnu;
  int l = 0;
  std::vector<VdcPoint> points;
  double slope = 0.0;
  double constant = 0.0;      // 2^{intercept} of the fit
  double target_slope = 0.0;  // -1/2, -1 or -1/3
  double band_lo = 0.0, band_hi = 0.0;
  bool within_band = false;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct VdcOptions {
  int samples = 400;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double A0 = 0.0;  // <= 0: default_A0
};

// sup over a chart-stratified sample of the support of the nu = 0 piece, fitted in log2 against k.
VdcSweep vdc_decay_sweep(const Curve& c, PieceKind kind, int l, const std::vector<int>& ks,
                         const VdcOptions& opt = {});

struct KernelBound {
  double l1 = 0.0;
  int n[3] = {0, 0, 0};
  double C = 0.0;  // l1 * 2^l
  double margin = 0.0;          // final margin
  bool converged = false;       // last doubling moved the value by less than rel_tol
  std::vector<double> history;  // value per margin trial
};

struct KernelOptions {
  long max_points = 1L << 24;
  double margin = 4.0;  // kernel margin in units of 2 pi / (frequency box length)
  int max_doublings = 1;  // per axis, in the order N, B, T
  Vec3 axis_stretch = Vec3::Ones();  // extra per-axis margin factors (T, N, B)
  double rel_tol = 0.03;
  int support_samples = 20000;
  double pad = 0.1;     // frequency box padding, relative to the sampled support extent
  int min_panels = 64;  // s-rule panels (10 Gauss points each) before phase refinement
  std::uint64_t seed = 1;
};

// L1 norm of the inverse Fourier transform of m_k[piece] on a grid aligned with (T_nu, N_nu, B_nu).
// Each axis margin is doubled until the value settles or the budget runs out; the
// value keeps creeping up slowly along N, so `converged` is usually false for a
// small budget. Throws GridTooLarge when the first grid exceeds max_points.
KernelBound l1_kernel_bound(const SymbolPiece& piece, const KernelOptions& opt = {});

}  // namespace conewolff
