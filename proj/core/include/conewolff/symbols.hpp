#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conewolff/cone_chart.hpp"
#include "conewolff/cutoffs.hpp"

namespace conewolff {

enum class PieceKind { Ak, TildeAk, Akl, Bkl, Aklnu, Bklnu, TildeAknu };

std::string to_string(PieceKind k);
PieceKind piece_kind_from_string(const std::string& s);

// The undecomposed symbol a_k(s, xi) in normalized frequency (|xi| ~ 1):
//   chi((s - s_center)/s_half) eta0(sigma/sigma_half) eta0((|xi| - 1.25)/0.75) eta0(u/(tube r)).
// With `constant` set it is identically 1 (used to isolate the cutoff algebra).
struct BaseSymbol {
  double s_center = 0.0;
  double s_half = 0.9;
  double sigma_half = 0.9;
  double tube = 0.15;
  bool constant = false;

  double operator()(double s, const Vec3& xi, const ConeCoordinates& q) const;
  double r_min() const { return 0.5 / std::sqrt(1.0 + tube * tube); }
  double r_max() const { return 2.0; }
  double u_max() const { return tube * r_max(); }
};

struct SymbolContext {
  Curve curve;
  BaseSymbol base;
  ChartOptions chart;
  double A0 = 0.0;
  CutoffSystem cut;
};

struct SymbolPiece {
  PieceKind kind = PieceKind::Ak;
  int k = 0;
  int l = 0;   // level; for the tilde pieces, the top level used in eta0(2^{2l} .)
  int nu = 0;
  std::shared_ptr<const SymbolContext> ctx;

  const Curve& curve() const { return ctx->curve; }
  bool localized() const;
  // Value at (s, xi); xi normalized. Throws OutsideCone when the chart fails.
  double eval(double s, const Vec3& xi) const;
  // Value with precomputed chart coordinates of xi.
  double eval(double s, const Vec3& xi, const ConeCoordinates& q) const;
  // Interval of s outside which the piece vanishes at a frequency with these coordinates.
  Interval s_support(const ConeCoordinates& q) const;
  // Scale of the nu-grid: 2^l, or 2^{k/3} for the tilde pieces.
  double nu_scale() const;
  nlohmann::json to_json() const;
};

// 16 max(1, 1/inf(kappa tau)) over the curve's domain; see the decisions notes.
double default_A0(const Curve& c);

SymbolPiece make_symbol(const Curve& c, int k, const BaseSymbol& base = {}, double A0 = 0.0,
                        const ChartOptions& chart = {});

// Returns tilde a_k followed by a_{k,l}, b_{k,l} for l_min <= l <= l_max (default [k/3]).
// l_min is the smallest level for which the sum telescopes to a_k on the base support.
// A0 <= 0 keeps the context's value. Requires A0 > 2 max(1, 1/inf tau).
std::vector<SymbolPiece> decompose(const SymbolPiece& ak, int l_max = -1, double A0 = 0.0);
int decomposition_l_min(const SymbolPiece& ak);

// nu-localizations with nonzero s-window intersection with the base support.
std::vector<SymbolPiece> nu_localize(const SymbolPiece& piece);

struct SupportSample {
  double s = 0.0;
  Vec3 xi = Vec3::Zero();  // normalized frequency
  ConeCoordinates q;
};

// Stratified rejection sampling in (s, r, u, sigma) of points where a nu-localized piece is nonzero.
std::vector<SupportSample> sample_piece_support(const SymbolPiece& piece, int n, std::uint64_t seed = 1);

struct PlateSupportReport {
  int points = 0;
  double max_T = 0.0;      // max 2^{2l} |<xi,T_nu>|
  double max_N = 0.0;      // max 2^l |<xi,N_nu>|
  double min_B = INFINITY;  // min |<xi,B_nu>|
  double max_B = 0.0;
  double C_needed = 0.0;   // smallest C for the plate inclusion
  double C = 0.0;
  bool holds = false;
  int derivative_points = 0;
  double C_derivative = 0.0;  // max |<e,grad>^j h| / scale^j, j = 1,2
};

PlateSupportReport verify_plate_support(const SymbolPiece& piece, double C, int samples = 100000,
                                        int derivative_samples = 500, std::uint64_t seed = 1);

struct OverlapReport {
  int max_per_s = 0;      // max over s of the number of nonzero nu-pieces at one level
  int max_per_level = 0;  // max over l of the number of nu with a nonzero piece for some s
  int pairs = 0;          // number of (l, nu) with a nonzero piece for some s
};

// For one frequency (normalized), scans s on a grid and counts the nu-localized
// a_{k,l,nu} whose support meets it.
OverlapReport overlap_census(const SymbolPiece& ak, const Vec3& xi, int s_grid = 4001);

}  // namespace conewolff
