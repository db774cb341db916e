#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "conewolff/curve.hpp"
#include "conewolff/fields.hpp"

namespace conewolff {

// Smooth cutoff chi(s) = eta0((s - center) / halfwidth), supported in |s - center| < halfwidth.
struct ParamCutoff {
  double center = 0.0;
  double halfwidth = 1.0;
  double operator()(double s) const;
  Interval support() const { return {center - halfwidth, center + halfwidth}; }
  double integral() const { return 1.5 * halfwidth; }  // int eta0 = 3/2
};

// mu_t^(xi) = int exp(-i t <gamma(s), xi>) chi(s) ds by a composite Gauss rule
// sized from the phase span t diam(gamma) |xi|.
struct MeasureTransform {
  std::vector<Vec3> points;   // gamma at the nodes
  std::vector<double> weights;  // Gauss weight times chi
  double diameter = 0.0;
  MeasureTransform(const Curve& c, const ParamCutoff& chi, double max_phase_span);
  cplx operator()(const Vec3& xi, double t = 1.0) const;
};

// Diameter of gamma over the cutoff's support (sampled).
double curve_diameter(const Curve& c, const ParamCutoff& chi, int samples = 257);

// Throws WraparoundRisk when t diam(gamma) > L/2 - L/16.
void check_wraparound(const Grid3& g, const Curve& c, const ParamCutoff& chi, double t);

// mu_t^ on the lattice box |m_i| <= extent_i (zero outside), Nyquist planes alias-averaged.
LatticeSymbol averaging_symbol(const Grid3& g, const Curve& c, const ParamCutoff& chi, double t,
                               const Eigen::Vector3i& extent);
LatticeSymbol averaging_symbol(const Grid3& g, const Curve& c, const ParamCutoff& chi, double t);

// A_t f(x) = int f(x - t gamma(s)) chi(s) ds on the periodic box; t in [1/2, 2].
Field3 averaging_operator(const Field3& f, const Curve& c, const ParamCutoff& chi, double t);

// Pointwise max over t of |A_t f| (physical space, real valued).
Field3 maximal_operator(const Field3& f, const Curve& c, const ParamCutoff& chi, const std::vector<double>& ts);

// 65 equispaced values in [1, 2].
std::vector<double> default_t_samples(int count = 65);

// Band profile eta0((|xi| 2^{-k} - 5/4) / (3/4)), supported in 2^{k-1} < |xi| < 2^{k+1}.
double band_profile(int k, const Vec3& xi);

// Real Gaussian random field with spectrum band_profile(k) (seeded).
Field3 band_limited_random_field(const Grid3& g, int k, std::uint64_t seed);
// Real field with F = band_profile(k) conj(mu_1^): a band-limited 2^{-k} tube around -gamma,
// the input that focuses A_1 at the origin.
Field3 focusing_field(const Grid3& g, const Curve& c, const ParamCutoff& chi, int k);

// ||(1 + |xi|^2)^{alpha/2} A_1 f||_p / ||f||_p.
double sobolev_ratio(const Field3& f, const Curve& c, const ParamCutoff& chi, double p, double alpha,
                     int oversample = 1);

struct SobolevSweepOptions {
  Grid3 grid{128, 1.5};
  ParamCutoff chi{0.0, 0.25};
  double p = 40.0;
  double alpha = 1.0 / 40.0;
  std::vector<int> ks{4, 5, 6, 7};
  int random_seeds = 2;
  std::uint64_t seed = 1;
  int oversample = 2;
};

struct SobolevRow {
  int k = 0;
  std::string input;  // "focusing" or "random:<seed>"
  double ratio = 0.0;
};

struct SobolevSweep {
  std::string curve;
  double p = 0.0, alpha = 0.0;
  std::vector<SobolevRow> rows;
  std::vector<int> ks;
  std::vector<double> sup_ratio;  // max over inputs per k
  double slope = 0.0;             // log2 sup_ratio against k
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

SobolevSweep sobolev_sweep(const Curve& c, const SobolevSweepOptions& opt = {});

struct MaximalReportOptions {
  Grid3 grid{64, 8.0};
  ParamCutoff chi{0.0, 0.5};
  int k = 3;
  std::vector<double> ps{4, 8, 16, 40};
  std::vector<double> ts = default_t_samples();
  std::uint64_t seed = 1;
};

struct MaximalReport {
  std::string curve;
  std::vector<double> ps, ratios;  // ||M f||_p / ||f||_p
  int t_samples = 0;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Report only: the sup over all t > 0 is replaced by the sampled sup over ts.
MaximalReport maximal_report(const Curve& c, const MaximalReportOptions& opt = {});

struct LocalSmoothingOptions {
  Grid3 grid{32, 3.0};
  ParamCutoff chi{0.0, 0.25};
  double p = 80.0;
  std::vector<double> alphas{0.0, 1.0 / 80.0, 4.0 / 240.0};
  std::vector<int> ks{2, 3, 4};
  int t_oversample = 4;  // t spacing 2^{-k} / t_oversample
  std::uint64_t seed = 1;
  std::size_t max_points = std::size_t(1) << 26;
};

struct LocalSmoothingRow {
  int k = 0;
  double alpha = 0.0;
  int nt = 0;
  double ratio = 0.0;  // ||W chi(t) A_t f||_{L^p(x,t)} / ||f||_p, max over inputs
};

struct LocalSmoothingReport {
  std::string curve;
  double p = 0.0;
  std::vector<LocalSmoothingRow> rows;
  std::vector<double> alphas, slopes;  // slope of log2 ratio against k, per alpha
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// t ranges over the periodic window [1/4, 9/4) with the cutoff eta0((t - 5/4) / (3/4));
// W = (1 + |xi|^2 + tau^2)^{alpha/2} is applied by a 4-D transform. Throws GridTooLarge.
LocalSmoothingReport local_smoothing_probe(const Curve& c, const LocalSmoothingOptions& opt = {});

// lhs = d/da <gamma_{a,b}(s), xi> = xi1 cos 2 pi s + xi2 sin 2 pi s,
// rhs = -(4 pi^2 a)^{-1} <gamma''_{a,b}(s), xi> for gamma_{a,b} = (a cos 2 pi s, a sin 2 pi s, b s).
std::pair<double, double> helix_phase_identity(double a, double b, double s, const Vec3& xi);

// Pointwise sup over (a, b) of |A_t f| for the helices gamma_{a,b}.
Field3 two_param_maximal(const Field3& f, double t, const std::vector<std::pair<double, double>>& ab,
                         const ParamCutoff& chi);

struct TwoParamReport {
  double p = 0.0, alpha = 0.0;
  int samples = 0;
  double ratio = 0.0;  // ||sup_ab |A f| ||_p / ||f||_{L^p_alpha}
  nlohmann::json to_json() const;
};

// Report only, band-limited random input.
TwoParamReport two_param_report(const Grid3& g, int k, double p, double alpha, int ab_per_axis,
                                const ParamCutoff& chi, std::uint64_t seed = 1);

}  // namespace conewolff
