#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "conewolff/cutoffs.hpp"
#include "conewolff/curve.hpp"
#include "conewolff/quadrature.hpp"

namespace conewolff {

using Mat34 = Eigen::Matrix<double, 3, 4>;

// Space-time frequencies are (xi, tau) in R^4 with tau last.

// L1: (xi, tau) -> (xi, tau - <gamma(s), xi>).
// L2: e4 -> r^2 e4, (gamma'(s), 0) -> r (gamma'(s), 0), identity on the orthogonal complement.
struct ShearDilation {
  double s = 0.0;
  double r = 1.0;
  Mat4 L1 = Mat4::Identity();
  Mat4 L2 = Mat4::Identity();
  Mat4 L = Mat4::Identity();  // L1 * L2
};
ShearDilation shear_dilation(const Curve& c, double s, double r);

// Rows <gamma'(s_mu), xi>, tau + <gamma(s_mu), xi>, <gamma''(s_mu), xi>.
struct OmegaMap {
  double s_mu = 0.0;
  Mat34 W = Mat34::Zero();
  double min_singular = 0.0;
  Vec3 operator()(const Vec4& Xi) const { return W * Xi; }
};
OmegaMap omega_map(const Curve& c, double s_mu);

// M >= 10 bounding |gamma''| + |gamma'''| on the domain (sampled sup, floored at 10).
double curve_bound_M(const Curve& c, int samples = 513);

// The critical parameter: <gamma'(s), xi> = 0, by safeguarded Newton inside `window`.
// Throws NotConverged when there is no sign change in the window.
double s_critical(const Curve& c, const Vec3& xi, Interval window);

// tau + <gamma(s_mu), xi> - <gamma'(s_mu), xi>^2 / (2 <gamma''(s_mu), xi>).
// Throws DivByZeroGamma2 when <gamma''(s_mu), xi> vanishes.
double u_mu(const Curve& c, double s_mu, const Vec3& xi, double tau);
// Same quantity from omega coordinates (w1, w2, w3).
double u_mu_from_omega(const Vec3& w);

struct UmuOptions {
  double r0 = 0.0625;
  int k = 10;
  int samples = 10000;
  double M = 0.0;           // <= 0: curve_bound_M
  double max_angle = 0.7;   // angle of xi from N(s_cr) toward B(s_cr), keeps |<gamma'', xi>| >= |xi|/2
  std::uint64_t seed = 1;
};

struct UmuReport {
  int samples = 0;
  double M = 0.0;
  double max_ratio_one = 0.0;  // |s - s_cr - <g',xi>/<g'',xi>| / (6 M (s - s_cr)^2)
  double max_ratio_two = 0.0;  // |U_mu - (tau + <g(s_cr), xi>)| / (13 M |s_cr - s_mu|^3 |xi|)
  double max_abs_one_at_scr = 0.0;  // left side of the first bound at s = s_cr
  bool holds = false;
  nlohmann::json to_json() const;
};

// Samples xi in the nondegenerate cone near N(s_cr) with |s_mu - s_cr| <= 2 r0,
// |xi| in [2^{k-1}, 2^{k+1}], |omega_2| <= 2^{k+3} r0^2, and s with |s - s_cr| <= 2 r0.
UmuReport verify_umu_approximation(const Curve& c, double s_mu, const UmuOptions& opt = {});

// u_1 = (a, a^2/2, 1), u_2 = (1, a, 0), u_3 = (-a, 1, a^2/2).
std::array<Vec3, 3> plate_directions(double alpha_bar);

struct PlMembership {
  bool inside = false;
  Vec3 ratios = Vec3::Zero();  // each left side over its bound
};
// The three inequalities for (xi, tau) against the plate Pl^n_{mu nu}; k enters as the scale 2^k.
PlMembership pl_plate_membership(const OmegaMap& omega, double s_nnu, int n, double r1, int k, const Vec4& Xi);

struct CensusOptions {
  int k = 50;                       // scale only; all conditions are homogeneous in 2^k
  double r0 = std::ldexp(1.0, -22);
  double r1 = std::ldexp(1.0, -23);
  double M = 0.0;  // <= 0: curve_bound_M
  int samples = 20000;
  double max_angle = 0.7;
  std::uint64_t seed = 1;
};

struct CensusReport {
  int points = 0;
  int support_points = 0;     // points inside the support of some a^mu
  int max_multiplicity_a = 0;  // pieces a^mu_{n,nu} whose s-projected support contains the point
  int max_multiplicity_b = 0;
  int max_n_a = -1, max_n_b = -1;
  double max_a_scale = 0.0;  // max 2^n r1 / r0 over nonzero a-pieces (bound 2^4)
  double max_b_scale = 0.0;  // same for b-pieces (bound 2^7)
  int plate_checks = 0;
  int plate_failures = 0;
  int plate_checks_far = 0;   // pieces with |s_{n nu} - s^mu| > 2 r0, checked and reported separately
  int plate_failures_far = 0;
  double max_plate_ratio = 0.0;
  double reconstruction_error = 0.0;
  bool hypothesis = false;  // r1 >= 100 M r0^{3/2}
  bool multiplicity_ok = false, vanishing_ok = false, plates_ok = false;
  nlohmann::json to_json() const;
};

// Tensor bump a^mu supported in |s - s^mu| < 2 r0, |s^mu - s_cr| < 2 r0, |omega_2| < 2^{k+3} r0^2,
// decomposed into a^mu_{0,nu}, a^mu_{n,nu}, b^mu_{n,nu}; s^mu = mu r0.
CensusReport support_census(const Curve& c, const CensusOptions& opt = {});

struct RScheduleRow {
  int n = 0;
  double log2_r0 = 0.0, log2_r1 = 0.0;
  bool hypothesis = false;  // r1 >= 100 M r0^{3/2}
};

struct RSchedule {
  int k = 0;
  double eps0 = 0.0, eps1 = 0.0, M = 0.0;
  int d = 3;
  bool contracting = false;  // 2^{-k eps1} 100 M < 1
  int N = -1;                // -1 when the schedule does not contract
  std::vector<RScheduleRow> rows;
  bool hypothesis_all = false;
  bool terminal_lower = false;  // r1(N) >= 2^{-k(1/2 - eps1)}
  bool terminal_upper = false;  // r1(N) <= 2^{-k/2 + 2 k eps1}
  double C = 0.0;               // N eps1
  int k_contracting = 0;        // smallest k for which the schedule contracts
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Exponents are tracked in log2; r0(n) = (2^{-k eps1} M)^{(3/2)^n},
// r1(n) = (2^{-k eps1} 100 M)^{(3/2)^{n+1}}, eps1 = eps0^2 / (d M).
// A non-contracting schedule lists n = 0..8 and fails its terminal checks.
// Throws ScheduleEmpty when it contracts but r1(0) is already below the target.
RSchedule r_schedule(int k, double eps0, double M, int d = 3);

struct KernelDecayOptions {
  int k = 10;
  double r = 0.125;
  double t_prime = 1.0;
  int t_panels = 64;  // Gauss panels over t in [1/2, 2]
  std::uint64_t seed = 1;  // Hormander sample points
};

struct KernelDecayReport {
  double center = 0.0;         // |K| at x = t' gamma(s)
  double trivial_bound = 0.0;  // 2^{4k} r^3 times the profile sup norms
  double scale_tangent = 0.0;  // measured decay scale along gamma'(s); target 2^k r
  double scale_normal = 0.0;   // along a unit vector orthogonal to gamma'(s); target 2^k
  double scale_time = 0.0;     // of the t-integrand; target 2^k r^2
  double target_tangent = 0.0, target_normal = 0.0, target_time = 0.0;
  double l1_bound = 0.0;       // sup_x int |K| dy for the (2 pi)^{-4}-normalized kernel
  double hormander_constant = 0.0;  // max over |alpha| <= 2 of |Xi|^{|alpha|} |d^alpha (m o L)|
  nlohmann::json to_json() const;
};

// m(L Xi) = prod_i psi_i(Xi_i / 2^k) in the frame (gamma'(s), n2, n3, e4), psi_i fixed smooth bumps.
// K_s[m](x, t') = int_{1/2}^{2} F(x - t gamma(s), t' - t) dt with F the inverse transform of m.
KernelDecayReport kernel_decay_probe(const Curve& c, double s, const KernelDecayOptions& opt = {});

// Inverse Fourier transform of the probe's 1-D profile at y: int psi(w) e^{i w y} dw.
cplx probe_profile_transform(int axis, double y);
double probe_profile(int axis, double w);

struct LlnuRescaling {
  Curve curve;
  int l = 0;
  int nu = 0;
  double s_nu = 0.0;
  Mat3 U = Mat3::Identity();  // columns T, N, B at s_nu
  Vec3 delta(const Vec3& eta) const;      // (2^l, 2^{2l}, 2^{3l}) eta
  Vec3 delta_inv(const Vec3& eta) const;
  Vec3 L(const Vec3& eta) const { return U * delta(eta); }
  Vec3 L_inv(const Vec3& xi) const { return delta_inv(U.transpose() * xi); }
  // Gamma(u) = L^* (gamma(s_nu + 2^{-l} u) - gamma(s_nu)).
  Vec3 Gamma(double u) const;
  Vec3 Gamma_derivative(double u, int order) const;
  double c5_norm(double u_max = 1.0, int samples = 65) const;
};
LlnuRescaling rescale_llnu(const Curve& c, int l, int nu);

struct CurvatureBandReport {
  int points = 0;
  double min_ratio = 0.0, max_ratio = 0.0;   // |<Gamma''(u), eta>| / |eta| on the rescaled support
  double in_band_fraction = 0.0;             // inside [1/8, 8]
  double min_ratio_critical = 0.0, max_ratio_critical = 0.0;  // same at the critical u of each eta
  bool band_holds = false;
  bool critical_band_holds = false;
  nlohmann::json to_json() const;
};

// Samples the support of a_{k,l,nu} and maps it through L_{l,nu}.
CurvatureBandReport curvature_band(const Curve& c, int k, int l, int nu, int samples = 2000, std::uint64_t seed = 1);

}  // namespace conewolff
