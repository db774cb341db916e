#include "conewolff/scale_induction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fftw3.h>

#include "conewolff/errors.hpp"
#include "conewolff/frenet.hpp"
#include "conewolff/parallel.hpp"
#include "conewolff/rng.hpp"
#include "conewolff/symbols.hpp"
#include "fftw_lock.hpp"

namespace conewolff {
namespace {

Vec4 lift(const Vec3& v, double t = 0.0) { return Vec4(v(0), v(1), v(2), t); }

// Open-interval test: is there h in (a, b) with lo2 < h^2 < hi2?
bool meets_shell(double a, double b, double lo2, double hi2) {
  if (!(hi2 > 0.0) || !(b > a) || !(hi2 > lo2)) return false;
  const double hi = std::sqrt(hi2);
  const double lo = lo2 > 0.0 ? std::sqrt(lo2) : -1.0;
  auto meets = [&](double p, double q) { return std::max(a, p) < std::min(b, q); };
  if (lo < 0.0) return meets(-hi, hi);
  return meets(-hi, -lo) || meets(lo, hi);
}

}  // namespace

ShearDilation shear_dilation(const Curve& c, double s, double r) {
  ShearDilation sd;
  sd.s = s;
  sd.r = r;
  const Vec3 g = c.eval(s);
  sd.L1.block<1, 3>(3, 0) = -g.transpose();
  const Vec4 t = lift(c.derivative(s, 1).normalized());
  const Vec4 e4(0, 0, 0, 1);
  sd.L2 = Mat4::Identity() + (r - 1.0) * t * t.transpose() + (r * r - 1.0) * e4 * e4.transpose();
  sd.L = sd.L1 * sd.L2;
  return sd;
}

OmegaMap omega_map(const Curve& c, double s_mu) {
  OmegaMap w;
  w.s_mu = s_mu;
  w.W.row(0) = lift(c.derivative(s_mu, 1)).transpose();
  w.W.row(1) = lift(c.eval(s_mu), 1.0).transpose();
  w.W.row(2) = lift(c.derivative(s_mu, 2)).transpose();
  w.min_singular = Eigen::JacobiSVD<Mat34>(w.W).singularValues().minCoeff();
  return w;
}

double curve_bound_M(const Curve& c, int samples) {
  double m = 0.0;
  const Interval I = c.domain();
  for (int i = 0; i < samples; ++i) {
    const double s = I.lo + I.length() * i / (samples - 1);
    m = std::max(m, c.derivative(s, 2).norm() + c.derivative(s, 3).norm());
  }
  return std::max(10.0, m);
}

double s_critical(const Curve& c, const Vec3& xi, Interval window) {
  auto f = [&](double s) { return c.derivative(s, 1).dot(xi); };
  const int n = 32;
  double a = window.lo, fa = f(a);
  for (int i = 1; i <= n; ++i) {
    const double b = window.lo + window.length() * i / n, fb = f(b);
    if (fa == 0.0) return a;
    if (fa * fb < 0.0 || fb == 0.0) {
      // Newton with bisection fallback on [a, b]
      double lo = a, hi = b, flo = fa;
      double s = 0.5 * (lo + hi);
      for (int it = 0; it < 100; ++it) {
        const double fs = f(s);
        if (fs == 0.0) return s;
        if ((fs < 0) == (flo < 0)) {
          lo = s;
          flo = fs;
        } else {
          hi = s;
        }
        const double d = c.derivative(s, 2).dot(xi);
        double next = d != 0.0 ? s - fs / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-16 * (1.0 + std::abs(s))) return next;
        s = next;
      }
      return s;
    }
    a = b;
    fa = fb;
  }
  throw NotConverged("no critical point of <gamma', xi> in the window");
}

double u_mu_from_omega(const Vec3& w) {
  if (w(2) == 0.0) throw DivByZeroGamma2("<gamma''(s_mu), xi> = 0");
  return w(1) - 0.5 * w(0) * w(0) / w(2);
}

double u_mu(const Curve& c, double s_mu, const Vec3& xi, double tau) {
  const Vec3 w(c.derivative(s_mu, 1).dot(xi), tau + c.eval(s_mu).dot(xi), c.derivative(s_mu, 2).dot(xi));
  return u_mu_from_omega(w);
}

nlohmann::json UmuReport::to_json() const {
  return {{"samples", samples},
          {"M", M},
          {"max_ratio_one", max_ratio_one},
          {"max_ratio_two", max_ratio_two},
          {"max_abs_one_at_scr", max_abs_one_at_scr},
          {"holds", holds}};
}

UmuReport verify_umu_approximation(const Curve& c, double s_mu, const UmuOptions& opt) {
  UmuReport rep;
  rep.M = opt.M > 0 ? opt.M : curve_bound_M(c);
  rep.samples = opt.samples;
  const double K = std::ldexp(1.0, opt.k);
  std::vector<Vec3> out(opt.samples);
  parallel_for(opt.samples, [&](std::size_t i) {
    CounterRng rng(opt.seed, i);
    // keep |s_cr - s_mu| and |s - s_cr| away from 0, where both bounds vanish and only rounding is left
    auto offset = [&](double scale) { return rng.next_sign() * scale * rng.next(1e-3, 1.0); };
    const double scr = s_mu + offset(2 * opt.r0);
    const FrenetFrame F = frenet_frame(c, scr);
    const double phi = rng.next(-opt.max_angle, opt.max_angle);
    const double mag = K * rng.next(0.5, 2.0);
    const Vec3 xi = mag * (std::cos(phi) * F.N + std::sin(phi) * F.B);
    const double s = scr + offset(2 * opt.r0);

    const double d1 = c.derivative(s, 1).dot(xi), d2 = c.derivative(s, 2).dot(xi);
    const double lhs1 = std::abs(s - scr - d1 / d2);
    const double r1 = lhs1 / (6 * rep.M * (s - scr) * (s - scr));

    // U_mu - (tau + <gamma(s_cr), xi>) = <gamma(s_mu) - gamma(s_cr), xi> - w1^2 / (2 w3); tau cancels.
    const double w1 = c.derivative(s_mu, 1).dot(xi), w3 = c.derivative(s_mu, 2).dot(xi);
    const double lhs2 = std::abs(c.displacement(s_mu, scr).dot(xi) - 0.5 * w1 * w1 / w3);
    const double h = std::abs(scr - s_mu);
    const double r2 = lhs2 / (13 * rep.M * h * h * h * mag);

    const double at_scr = std::abs(c.derivative(scr, 1).dot(xi) / c.derivative(scr, 2).dot(xi));
    out[i] = Vec3(r1, r2, at_scr);
  });
  for (const Vec3& v : out) {
    rep.max_ratio_one = std::max(rep.max_ratio_one, v(0));
    rep.max_ratio_two = std::max(rep.max_ratio_two, v(1));
    rep.max_abs_one_at_scr = std::max(rep.max_abs_one_at_scr, v(2));
  }
  rep.holds = rep.max_ratio_one <= 1.0 && rep.max_ratio_two <= 1.0;
  return rep;
}

std::array<Vec3, 3> plate_directions(double a) {
  return {Vec3(a, a * a / 2, 1.0), Vec3(1.0, a, 0.0), Vec3(-a, 1.0, a * a / 2)};
}

namespace {

PlMembership plate_test(const Vec3& w, double alpha_bar, int n, double r1, double K) {
  const auto u = plate_directions(alpha_bar);
  PlMembership m;
  const double b1 = 4 * K, b2 = 16 * K * std::ldexp(r1, n), b3 = 8 * K * std::ldexp(r1 * r1, 2 * n);
  m.ratios = Vec3(std::abs(u[0].dot(w)) / b1, std::abs(u[1].dot(w - w(2) * u[0])) / b2, std::abs(u[2].dot(w)) / b3);
  m.inside = m.ratios.maxCoeff() <= 1.0;
  return m;
}

}  // namespace

PlMembership pl_plate_membership(const OmegaMap& omega, double s_nnu, int n, double r1, int k, const Vec4& Xi) {
  return plate_test(omega(Xi), omega.s_mu - s_nnu, n, r1, std::ldexp(1.0, k));
}

nlohmann::json CensusReport::to_json() const {
  return {{"points", points},
          {"support_points", support_points},
          {"max_multiplicity_a", max_multiplicity_a},
          {"max_multiplicity_b", max_multiplicity_b},
          {"max_n_a", max_n_a},
          {"max_n_b", max_n_b},
          {"max_a_scale", max_a_scale},
          {"max_b_scale", max_b_scale},
          {"plate_checks", plate_checks},
          {"plate_failures", plate_failures},
          {"plate_checks_far", plate_checks_far},
          {"plate_failures_far", plate_failures_far},
          {"max_plate_ratio", max_plate_ratio},
          {"reconstruction_error", reconstruction_error},
          {"hypothesis", hypothesis},
          {"multiplicity_ok", multiplicity_ok},
          {"vanishing_ok", vanishing_ok},
          {"plates_ok", plates_ok}};
}

CensusReport support_census(const Curve& c, const CensusOptions& opt) {
  // Everything is computed at |xi| ~ 1: the defining conditions are homogeneous
  // in 2^k, so the scale is carried by opt.k only in the reports.
  const CutoffSystem cut = build_cutoffs();
  const double M = opt.M > 0 ? opt.M : curve_bound_M(c);
  const double r0 = opt.r0, r1 = opt.r1;
  CensusReport rep;
  rep.points = opt.samples;
  rep.hypothesis = r1 >= 100 * M * std::pow(r0, 1.5);
  // Levels past n_top cannot be reached: x <= (|U| + h^2) stays below 64 r0^2.
  int n_top = 1;
  while (std::ldexp(r1 * r1, 2 * n_top - 3) < 64 * r0 * r0) ++n_top;
  ++n_top;

  struct PointResult {
    bool support = false;
    int mult_a = 0, mult_b = 0, max_n_a = -1, max_n_b = -1;
    double a_scale = 0, b_scale = 0, recon = 0, plate_ratio = 0;
    int checks = 0, fails = 0, checks_far = 0, fails_far = 0;
  };
  std::vector<PointResult> res(opt.samples);

  parallel_for(opt.samples, [&](std::size_t i) {
    CounterRng rng(opt.seed, i);
    PointResult pr;
    const double scr = rng.next(-0.1, 0.1);
    const FrenetFrame F = frenet_frame(c, scr);
    const double phi = rng.next(-opt.max_angle, opt.max_angle);
    const Vec3 xi = rng.next(0.6, 1.9) * (std::cos(phi) * F.N + std::sin(phi) * F.B);
    const double xnorm = xi.norm();
    const long mu0 = std::lround(scr / r0);
    // w_ref = tau + <gamma(s^{mu0}), xi>, log-uniform over the dyadic range of the symbols
    const double w_ref = rng.next_sign() * 8 * r0 * r0 * std::exp2(-rng.next(0.0, 2.0 * (n_top + 3)));
    const double h_s = rng.next_sign() * 4 * r0 * std::exp2(-rng.next(0.0, n_top + 4.0));
    const double s = scr + h_s;

    for (long mu = mu0 - 3; mu <= mu0 + 3; ++mu) {
      const double smu = mu * r0;
      const Vec3 w(c.derivative(smu, 1).dot(xi), w_ref + c.displacement(smu, mu0 * r0).dot(xi),
                   c.derivative(smu, 2).dot(xi));
      const double base = cut.eta0((smu - scr) / (2 * r0)) * cut.eta0(w(1) / (8 * r0 * r0)) *
                          cut.eta0((xnorm - 1.25) / 0.75);
      if (base == 0.0) continue;
      pr.support = true;
      const double U = std::abs(u_mu_from_omega(w));
      const double Ue = u_mu_from_omega(w);

      // reconstruction at the sampled s
      auto piece_at = [&](double sv, int n, long nu, int kind) {
        // kind 0: a_{0,nu}, 1: a_{n,nu}, 2: b_{n,nu}
        const double h = sv - scr;
        const double x = U + h * h;
        double v = base * cut.eta0((sv - smu) / (2 * r0)) * cut.zeta(sv / std::ldexp(r1, n) - nu);
        if (v == 0.0) return 0.0;
        if (kind == 0) return v * cut.eta0(x / (r1 * r1));
        v *= cut.eta1(std::ldexp(x / (r1 * r1), 2 - 2 * n));
        const double E = Ue == 0.0 ? (h == 0.0 ? 1.0 : 0.0) : cut.eta0(h * h / (std::ldexp(1.0, -8) * Ue));
        return kind == 1 ? v * E : v * (1.0 - E);
      };
      {
        double sum = 0.0;
        for (int n = 0; n <= n_top; ++n) {
          const long c0 = static_cast<long>(std::floor(s / std::ldexp(r1, n)));
          for (long nu = c0 - 1; nu <= c0 + 2; ++nu) {
            if (n == 0)
              sum += piece_at(s, 0, nu, 0);
            else
              sum += piece_at(s, n, nu, 1) + piece_at(s, n, nu, 2);
          }
        }
        const double target = base * cut.eta0((s - smu) / (2 * r0));
        pr.recon = std::max(pr.recon, std::abs(sum - target));
      }

      // s-projected supports, decided exactly from the interval conditions
      for (int n = 0; n <= n_top; ++n) {
        const double width = std::ldexp(r1, n);
        const double lev_lo = n == 0 ? -1.0 : std::ldexp(r1 * r1, 2 * n - 3) - U;
        const double lev_hi = n == 0 ? r1 * r1 - U : std::ldexp(r1 * r1, 2 * n) - U;
        if (!(lev_hi > 0.0)) continue;
        const long nlo = static_cast<long>(std::floor((smu - 2 * r0) / width)) - 1;
        const long nhi = static_cast<long>(std::ceil((smu + 2 * r0) / width)) + 1;
        for (long nu = nlo; nu <= nhi; ++nu) {
          const double a = std::max(smu - 2 * r0, width * (nu - 1)) - scr;
          const double b = std::min(smu + 2 * r0, width * (nu + 1)) - scr;
          if (!(b > a)) continue;
          for (int kind = 0; kind < 2; ++kind) {
            bool nonzero;
            if (n == 0) {
              if (kind == 1) continue;
              nonzero = meets_shell(a, b, lev_lo, lev_hi);
            } else if (kind == 0) {
              nonzero = meets_shell(a, b, lev_lo, std::min(lev_hi, std::ldexp(U, -8)));
            } else {
              nonzero = meets_shell(a, b, std::max(lev_lo, std::ldexp(U, -9)), lev_hi);
            }
            if (!nonzero) continue;
            const double scale = width / r0;
            if (kind == 0) {
              ++pr.mult_a;
              pr.max_n_a = std::max(pr.max_n_a, n);
              pr.a_scale = std::max(pr.a_scale, scale);
            } else {
              ++pr.mult_b;
              pr.max_n_b = std::max(pr.max_n_b, n);
              pr.b_scale = std::max(pr.b_scale, scale);
            }
            const double snnu = width * nu;
            const PlMembership pm = plate_test(w, smu - snnu, n, r1, 1.0);
            if (std::abs(snnu - smu) <= 2 * r0) {
              ++pr.checks;
              pr.fails += !pm.inside;
              pr.plate_ratio = std::max(pr.plate_ratio, pm.ratios.maxCoeff());
            } else {
              ++pr.checks_far;
              pr.fails_far += !pm.inside;
            }
          }
        }
      }
    }
    res[i] = pr;
  });

  for (const PointResult& p : res) {
    rep.support_points += p.support;
    rep.max_multiplicity_a = std::max(rep.max_multiplicity_a, p.mult_a);
    rep.max_multiplicity_b = std::max(rep.max_multiplicity_b, p.mult_b);
    rep.max_n_a = std::max(rep.max_n_a, p.max_n_a);
    rep.max_n_b = std::max(rep.max_n_b, p.max_n_b);
    rep.max_a_scale = std::max(rep.max_a_scale, p.a_scale);
    rep.max_b_scale = std::max(rep.max_b_scale, p.b_scale);
    rep.plate_checks += p.checks;
    rep.plate_failures += p.fails;
    rep.plate_checks_far += p.checks_far;
    rep.plate_failures_far += p.fails_far;
    rep.max_plate_ratio = std::max(rep.max_plate_ratio, p.plate_ratio);
    rep.reconstruction_error = std::max(rep.reconstruction_error, p.recon);
  }
  rep.multiplicity_ok = rep.max_multiplicity_a <= 75 && rep.max_multiplicity_b <= 75;
  rep.vanishing_ok = rep.max_a_scale <= 16.0 && rep.max_b_scale <= 128.0;
  rep.plates_ok = rep.plate_failures == 0 && rep.plate_checks > 0;
  return rep;
}

nlohmann::json RSchedule::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"n", r.n}, {"log2_r0", r.log2_r0}, {"log2_r1", r.log2_r1}, {"hypothesis", r.hypothesis}});
  return {{"k", k},
          {"eps0", eps0},
          {"eps1", eps1},
          {"M", M},
          {"d", d},
          {"contracting", contracting},
          {"N", N},
          {"hypothesis_all", hypothesis_all},
          {"terminal_lower", terminal_lower},
          {"terminal_upper", terminal_upper},
          {"C", C},
          {"k_contracting", k_contracting},
          {"rows", rs}};
}

std::string RSchedule::to_csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "n,log2_r0,log2_r1,hypothesis\n";
  for (const auto& r : rows) o << r.n << ',' << r.log2_r0 << ',' << r.log2_r1 << ',' << r.hypothesis << '\n';
  return o.str();
}

RSchedule r_schedule(int k, double eps0, double M, int d) {
  if (k < 10) throw DomainError("r schedule needs k >= 10");
  if (!(eps0 > 0) || !(M > 0) || d < 1) throw DomainError("r schedule needs eps0 > 0, M > 0, d >= 1");
  RSchedule rs;
  rs.k = k;
  rs.eps0 = eps0;
  rs.M = M;
  rs.d = d;
  rs.eps1 = eps0 * eps0 / (d * M);
  const double lM = std::log2(M), l100M = std::log2(100 * M);
  const double b0 = lM - k * rs.eps1, b1 = l100M - k * rs.eps1;
  rs.contracting = b1 < 0.0;
  rs.k_contracting = static_cast<int>(std::floor(l100M / rs.eps1)) + 1;
  const double target = -k * (0.5 - rs.eps1);
  auto row = [&](int n) {
    RScheduleRow r;
    r.n = n;
    r.log2_r0 = std::pow(1.5, n) * b0;
    r.log2_r1 = std::pow(1.5, n + 1) * b1;
    r.hypothesis = r.log2_r1 >= l100M + 1.5 * r.log2_r0;
    return r;
  };
  if (!rs.contracting) {
    for (int n = 0; n <= 8; ++n) rs.rows.push_back(row(n));
  } else {
    if (row(0).log2_r1 < target) throw ScheduleEmpty("r1(0) is already below 2^{-k(1/2 - eps1)}");
    for (int n = 0; row(n).log2_r1 >= target; ++n) rs.rows.push_back(row(n));
    rs.N = static_cast<int>(rs.rows.size()) - 1;
    const double last = rs.rows.back().log2_r1;
    rs.terminal_lower = last >= target;
    rs.terminal_upper = last <= -0.5 * k + 2 * k * rs.eps1;
    rs.C = rs.N * rs.eps1;
  }
  rs.hypothesis_all = std::all_of(rs.rows.begin(), rs.rows.end(), [](const RScheduleRow& r) { return r.hypothesis; });
  return rs;
}

// Probe profiles: tangent and time axes centred bumps on [-1,1], the first normal
// axis a bump on [0.75, 1.25], the second normal axis a bump on [-0.25, 0.25].
double probe_profile(int axis, double w) {
  static const CutoffSystem cut = build_cutoffs();
  switch (axis) {
    case 0:
    case 3: return cut.eta0(w);
    case 1: return cut.eta0((w - 1.0) / 0.25);
    case 2: return cut.eta0(w / 0.25);
    default: throw DomainError("probe axis out of range");
  }
}

cplx probe_profile_transform(int axis, double y) {
  const double lo = axis == 1 ? 0.75 : (axis == 2 ? -0.25 : -1.0);
  const double hi = axis == 1 ? 1.25 : (axis == 2 ? 0.25 : 1.0);
  const int panels = 16 + static_cast<int>(std::abs(y) * (hi - lo));
  const GaussRule g = composite_gauss(lo, hi, panels, 10);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    acc += g.weights[i] * probe_profile(axis, g.nodes[i]) * std::exp(cplx(0.0, g.nodes[i] * y));
  return acc;
}

nlohmann::json KernelDecayReport::to_json() const {
  return {{"center", center},
          {"trivial_bound", trivial_bound},
          {"scale_tangent", scale_tangent},
          {"scale_normal", scale_normal},
          {"scale_time", scale_time},
          {"target_tangent", target_tangent},
          {"target_normal", target_normal},
          {"target_time", target_time},
          {"l1_bound", l1_bound},
          {"hormander_constant", hormander_constant}};
}

namespace {

// L1 norm of the profile's transform from an FFT of a fine sample of psi.
double profile_transform_l1(int axis) {
  const int n = 1 << 16;
  const double W = 64.0;  // sampled w-range [-W/2, W/2); dy = 2 pi / W
  fftw_complex* buf = fftw_alloc_complex(n);
  for (int i = 0; i < n; ++i) {
    const double w = -W / 2 + W * i / n;
    buf[i][0] = probe_profile(axis, w);
    buf[i][1] = 0.0;
  }
  fftw_plan p;
  {
    std::lock_guard<std::mutex> g(detail::fftw_planner_mutex());
    p = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(p);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::hypot(buf[i][0], buf[i][1]);
  {
    std::lock_guard<std::mutex> g(detail::fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
  fftw_free(buf);
  // transform values are (W / n) * sum; the y-spacing is 2 pi / W
  return sum * (W / n) * (2 * M_PI / W);
}

// Smallest y > 0 where |f(y)| drops to half of |f(0)|, by scanning then bisection.
double half_width(const std::function<double(double)>& f, double step) {
  const double f0 = f(0.0);
  double a = 0.0, b = step;
  while (f(b) > 0.5 * f0) {
    a = b;
    b += step;
    if (b > 1e6 * step) throw NotConverged("profile does not decay");
  }
  for (int it = 0; it < 60; ++it) {
    const double m = 0.5 * (a + b);
    (f(m) > 0.5 * f0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

KernelDecayReport kernel_decay_probe(const Curve& c, double s, const KernelDecayOptions& opt) {
  KernelDecayReport rep;
  const double K = std::ldexp(1.0, opt.k), r = opt.r;
  const ShearDilation sd = shear_dilation(c, s, r);
  const FrenetFrame F = frenet_frame(c, s);
  Mat4 B = Mat4::Zero();  // columns: frame of the probe's tensor structure
  B.col(0) = lift(F.T);
  B.col(1) = lift(F.N);
  B.col(2) = lift(F.B);
  B(3, 3) = 1.0;
  const Mat4 Linv = sd.L.inverse();
  const Vec3 g = c.eval(s);

  auto m = [&](const Vec4& Xi) {
    const Vec4 z = B.transpose() * (Linv * Xi) / K;
    double v = 1.0;
    for (int i = 0; i < 4 && v != 0.0; ++i) v *= probe_profile(i, z(i));
    return v;
  };
  // F(Y) = |det L| K^4 prod psi_check_i(K (B^T L^T Y)_i)
  const double detL = std::abs(sd.L.determinant());
  auto Fhat = [&](const Vec4& Y) {
    const Vec4 z = K * (B.transpose() * (sd.L.transpose() * Y));
    cplx v = detL * K * K * K * K;
    for (int i = 0; i < 4; ++i) v *= probe_profile_transform(i, z(i));
    return v;
  };
  const GaussRule tr = composite_gauss(0.5, 2.0, opt.t_panels, 10);
  auto kernel = [&](const Vec3& x, double tp) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
      const double t = tr.nodes[i];
      acc += tr.weights[i] * Fhat(lift(x - t * g, tp - t));
    }
    return std::abs(acc);
  };

  const double tp = opt.t_prime;
  const Vec3 x0 = tp * g;
  rep.center = kernel(x0, tp);
  double sup = detL * K * K * K * K * 1.5;
  for (int i = 0; i < 4; ++i) sup *= std::abs(probe_profile_transform(i, 0.0));
  rep.trivial_bound = sup;

  rep.target_tangent = K * r;
  rep.target_normal = K;
  rep.target_time = K * r * r;
  // Reference half-widths of the unit-scale profiles.
  auto prof = [](int axis) { return [axis](double y) { return std::abs(probe_profile_transform(axis, y)); }; };
  const double y0 = half_width(prof(0), 0.05), y2 = half_width(prof(2), 0.05), y3 = half_width(prof(3), 0.05);
  rep.scale_tangent = y0 / half_width([&](double rho) { return kernel(x0 + rho * F.T, tp); }, 0.05 / (K * r));
  rep.scale_normal = y2 / half_width([&](double rho) { return kernel(x0 + rho * F.B, tp); }, 0.05 / K);
  rep.scale_time = y3 / half_width([&](double d) { return std::abs(Fhat(lift(x0 - (tp - d) * g, d))); }, 0.05 / (K * r * r));

  // int |K| dy <= int dt ||F(., t' - t)||_1 = prod ||psi_check_i||_1, independent of k and r;
  // reported for the kernel carrying the (2 pi)^{-4} of the inverse transform.
  rep.l1_bound = std::pow(2 * M_PI, -4);
  for (int i = 0; i < 4; ++i) rep.l1_bound *= profile_transform_l1(i);

  // Hormander check on the pulled-back symbol m(L Xi) by central differences.
  CounterRng rng(opt.seed);
  double hc = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec4 z(rng.next(-1, 1), rng.next(0.75, 1.25), rng.next(-0.25, 0.25), rng.next(-1, 1));
    const Vec4 Xi = K * (B * z);  // L-preimage coordinates
    const double h = 1e-3 * K, nXi = Xi.norm();
    auto mL = [&](const Vec4& X) { return m(sd.L * X); };
    for (int a = 0; a < 4; ++a) {
      const Vec4 ea = Vec4::Unit(a) * h;
      const double d1 = (mL(Xi + ea) - mL(Xi - ea)) / (2 * h);
      hc = std::max(hc, nXi * std::abs(d1));
      for (int b = a; b < 4; ++b) {
        const Vec4 eb = Vec4::Unit(b) * h;
        const double d2 = (mL(Xi + ea + eb) - mL(Xi + ea - eb) - mL(Xi - ea + eb) + mL(Xi - ea - eb)) / (4 * h * h);
        hc = std::max(hc, nXi * nXi * std::abs(d2));
      }
    }
  }
  rep.hormander_constant = hc;
  return rep;
}

Vec3 LlnuRescaling::delta(const Vec3& e) const {
  return {std::ldexp(e(0), l), std::ldexp(e(1), 2 * l), std::ldexp(e(2), 3 * l)};
}

Vec3 LlnuRescaling::delta_inv(const Vec3& e) const {
  return {std::ldexp(e(0), -l), std::ldexp(e(1), -2 * l), std::ldexp(e(2), -3 * l)};
}

Vec3 LlnuRescaling::Gamma(double u) const {
  return delta(U.transpose() * curve.displacement(s_nu + std::ldexp(u, -l), s_nu));
}

Vec3 LlnuRescaling::Gamma_derivative(double u, int order) const {
  if (order == 0) return Gamma(u);
  return std::ldexp(1.0, -order * l) * delta(U.transpose() * curve.derivative(s_nu + std::ldexp(u, -l), order));
}

double LlnuRescaling::c5_norm(double u_max, int samples) const {
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double u = -u_max + 2 * u_max * i / (samples - 1);
    for (int j = 0; j <= Curve::kMaxOrder; ++j) m = std::max(m, Gamma_derivative(u, j).norm());
  }
  return m;
}

LlnuRescaling rescale_llnu(const Curve& c, int l, int nu) {
  LlnuRescaling R{c, l, nu, std::ldexp(static_cast<double>(nu), -l)};
  const FrenetFrame F = frenet_frame(c, R.s_nu);
  R.U.col(0) = F.T;
  R.U.col(1) = F.N;
  R.U.col(2) = F.B;
  return R;
}

nlohmann::json CurvatureBandReport::to_json() const {
  return {{"points", points},
          {"min_ratio", min_ratio},
          {"max_ratio", max_ratio},
          {"in_band_fraction", in_band_fraction},
          {"min_ratio_critical", min_ratio_critical},
          {"max_ratio_critical", max_ratio_critical},
          {"band_holds", band_holds},
          {"critical_band_holds", critical_band_holds}};
}

CurvatureBandReport curvature_band(const Curve& c, int k, int l, int nu, int samples, std::uint64_t seed) {
  SymbolPiece p = make_symbol(c, k);
  p.kind = PieceKind::Aklnu;
  p.l = l;
  p.nu = nu;
  const auto pts = sample_piece_support(p, samples, seed);
  const LlnuRescaling R = rescale_llnu(c, l, nu);
  const double K = std::ldexp(1.0, k);
  CurvatureBandReport rep;
  rep.min_ratio = rep.min_ratio_critical = INFINITY;
  int in_band = 0;
  for (const SupportSample& a : pts) {
    const Vec3 eta = R.L_inv(K * a.xi);
    const double u = std::ldexp(a.s - R.s_nu, l);
    const double ratio = std::abs(R.Gamma_derivative(u, 2).dot(eta)) / eta.norm();
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    in_band += ratio >= 0.125 && ratio <= 8.0;
    try {
      const double sc = s_critical(c, a.xi, {R.s_nu - std::ldexp(1.0, -l), R.s_nu + std::ldexp(1.0, -l)});
      const double rc = std::abs(R.Gamma_derivative(std::ldexp(sc - R.s_nu, l), 2).dot(eta)) / eta.norm();
      rep.min_ratio_critical = std::min(rep.min_ratio_critical, rc);
      rep.max_ratio_critical = std::max(rep.max_ratio_critical, rc);
    } catch (const NotConverged&) {
    }
    ++rep.points;
  }
  rep.in_band_fraction = rep.points ? double(in_band) / rep.points : 0.0;
  rep.band_holds = rep.points > 0 && in_band == rep.points;
  rep.critical_band_holds = rep.min_ratio_critical >= 0.125 && rep.max_ratio_critical <= 8.0;
  return rep;
}

}  // namespace conewolff
