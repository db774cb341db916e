#include "conewolff/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conewolff/cutoffs.hpp"
#include "conewolff/errors.hpp"
#include "conewolff/fit.hpp"
#include "conewolff/parallel.hpp"
#include "conewolff/rng.hpp"
#include "fft.hpp"

namespace conewolff {

namespace {

const CutoffSystem kCut = build_cutoffs();

std::vector<double> log2_of(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(std::log2(x));
  return out;
}

}  // namespace

double ParamCutoff::operator()(double s) const { return kCut.eta0((s - center) / halfwidth); }

double curve_diameter(const Curve& c, const ParamCutoff& chi, int samples) {
  const Interval I = chi.support();
  std::vector<Vec3> pts;
  for (int i = 0; i < samples; ++i) pts.push_back(c.eval(I.lo + I.length() * i / (samples - 1)));
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

MeasureTransform::MeasureTransform(const Curve& c, const ParamCutoff& chi, double max_phase_span) {
  const Interval I = chi.support();
  if (I.lo < c.domain().lo - 1e-12 || I.hi > c.domain().hi + 1e-12)
    throw DomainError("cutoff support leaves the curve's domain");
  diameter = curve_diameter(c, chi);
  // about 8 radians of phase per 16-point panel; the floor resolves chi itself
  const int panels = std::max(16, static_cast<int>(std::ceil(max_phase_span / 8.0)));
  const GaussRule r = composite_gauss(I.lo, I.hi, panels, 16);
  for (std::size_t j = 0; j < r.nodes.size(); ++j) {
    const double w = r.weights[j] * chi(r.nodes[j]);
    if (w == 0.0) continue;
    points.push_back(c.eval(r.nodes[j]));
    weights.push_back(w);
  }
}

cplx MeasureTransform::operator()(const Vec3& xi, double t) const {
  cplx s = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) s += weights[j] * std::polar(1.0, -t * points[j].dot(xi));
  return s;
}

void check_wraparound(const Grid3& g, const Curve& c, const ParamCutoff& chi, double t) {
  const double d = t * curve_diameter(c, chi);
  if (d > g.L() / 2 - g.L() / 16) {
    std::ostringstream o;
    o << "t diam(gamma) = " << d << " exceeds L/2 - L/16 = " << g.L() / 2 - g.L() / 16;
    throw WraparoundRisk(o.str());
  }
}

LatticeSymbol averaging_symbol(const Grid3& g, const Curve& c, const ParamCutoff& chi, double t,
                               const Eigen::Vector3i& extent) {
  const int n = g.n();
  LatticeSymbol out(g.size(), cplx(0.0));
  if ((extent.array() < 0).any()) return out;
  const Eigen::Vector3i e = extent.cwiseMin(n / 2);
  const double span = t * curve_diameter(c, chi) * g.dxi() * e.cast<double>().norm();
  const MeasureTransform mt(c, chi, span);
  const int J = static_cast<int>(mt.points.size());

  // exp(-i t gamma_d(s_j) dxi m) for m = -e_d..e_d; the symbol is a product over axes
  std::array<Eigen::MatrixXcd, 3> E;
  for (int d = 0; d < 3; ++d) {
    E[d].resize(J, 2 * e(d) + 1);
    for (int j = 0; j < J; ++j)
      for (int m = -e(d); m <= e(d); ++m) E[d](j, m + e(d)) = std::polar(1.0, -t * mt.points[j](d) * g.dxi() * m);
  }
  const Eigen::MatrixXcd E2t = E[2].transpose();
  auto nyq_weight = [&](int m) { return std::abs(m) == n / 2 ? 0.5 : 1.0; };

  // slabs m0 = +-n/2 share a slot, so they are accumulated in order rather than in parallel
  const int M0 = 2 * e(0) + 1;
  std::vector<Eigen::MatrixXcd> slabs(static_cast<std::size_t>(M0));
  auto build = [&](std::size_t i) {
    const int m0 = static_cast<int>(i) - e(0);
    Eigen::MatrixXcd B(J, 2 * e(1) + 1);
    for (int j = 0; j < J; ++j) {
      const cplx a = mt.weights[j] * E[0](j, m0 + e(0));
      for (int m1 = 0; m1 < B.cols(); ++m1) B(j, m1) = a * E[1](j, m1);
    }
    slabs[i] = E2t * B;
  };
  parallel_for(static_cast<std::size_t>(M0), build);
  for (int i = 0; i < M0; ++i) {
    const int m0 = i - e(0);
    const Eigen::MatrixXcd& R = slabs[static_cast<std::size_t>(i)];
    for (int m1 = -e(1); m1 <= e(1); ++m1)
      for (int m2 = -e(2); m2 <= e(2); ++m2) {
        const double w = nyq_weight(m0) * nyq_weight(m1) * nyq_weight(m2);
        out[g.index(g.slot(m0), g.slot(m1), g.slot(m2))] += w * R(m2 + e(2), m1 + e(1));
      }
    slabs[static_cast<std::size_t>(i)].resize(0, 0);
  }
  return out;
}

LatticeSymbol averaging_symbol(const Grid3& g, const Curve& c, const ParamCutoff& chi, double t) {
  return averaging_symbol(g, c, chi, t, Eigen::Vector3i::Constant(g.n() / 2));
}

Field3 averaging_operator(const Field3& f, const Curve& c, const ParamCutoff& chi, double t) {
  if (!(t >= 0.5 && t <= 2.0)) throw DomainError("averaging needs t in [1/2, 2]");
  check_wraparound(f.grid(), c, chi, t);
  return apply_multiplier(f, averaging_symbol(f.grid(), c, chi, t, spectral_extent(f)));
}

Field3 maximal_operator(const Field3& f, const Curve& c, const ParamCutoff& chi, const std::vector<double>& ts) {
  if (ts.empty()) throw DomainError("maximal operator needs at least one t");
  std::vector<cplx> m(f.grid().size(), cplx(0.0));
  const Field3 F = f.to_frequency();
  for (double t : ts) {
    const Field3 a = averaging_operator(F, c, chi, t).to_physical();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i].real(), std::abs(a[i]));
  }
  return Field3(f.grid(), std::move(m), Space::physical);
}

std::vector<double> default_t_samples(int count) {
  std::vector<double> ts;
  for (int i = 0; i < count; ++i) ts.push_back(1.0 + static_cast<double>(i) / (count - 1));
  return ts;
}

double band_profile(int k, const Vec3& xi) { return kCut.eta0((xi.norm() * std::ldexp(1.0, -k) - 1.25) / 0.75); }

namespace {

void check_band(const Grid3& g, int k) {
  if (std::ldexp(1.0, k + 1) > g.nyquist() * (1 + 1e-12)) throw DomainError("band 2^{k+1} exceeds the lattice");
}

Eigen::Vector3i band_extent(const Grid3& g, int k) {
  return Eigen::Vector3i::Constant(std::min(g.n() / 2, static_cast<int>(std::ceil(std::ldexp(1.0, k + 1) / g.dxi()))));
}

}  // namespace

Field3 band_limited_random_field(const Grid3& g, int k, std::uint64_t seed) {
  check_band(g, k);
  const CounterRng rng(seed, 0xb4d);
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double b = band_profile(k, g.frequency(i));
    if (b == 0.0) continue;
    const double u1 = 1.0 - rng.uniform(2 * i), u2 = rng.uniform(2 * i + 1);
    v[i] = b * std::polar(std::sqrt(-2.0 * std::log(u1)), 2.0 * M_PI * u2);
  }
  return Field3(g, std::move(v), Space::frequency).real_part();
}

Field3 focusing_field(const Grid3& g, const Curve& c, const ParamCutoff& chi, int k) {
  check_band(g, k);
  const LatticeSymbol mu = averaging_symbol(g, c, chi, 1.0, band_extent(g, k));
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = band_profile(k, g.frequency(i)) * std::conj(mu[i]);
  return Field3(g, std::move(v), Space::frequency).real_part();
}

double sobolev_ratio(const Field3& f, const Curve& c, const ParamCutoff& chi, double p, double alpha, int oversample) {
  check_wraparound(f.grid(), c, chi, 1.0);
  LatticeSymbol m = averaging_symbol(f.grid(), c, chi, 1.0, spectral_extent(f));
  const Grid3& g = f.grid();
  for (std::size_t i = 0; i < m.size(); ++i) m[i] *= std::pow(1.0 + g.frequency(i).squaredNorm(), 0.5 * alpha);
  return lp_norm(apply_multiplier(f, m), p, oversample) / lp_norm(f, p, oversample);
}

nlohmann::json SobolevSweep::to_json() const {
  nlohmann::json rj = nlohmann::json::array();
  for (const auto& r : rows) rj.push_back({{"k", r.k}, {"input", r.input}, {"ratio", r.ratio}});
  return {{"curve", curve}, {"p", p}, {"alpha", alpha}, {"ks", ks}, {"sup_ratio", sup_ratio}, {"slope", slope},
          {"rows", rj}};
}

std::string SobolevSweep::to_csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "k,alpha,input,ratio\n";
  for (const auto& r : rows) o << r.k << ',' << alpha << ',' << r.input << ',' << r.ratio << '\n';
  return o.str();
}

SobolevSweep sobolev_sweep(const Curve& c, const SobolevSweepOptions& opt) {
  if (opt.ks.size() < 2) throw DomainError("sobolev sweep needs two bands");
  SobolevSweep sw;
  sw.curve = c.name();
  sw.p = opt.p;
  sw.alpha = opt.alpha;
  sw.ks = opt.ks;
  std::vector<double> xs;
  for (int k : opt.ks) {
    std::vector<std::pair<std::string, Field3>> inputs;
    inputs.emplace_back("focusing", focusing_field(opt.grid, c, opt.chi, k));
    for (int r = 0; r < opt.random_seeds; ++r)
      inputs.emplace_back("random:" + std::to_string(opt.seed + r), band_limited_random_field(opt.grid, k, opt.seed + r));
    double sup = 0.0;
    for (const auto& [name, f] : inputs) {
      const double q = sobolev_ratio(f, c, opt.chi, opt.p, opt.alpha, opt.oversample);
      sw.rows.push_back({k, name, q});
      sup = std::max(sup, q);
    }
    sw.sup_ratio.push_back(sup);
    xs.push_back(k);
  }
  sw.slope = fit_line(xs, log2_of(sw.sup_ratio)).slope;
  return sw;
}

nlohmann::json MaximalReport::to_json() const {
  return {{"curve", curve}, {"p", ps}, {"ratio", ratios}, {"t_samples", t_samples},
          {"note", "sampled sup over t in [1,2], report only"}};
}

std::string MaximalReport::to_csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "p,ratio\n";
  for (std::size_t i = 0; i < ps.size(); ++i) o << ps[i] << ',' << ratios[i] << '\n';
  return o.str();
}

MaximalReport maximal_report(const Curve& c, const MaximalReportOptions& opt) {
  const Field3 f = band_limited_random_field(opt.grid, opt.k, opt.seed);
  const Field3 M = maximal_operator(f, c, opt.chi, opt.ts);
  MaximalReport r;
  r.curve = c.name();
  r.ps = opt.ps;
  r.t_samples = static_cast<int>(opt.ts.size());
  for (double p : opt.ps) r.ratios.push_back(lp_norm(M, p) / lp_norm(f, p));
  return r;
}

nlohmann::json LocalSmoothingReport::to_json() const {
  nlohmann::json rj = nlohmann::json::array();
  for (const auto& r : rows) rj.push_back({{"k", r.k}, {"alpha", r.alpha}, {"nt", r.nt}, {"ratio", r.ratio}});
  return {{"curve", curve}, {"p", p}, {"alphas", alphas}, {"slopes", slopes}, {"rows", rj},
          {"note", "report only; thresholds 1/p (fixed time) and 4/(3p) (space-time)"}};
}

std::string LocalSmoothingReport::to_csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "k,alpha,nt,ratio\n";
  for (const auto& r : rows) o << r.k << ',' << r.alpha << ',' << r.nt << ',' << r.ratio << '\n';
  return o.str();
}

LocalSmoothingReport local_smoothing_probe(const Curve& c, const LocalSmoothingOptions& opt) {
  const Grid3& g = opt.grid;
  const double t0 = 0.25, T = 2.0;
  check_wraparound(g, c, opt.chi, 2.0);
  LocalSmoothingReport rep;
  rep.curve = c.name();
  rep.p = opt.p;
  rep.alphas = opt.alphas;
  std::vector<std::vector<double>> per_alpha(opt.alphas.size());
  for (int k : opt.ks) {
    int nt = 1;
    while (nt < std::ldexp(1.0, k + 1) * opt.t_oversample) nt *= 2;
    if (static_cast<double>(nt) * g.size() > static_cast<double>(opt.max_points))
      throw GridTooLarge("space-time grid above the point budget");
    std::vector<Field3> inputs{focusing_field(g, c, opt.chi, k), band_limited_random_field(g, k, opt.seed)};
    std::vector<double> best(opt.alphas.size(), 0.0);
    for (const Field3& f : inputs) {
      const Field3 F = f.to_frequency();
      const Eigen::Vector3i ext = spectral_extent(F);
      std::vector<cplx> st(static_cast<std::size_t>(nt) * g.size());
      for (int j = 0; j < nt; ++j) {
        const double t = t0 + T * j / nt;
        const double ct = kCut.eta0((t - 1.25) / 0.75);
        if (ct == 0.0) continue;
        const Field3 a = apply_multiplier(F, averaging_symbol(g, c, opt.chi, t, ext)).to_physical();
        for (std::size_t i = 0; i < g.size(); ++i) st[static_cast<std::size_t>(j) * g.size() + i] = ct * a[i];
      }
      const double fp = lp_norm(f, opt.p);
      detail::fft_inplace(st.data(), {nt, g.n(), g.n(), g.n()}, -1);
      for (std::size_t ai = 0; ai < opt.alphas.size(); ++ai) {
        std::vector<cplx> w = st;
        const double dtau = 2.0 * M_PI / T;
        for (int j = 0; j < nt; ++j) {
          const double tau = dtau * (j < nt / 2 ? j : j - nt);
          for (std::size_t i = 0; i < g.size(); ++i)
            w[static_cast<std::size_t>(j) * g.size() + i] *=
                std::pow(1.0 + g.frequency(i).squaredNorm() + tau * tau, 0.5 * opt.alphas[ai]) /
                (static_cast<double>(nt) * g.size());
        }
        detail::fft_inplace(w.data(), {nt, g.n(), g.n(), g.n()}, +1);
        const double norm = detail::lp_norm_values(w, opt.p, std::pow(g.dx(), 3) * (T / nt));
        best[ai] = std::max(best[ai], norm / fp);
      }
    }
    for (std::size_t ai = 0; ai < opt.alphas.size(); ++ai) {
      rep.rows.push_back({k, opt.alphas[ai], nt, best[ai]});
      per_alpha[ai].push_back(best[ai]);
    }
  }
  std::vector<double> xs(opt.ks.begin(), opt.ks.end());
  for (const auto& v : per_alpha) rep.slopes.push_back(xs.size() >= 2 ? fit_line(xs, log2_of(v)).slope : 0.0);
  return rep;
}

std::pair<double, double> helix_phase_identity(double a, double b, double s, const Vec3& xi) {
  const double w = 2.0 * M_PI;
  const double lhs = xi(0) * std::cos(w * s) + xi(1) * std::sin(w * s);
  const Curve c = helix_family(a, b, {s - 1.0, s + 1.0});
  const double rhs = -c.derivative(s, 2).dot(xi) / (w * w * a);
  return {lhs, rhs};
}

Field3 two_param_maximal(const Field3& f, double t, const std::vector<std::pair<double, double>>& ab,
                         const ParamCutoff& chi) {
  if (ab.empty()) throw DomainError("two-parameter maximal needs samples");
  std::vector<cplx> m(f.grid().size(), cplx(0.0));
  const Field3 F = f.to_frequency();
  for (const auto& [a, b] : ab) {
    if (!(a > 1.0 && a < 2.0 && b > 1.0 && b < 2.0)) throw DomainError("(a, b) must lie in (1, 2)^2");
    const Field3 x = averaging_operator(F, helix_family(a, b), chi, t).to_physical();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(m[i].real(), std::abs(x[i]));
  }
  return Field3(f.grid(), std::move(m), Space::physical);
}

nlohmann::json TwoParamReport::to_json() const {
  return {{"p", p}, {"alpha", alpha}, {"samples", samples}, {"ratio", ratio}, {"note", "report only"}};
}

TwoParamReport two_param_report(const Grid3& g, int k, double p, double alpha, int ab_per_axis,
                                const ParamCutoff& chi, std::uint64_t seed) {
  const Field3 f = band_limited_random_field(g, k, seed);
  std::vector<std::pair<double, double>> ab;
  for (int i = 0; i < ab_per_axis; ++i)
    for (int j = 0; j < ab_per_axis; ++j)
      ab.emplace_back(1.0 + (i + 0.5) / ab_per_axis, 1.0 + (j + 0.5) / ab_per_axis);
  const Field3 M = two_param_maximal(f, 1.0, ab, chi);
  const Field3 fa = apply_multiplier(f, [&](const Vec3& xi) { return cplx(std::pow(1.0 + xi.squaredNorm(), 0.5 * alpha)); });
  TwoParamReport r;
  r.p = p;
  r.alpha = alpha;
  r.samples = static_cast<int>(ab.size());
  r.ratio = lp_norm(M, p) / lp_norm(fa, p);
  return r;
}

}  // namespace conewolff
