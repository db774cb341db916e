#include "conewolff/multipliers.hpp"

#include <fftw3.h>

#include <algorithm>
#include <sstream>

#include "conewolff/errors.hpp"
#include "conewolff/fit.hpp"
#include "conewolff/frenet.hpp"
#include "conewolff/parallel.hpp"
#include "conewolff/rng.hpp"
#include "fftw_lock.hpp"

namespace conewolff {

MultiplierSample mk_multiplier(const SymbolPiece& piece, const Vec3& xi, double tol) {
  MultiplierSample out;
  out.xi = xi;
  out.k = piece.k;
  out.l = piece.l;
  out.nu = piece.nu;
  const Vec3 xn = std::ldexp(1.0, -piece.k) * xi;
  const Curve& c = piece.curve();
  ConeCoordinates q;
  try {
    q = cone_coordinates(c, xn, piece.ctx->chart);
  } catch (const OutsideCone&) {
    if (piece.ctx->base.constant) throw;
    return out;  // the base symbol's tube cutoff vanishes before the chart cap
  }
  const Interval w = piece.s_support(q);
  if (!(w.length() > 0)) return out;

  // Phase relative to gamma(sigma) keeps the argument small.
  const double s_ref = std::clamp(q.sigma, c.domain().lo, c.domain().hi);
  const cplx ref = std::exp(cplx(0.0, -c.eval(s_ref).dot(xi)));
  auto f = [&](double s) -> cplx {
    const double a = piece.eval(s, xn, q);
    if (a == 0.0) return 0.0;
    return a * std::exp(cplx(0.0, -c.displacement(s, s_ref).dot(xi)));
  };

  double dphi = 0.0;
  for (int i = 0; i <= 32; ++i) dphi = std::max(dphi, std::abs(c.derivative(w.lo + w.length() * i / 32, 1).dot(xi)));
  const int panels = std::clamp(static_cast<int>(std::ceil(dphi * w.length() / (2 * M_PI))), 1, 2000);
  std::vector<double> bp;
  for (int i = 1; i < panels; ++i) bp.push_back(w.lo + w.length() * i / panels);
  if (q.sigma > w.lo && q.sigma < w.hi) bp.push_back(q.sigma);
  std::sort(bp.begin(), bp.end());

  QuadOptions opt;
  opt.abs_tol = 0.5 * tol;
  opt.rel_tol = 0.0;
  opt.max_intervals = 40000;
  const QuadResult r = integrate_gk15(f, w.lo, w.hi, opt, bp);
  out.value = r.value * ref;
  out.quadrature_error = r.error;
  out.evaluations = r.evaluations;
  if (!(r.error <= tol)) {
    std::ostringstream m;
    m << "m_k quadrature error " << r.error << " above tolerance " << tol;
    throw QuadratureFailure(m.str());
  }
  return out;
}

nlohmann::json VdcSweep::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const VdcPoint& p : points)
    pts.push_back({{"k", p.k}, {"sup", p.sup}, {"argmax", {p.argmax.x(), p.argmax.y(), p.argmax.z()}}});
  return {{"curve", curve},         {"kind", to_string(kind)}, {"l", l},
          {"points", pts},          {"slope", slope},          {"constant", constant},
          {"target_slope", target_slope}, {"band", {band_lo, band_hi}}, {"within_band", within_band}};
}

std::string VdcSweep::to_csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "k,l,kind,sup,fitted_slope,constant\n";
  for (const VdcPoint& p : points) o << p.k << ',' << l << ',' << to_string(kind) << ',' << p.sup << ',' << slope << ',' << constant << '\n';
  return o.str();
}

VdcSweep vdc_decay_sweep(const Curve& c, PieceKind kind, int l, const std::vector<int>& ks, const VdcOptions& opt) {
  if (kind == PieceKind::Akl) kind = PieceKind::Aklnu;
  if (kind == PieceKind::Bkl) kind = PieceKind::Bklnu;
  if (kind == PieceKind::TildeAk) kind = PieceKind::TildeAknu;
  if (kind == PieceKind::Ak) throw DomainError("van der Corput sweep needs a decomposed piece kind");
  if (ks.empty()) throw DomainError("empty k list");
  const bool tilde = kind == PieceKind::TildeAknu;
  if (!tilde && 3 * l > *std::min_element(ks.begin(), ks.end())) throw DomainError("sweep needs l <= min k / 3");

  VdcSweep sw;
  sw.curve = c.name();
  sw.kind = kind;
  sw.l = l;
  switch (kind) {
    case PieceKind::Aklnu: sw.target_slope = -0.5; sw.band_lo = -0.6; sw.band_hi = -0.4; break;
    case PieceKind::Bklnu: sw.target_slope = -1.0; sw.band_lo = -1.15; sw.band_hi = -0.85; break;
    default: sw.target_slope = -1.0 / 3.0; sw.band_lo = -INFINITY; sw.band_hi = -0.28; break;
  }

  // Unit draws shared by every k, so each k sees the same strata.
  CounterRng rng(opt.seed);
  std::vector<Vec3> unit(opt.samples);
  for (auto& v : unit) v = Vec3(rng.next(), rng.next(-1, 1), rng.next(-1, 1));

  const SymbolPiece a0 = make_symbol(c, ks.front(), {}, opt.A0);
  decompose(a0);  // validates A0
  const BaseSymbol& base = a0.ctx->base;

  std::vector<double> kx, sups;
  for (int k : ks) {
    SymbolPiece p = a0;
    p.k = k;
    p.kind = kind;
    p.l = tilde ? k / 3 : l;
    p.nu = 0;
    const double swin = 1.0 / p.nu_scale();
    const double hmax = tilde ? std::ldexp(1.0, -p.l) : std::ldexp(1.0, 1 - p.l);
    const double u_hi = std::min(base.u_max(), tilde ? std::ldexp(1.0, -2 * p.l) : std::ldexp(4.0, -2 * p.l));
    std::vector<double> val(unit.size(), 0.0);
    std::vector<Vec3> xs(unit.size());
    parallel_for(unit.size(), [&](std::size_t i) {
      ConeCoordinates q;
      q.r = base.r_min() + (base.r_max() - base.r_min()) * unit[i].x();
      q.u = u_hi * unit[i].y();
      q.sigma = (swin + hmax) * unit[i].z();
      xs[i] = cone_point(c, q);
      val[i] = std::abs(mk_multiplier(p, std::ldexp(1.0, k) * xs[i], opt.tol).value);
    });
    VdcPoint pt;
    pt.k = k;
    for (std::size_t i = 0; i < val.size(); ++i)
      if (val[i] > pt.sup) {
        pt.sup = val[i];
        pt.argmax = xs[i];
      }
    sw.points.push_back(pt);
    kx.push_back(k);
    sups.push_back(pt.sup);
  }
  if (ks.size() >= 2 && *std::min_element(sups.begin(), sups.end()) > 0) {
    const LineFit f = fit_log2(kx, sups);
    sw.slope = f.slope;
    sw.constant = std::exp2(f.intercept);
  }
  sw.within_band = ks.size() >= 2 && sw.slope >= sw.band_lo && sw.slope <= sw.band_hi;
  return sw;
}

KernelBound l1_kernel_bound(const SymbolPiece& piece, const KernelOptions& opt) {
  if (!piece.localized()) throw DomainError("kernel bound needs a nu-localized piece");
  KernelBound kb;
  const auto pts = sample_piece_support(piece, opt.support_samples, opt.seed);
  if (pts.empty()) return kb;

  const Curve& c = piece.curve();
  const FrenetFrame F = frenet_frame(c, piece.nu / piece.nu_scale());
  Mat3 Rf;  // rows T, N, B
  Rf.row(0) = F.T.transpose();
  Rf.row(1) = F.N.transpose();
  Rf.row(2) = F.B.transpose();

  Vec3 lo = Vec3::Constant(INFINITY), hi = Vec3::Constant(-INFINITY);
  for (const SupportSample& a : pts) {
    const Vec3 y = Rf * a.xi;
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
  }
  const double K = std::ldexp(1.0, piece.k);
  const Vec3 pad = opt.pad * (hi - lo) + Vec3::Constant(1e-9);
  lo = K * (lo - pad);
  hi = K * (hi + pad);
  const Vec3 L = hi - lo;

  // s-window and the range of gamma over it, in frame coordinates.
  const double sc = piece.nu_scale();
  const Interval w{std::max(c.domain().lo, (piece.nu - 1) / sc), std::min(c.domain().hi, (piece.nu + 1) / sc)};
  Vec3 glo = Vec3::Constant(INFINITY), ghi = Vec3::Constant(-INFINITY);
  for (int i = 0; i <= 256; ++i) {
    const Vec3 g = Rf * c.eval(w.lo + w.length() * i / 256);
    glo = glo.cwiseMin(g);
    ghi = ghi.cwiseMax(g);
  }
  const Vec3 gc = Rf.transpose() * (0.5 * (glo + ghi));

  // The a/b cutoff eta0((s-sigma)^2/(A0 u)) varies on |u| ~ 2^{-2l}/A0, so the kernel
  // reaches about A0 times further along T than the plate width suggests.
  const bool tilde = piece.kind == PieceKind::TildeAknu;
  Vec3 stretch = opt.axis_stretch.cwiseProduct(Vec3(tilde ? 1.0 : 1.0 + piece.ctx->A0, 1.0, 1.0));

  // The piece vanishes unless |s - sigma| < 2^{1-l}, so sigma is searched near the s-window.
  ChartOptions chart = piece.ctx->chart;
  chart.window_lo = w.lo - std::ldexp(2.0, -piece.l);
  chart.window_hi = w.hi + std::ldexp(2.0, -piece.l);
  chart.coarse_grid = 16;

  // s-rule fine enough that the phase moves by at most ~1.5 rad per panel on the box.
  const Vec3 amax = lo.cwiseAbs().cwiseMax(hi.cwiseAbs());
  int panels = opt.min_panels;
  for (;; panels *= 2) {
    double worst = 0.0;
    Vec3 prev = Rf * c.eval(w.lo);
    for (int i = 1; i <= panels; ++i) {
      const Vec3 g = Rf * c.eval(w.lo + w.length() * i / panels);
      worst = std::max(worst, (g - prev).cwiseAbs().dot(amax));
      prev = g;
    }
    if (worst <= 1.5 || panels >= (1 << 16)) break;
  }
  const GaussRule rule = composite_gauss(w.lo, w.hi, panels, 10);
  std::vector<Vec3> gnode(rule.nodes.size());
  for (std::size_t i = 0; i < gnode.size(); ++i) gnode[i] = c.eval(rule.nodes[i]) - gc;

  auto l1_at = [&](const Vec3& margin, int* dims) {
    long total = 1;
    Vec3 dxi;
    for (int e = 0; e < 3; ++e) {
      const double X = (ghi(e) - glo(e)) + 2.0 * margin(e) * 2 * M_PI / L(e);
      int n = static_cast<int>(std::ceil(L(e) * X / (2 * M_PI)));
      n = std::max(8, n + (n & 1));
      dims[e] = n;
      dxi(e) = L(e) / n;
      total *= n;
      if (total > opt.max_points) throw GridTooLarge("kernel grid exceeds the point budget");
    }
    const int n0 = dims[0], n1 = dims[1], n2 = dims[2];
    const Vec3 x0 = -0.5 * Vec3(2 * M_PI / dxi(0), 2 * M_PI / dxi(1), 2 * M_PI / dxi(2));
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(total));
    parallel_for(static_cast<std::size_t>(n0), [&](std::size_t m0) {
      for (int m1 = 0; m1 < n1; ++m1)
        for (int m2 = 0; m2 < n2; ++m2) {
          const Vec3 m(static_cast<double>(m0), m1, m2);
          const Vec3 y = lo + dxi.cwiseProduct(m);
          const Vec3 xi = Rf.transpose() * y;
          const Vec3 xn = xi / K;
          cplx acc = 0.0;
          try {
            const ConeCoordinates q = cone_coordinates(c, xn, chart);
            const Interval sw = piece.s_support(q);
            if (sw.length() > 0)
              for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double s = rule.nodes[i];
                if (s < sw.lo || s > sw.hi) continue;
                const double a = piece.eval(s, xn, q);
                if (a != 0.0) acc += rule.weights[i] * a * std::exp(cplx(0.0, -gnode[i].dot(xi)));
              }
          } catch (const OutsideCone&) {
          }
          acc *= std::exp(cplx(0.0, x0.dot(dxi.cwiseProduct(m))));
          const std::size_t idx = (m0 * n1 + m1) * static_cast<std::size_t>(n2) + m2;
          buf[idx][0] = acc.real();
          buf[idx][1] = acc.imag();
        }
    });
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> g(detail::fftw_planner_mutex());
      plan = fftw_plan_dft_3d(n0, n1, n2, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    double sum = 0.0;
    for (long i = 0; i < total; ++i) sum += std::hypot(buf[i][0], buf[i][1]);
    {
      std::lock_guard<std::mutex> g(detail::fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return sum / static_cast<double>(total);
  };

  // Per axis, double the margin until the value settles.
  Vec3 margin = opt.margin * stretch;
  double prev = l1_at(margin, kb.n);
  kb.history.push_back(prev);
  kb.converged = true;
  for (int e : {1, 2, 0}) {
    bool settled = false;
    for (int it = 0; it < opt.max_doublings && !settled; ++it) {
      Vec3 trial = margin;
      trial(e) *= 2;
      int dims[3];
      double v;
      try {
        v = l1_at(trial, dims);
      } catch (const GridTooLarge&) {
        break;
      }
      kb.history.push_back(v);
      settled = std::abs(v - prev) <= opt.rel_tol * std::abs(v);
      margin = trial;
      prev = v;
      std::copy(dims, dims + 3, kb.n);
    }
    kb.converged = kb.converged && settled;
  }
  kb.margin = margin.maxCoeff();
  kb.l1 = prev;
  kb.C = kb.l1 * std::ldexp(1.0, piece.l);
  return kb;
}

}  // namespace conewolff
