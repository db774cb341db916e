#include "conewolff/symbols.hpp"

#include <algorithm>
#include <set>

#include "conewolff/errors.hpp"
#include "conewolff/frenet.hpp"
#include "conewolff/rng.hpp"

namespace conewolff {
namespace {

bool is_tilde(PieceKind k) { return k == PieceKind::TildeAk || k == PieceKind::TildeAknu; }
bool is_a(PieceKind k) { return k == PieceKind::Akl || k == PieceKind::Aklnu; }

Interval intersect(Interval a, Interval b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.hi < r.lo) r.hi = r.lo;
  return r;
}

Interval base_s_window(const SymbolContext& ctx) {
  const Interval d = ctx.curve.domain();
  if (ctx.base.constant) return d;
  return intersect(d, {ctx.base.s_center - ctx.base.s_half, ctx.base.s_center + ctx.base.s_half});
}

double inf_product(const Curve& c, bool with_kappa) {
  const Interval d = c.domain();
  double m = INFINITY;
  for (int i = 0; i <= 256; ++i) {
    const FrenetFrame f = frenet_frame(c, d.lo + d.length() * i / 256.0);
    m = std::min(m, with_kappa ? f.kappa * f.tau : f.tau);
  }
  return m;
}

}  // namespace

std::string to_string(PieceKind k) {
  switch (k) {
    case PieceKind::Ak: return "a_k";
    case PieceKind::TildeAk: return "tilde_a_k";
    case PieceKind::Akl: return "a_kl";
    case PieceKind::Bkl: return "b_kl";
    case PieceKind::Aklnu: return "a_klnu";
    case PieceKind::Bklnu: return "b_klnu";
    case PieceKind::TildeAknu: return "tilde_a_knu";
  }
  return "?";
}

PieceKind piece_kind_from_string(const std::string& s) {
  for (PieceKind k : {PieceKind::Ak, PieceKind::TildeAk, PieceKind::Akl, PieceKind::Bkl, PieceKind::Aklnu,
                      PieceKind::Bklnu, PieceKind::TildeAknu})
    if (to_string(k) == s) return k;
  if (s == "a") return PieceKind::Aklnu;
  if (s == "b") return PieceKind::Bklnu;
  if (s == "tilde") return PieceKind::TildeAknu;
  throw ConfigError("unknown piece kind '" + s + "'");
}

double BaseSymbol::operator()(double s, const Vec3& xi, const ConeCoordinates& q) const {
  if (constant) return 1.0;
  static const CutoffSystem cut;
  if (q.r <= 0.0) return 0.0;
  double v = cut.eta0((s - s_center) / s_half);
  if (v == 0.0) return 0.0;
  v *= cut.eta0(q.sigma / sigma_half);
  if (v == 0.0) return 0.0;
  v *= cut.eta0((xi.norm() - 1.25) / 0.75);
  if (v == 0.0) return 0.0;
  return v * cut.eta0(q.u / (tube * q.r));
}

bool SymbolPiece::localized() const {
  return kind == PieceKind::Aklnu || kind == PieceKind::Bklnu || kind == PieceKind::TildeAknu;
}

double SymbolPiece::nu_scale() const { return is_tilde(kind) ? std::pow(2.0, k / 3.0) : std::ldexp(1.0, l); }

double SymbolPiece::eval(double s, const Vec3& xi) const {
  return eval(s, xi, cone_coordinates(ctx->curve, xi, ctx->chart));
}

double SymbolPiece::eval(double s, const Vec3& xi, const ConeCoordinates& q) const {
  const CutoffSystem& cut = ctx->cut;
  double v = ctx->base(s, xi, q);
  if (v == 0.0 || kind == PieceKind::Ak) return v;
  if (localized()) {
    v *= cut.zeta(nu_scale() * s - nu);
    if (v == 0.0) return 0.0;
  }
  const double h = s - q.sigma;
  const double x = std::abs(q.u) + h * h;
  if (is_tilde(kind)) return v * cut.eta0(std::ldexp(x, 2 * l));
  v *= cut.eta1(std::ldexp(x, 2 * l));
  if (v == 0.0) return 0.0;
  double E;
  if (q.u == 0.0)
    E = h == 0.0 ? 1.0 : 0.0;
  else
    E = cut.eta0(h * h / (ctx->A0 * q.u));
  return is_a(kind) ? v * E : v * (1.0 - E);
}

Interval SymbolPiece::s_support(const ConeCoordinates& q) const {
  Interval w = base_s_window(*ctx);
  if (kind == PieceKind::Ak) return w;
  double hmax = is_tilde(kind) ? std::ldexp(1.0, -l) : std::ldexp(1.0, 1 - l);
  if (is_a(kind)) hmax = std::min(hmax, std::sqrt(ctx->A0 * std::abs(q.u)));
  w = intersect(w, {q.sigma - hmax, q.sigma + hmax});
  if (localized()) {
    const double sc = nu_scale();
    w = intersect(w, {(nu - 1) / sc, (nu + 1) / sc});
  }
  return w;
}

nlohmann::json SymbolPiece::to_json() const {
  return {{"kind", to_string(kind)}, {"k", k}, {"l", l}, {"nu", nu}, {"curve", ctx->curve.name()}, {"A0", ctx->A0}};
}

double default_A0(const Curve& c) {
  const double m = inf_product(c, true);
  if (!(m > 0.0)) throw DegenerateCurvature("kappa tau must stay positive for the decomposition");
  return 16.0 * std::max(1.0, 1.0 / m);
}

SymbolPiece make_symbol(const Curve& c, int k, const BaseSymbol& base, double A0, const ChartOptions& chart) {
  if (!base.constant && chart.u_over_r_cap > 0.0 && base.tube >= chart.u_over_r_cap)
    throw ConfigError("symbol tube must sit inside the chart's u/r cap");
  auto ctx = std::make_shared<SymbolContext>(SymbolContext{c, base, chart, A0 > 0 ? A0 : default_A0(c), {}});
  SymbolPiece p;
  p.kind = PieceKind::Ak;
  p.k = k;
  p.ctx = std::move(ctx);
  return p;
}

int decomposition_l_min(const SymbolPiece& ak) {
  const double len = ak.curve().domain().length();
  const double x_max = ak.ctx->base.u_max() + len * len;
  int l = 0;
  while (std::ldexp(x_max, 2 * (l - 1)) > 0.5) --l;
  while (std::ldexp(x_max, 2 * l) <= 0.5) ++l;
  return l;
}

std::vector<SymbolPiece> decompose(const SymbolPiece& ak, int l_max, double A0) {
  if (ak.kind != PieceKind::Ak) throw DomainError("decompose expects an undecomposed a_k");
  auto ctx = std::make_shared<SymbolContext>(*ak.ctx);
  if (A0 > 0) ctx->A0 = A0;
  const double tau_inf = inf_product(ctx->curve, false);
  if (!(tau_inf > 0.0) || !(ctx->A0 > 2.0 * std::max(1.0, 1.0 / tau_inf)))
    throw DomainError("A0 must exceed 2 max(1, 1/inf tau)");
  const int L = l_max < 0 ? ak.k / 3 : l_max;
  const int l_min = decomposition_l_min(ak);
  std::vector<SymbolPiece> out;
  out.push_back({PieceKind::TildeAk, ak.k, L, 0, ctx});
  for (int l = l_min; l <= L; ++l) {
    out.push_back({PieceKind::Akl, ak.k, l, 0, ctx});
    out.push_back({PieceKind::Bkl, ak.k, l, 0, ctx});
  }
  return out;
}

std::vector<SymbolPiece> nu_localize(const SymbolPiece& piece) {
  PieceKind to;
  switch (piece.kind) {
    case PieceKind::Akl: to = PieceKind::Aklnu; break;
    case PieceKind::Bkl: to = PieceKind::Bklnu; break;
    case PieceKind::TildeAk: to = PieceKind::TildeAknu; break;
    default: throw DomainError("nu_localize expects a_kl, b_kl or tilde a_k");
  }
  SymbolPiece proto = piece;
  proto.kind = to;
  const double sc = proto.nu_scale();
  const Interval w = base_s_window(*piece.ctx);
  std::vector<SymbolPiece> out;
  for (int nu = static_cast<int>(std::floor(sc * w.lo - 1.0)) + 1; nu < sc * w.hi + 1.0; ++nu) {
    proto.nu = nu;
    out.push_back(proto);
  }
  return out;
}

std::vector<SupportSample> sample_piece_support(const SymbolPiece& piece, int n, std::uint64_t seed) {
  if (!piece.localized()) throw DomainError("support sampling needs a nu-localized piece");
  const SymbolContext& ctx = *piece.ctx;
  const double sc = piece.nu_scale();
  const Interval sw = intersect(base_s_window(ctx), {(piece.nu - 1) / sc, (piece.nu + 1) / sc});
  const double hmax = is_tilde(piece.kind) ? std::ldexp(1.0, -piece.l) : std::ldexp(1.0, 1 - piece.l);
  const double xmax = is_tilde(piece.kind) ? std::ldexp(1.0, -2 * piece.l) : std::ldexp(4.0, -2 * piece.l);
  const double u_hi = std::min(ctx.base.constant ? 1.0 : ctx.base.u_max(), xmax);
  const Interval dom = ctx.curve.domain();
  CounterRng rng(seed);
  std::vector<SupportSample> out;
  const long max_tries = 200L * n;
  for (long t = 0; t < max_tries && static_cast<int>(out.size()) < n && sw.length() > 0; ++t) {
    SupportSample a;
    a.s = rng.next(sw.lo, sw.hi);
    a.q.sigma = a.s - rng.next(-hmax, hmax);
    a.q.u = rng.next(-u_hi, u_hi);
    a.q.r = rng.next(ctx.base.r_min(), ctx.base.r_max());
    if (a.q.sigma < dom.lo || a.q.sigma > dom.hi) continue;
    a.xi = cone_point(ctx.curve, a.q);
    if (piece.eval(a.s, a.xi, a.q) != 0.0) out.push_back(a);
  }
  return out;
}

PlateSupportReport verify_plate_support(const SymbolPiece& piece, double C, int samples, int derivative_samples,
                                        std::uint64_t seed) {
  const int lev = is_tilde(piece.kind) ? piece.k / 3 + 1 : piece.l;
  const FrenetFrame F = frenet_frame(piece.curve(), piece.nu / piece.nu_scale());
  const double wT = std::ldexp(1.0, 2 * lev), wN = std::ldexp(1.0, lev);
  PlateSupportReport rep;
  rep.C = C;
  const auto pts = sample_piece_support(piece, samples, seed);
  for (const SupportSample& a : pts) {
    ++rep.points;
    rep.max_T = std::max(rep.max_T, wT * std::abs(a.xi.dot(F.T)));
    rep.max_N = std::max(rep.max_N, wN * std::abs(a.xi.dot(F.N)));
    const double b = std::abs(a.xi.dot(F.B));
    rep.min_B = std::min(rep.min_B, b);
    rep.max_B = std::max(rep.max_B, b);
  }
  if (rep.points > 0) rep.C_needed = std::max({rep.max_T, rep.max_N, rep.max_B, 1.0 / rep.min_B});
  rep.holds = rep.points > 0 && rep.C_needed <= C;

  const Vec3 dirs[3] = {F.T, F.N, F.B};
  const double scale[3] = {wT, wN, 1.0};
  for (std::size_t i = 0; i < pts.size() && static_cast<int>(i) < derivative_samples; ++i) {
    const SupportSample& a = pts[i];
    double worst = 0.0;
    try {
      const double f0 = piece.eval(a.s, a.xi);
      for (int i = 0; i < 3; ++i) {
        const double h = 1e-3 / scale[i];
        const double fp = piece.eval(a.s, a.xi + h * dirs[i]), fm = piece.eval(a.s, a.xi - h * dirs[i]);
        worst = std::max(worst, std::abs(fp - fm) / (2 * h) / scale[i]);
        worst = std::max(worst, std::abs(fp - 2 * f0 + fm) / (h * h) / (scale[i] * scale[i]));
      }
    } catch (const OutsideCone&) {
      continue;
    }
    rep.C_derivative = std::max(rep.C_derivative, worst);
    ++rep.derivative_points;
  }
  return rep;
}

OverlapReport overlap_census(const SymbolPiece& ak, const Vec3& xi, int s_grid) {
  const auto pieces = decompose(ak);
  const ConeCoordinates q = cone_coordinates(ak.curve(), xi, ak.ctx->chart);
  const Interval d = ak.curve().domain();
  OverlapReport rep;
  for (const SymbolPiece& p : pieces) {
    if (p.kind != PieceKind::Akl) continue;
    const double sc = p.nu_scale();
    std::set<int> nus;
    for (int i = 0; i < s_grid; ++i) {
      const double s = d.lo + d.length() * i / (s_grid - 1);
      if (p.eval(s, xi, q) == 0.0) continue;
      int here = 0;
      const int c = static_cast<int>(std::floor(sc * s));
      for (int nu = c - 1; nu <= c + 2; ++nu) {
        if (p.ctx->cut.zeta(sc * s - nu) != 0.0) {
          ++here;
          nus.insert(nu);
        }
      }
      rep.max_per_s = std::max(rep.max_per_s, here);
    }
    rep.max_per_level = std::max(rep.max_per_level, static_cast<int>(nus.size()));
    rep.pairs += static_cast<int>(nus.size());
  }
  return rep;
}

}  // namespace conewolff
