#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <set>

#include "conewolff/curve_geometry.hpp"
#include "conewolff/errors.hpp"
#include "conewolff/rng.hpp"
#include "conewolff/symbol_decomposition.hpp"

using namespace conewolff;

namespace {

// A random frequency in the base symbol's tube, as chart coordinates.
Vec3 random_tube_frequency(const Curve& c, CounterRng& rng, double tube = 0.1) {
  ConeCoordinates q;
  q.r = rng.next(0.6, 1.9);
  q.u = rng.next(-tube, tube) * q.r;
  q.sigma = rng.next(-0.9, 0.9);
  return cone_point(c, q);
}

SymbolPiece localized(const SymbolPiece& ak, PieceKind kind, int l, int nu) {
  SymbolPiece p = ak;
  p.kind = kind;
  p.l = l;
  p.nu = nu;
  return p;
}

// Trapezoid rule on a fine uniform grid; the integrand vanishes smoothly at both ends.
cplx riemann_multiplier(const SymbolPiece& piece, const Vec3& xi, int n) {
  const double K = std::ldexp(1.0, piece.k);
  const Vec3 xn = xi / K;
  const ConeCoordinates q = cone_coordinates(piece.curve(), xn);
  const Interval w = piece.s_support(q);
  if (!(w.length() > 0)) return 0.0;
  const double h = w.length() / n;
  const Vec3 g0 = piece.curve().eval(q.sigma);
  cplx acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = w.lo + h * i;
    const double a = piece.eval(s, xn, q);
    const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
    if (a != 0.0) acc += wt * a * std::exp(cplx(0.0, -(piece.curve().eval(s) - g0).dot(xi)));
  }
  return h * acc * std::exp(cplx(0.0, -g0.dot(xi)));
}

}  // namespace

TEST(Cutoffs, BasicValues) {
  const CutoffSystem cut = build_cutoffs();
  EXPECT_EQ(cut.eta0(0.0), 1.0);
  EXPECT_EQ(cut.eta0(0.5), 1.0);
  EXPECT_EQ(cut.eta0(-1.0), 0.0);
  for (double t : {0.0, 0.25, 0.5, -0.5, 4.0, -4.0, 5.0}) EXPECT_EQ(cut.eta1(t), 0.0) << t;
  EXPECT_GT(cut.eta1(1.5), 0.0);
  double sum = 0.0;
  for (int nu = -3; nu <= 3; ++nu) sum += cut.zeta(0.3 - nu);
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Cutoffs, PartitionOfUnityOnGrid) {
  const CutoffSystem cut = build_cutoffs();
  for (int i = 0; i <= 4000; ++i) {
    const double t = -2.0 + i * 1e-3;
    double sum = 0.0;
    for (int nu = -3; nu <= 3; ++nu) sum += cut.zeta(t - nu);
    ASSERT_NEAR(sum, 1.0, 1e-12) << t;
  }
}

TEST(Cutoffs, DyadicTelescoping) {
  const CutoffSystem cut = build_cutoffs();
  const int L = 6;
  for (int i = 0; i <= 2000; ++i) {
    const double x = 0.9 * i / 2000.0;
    double sum = cut.eta0(std::ldexp(x, 2 * L));
    for (int l = -1; l <= L; ++l) sum += cut.eta1(std::ldexp(x, 2 * l));
    ASSERT_NEAR(sum, cut.eta0(std::ldexp(x, -2)), 1e-12) << x;
  }
}

TEST(Decompose, ReconstructsAk) {
  const Curve c = helix(1, 1);
  for (int k : {9, 12, 15}) {
    const SymbolPiece ak = make_symbol(c, k);
    const auto pieces = decompose(ak);
    ASSERT_EQ(pieces.front().kind, PieceKind::TildeAk);
    CounterRng rng(100 + k);
    double worst = 0.0;
    int nonzero = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec3 xi = random_tube_frequency(c, rng, 0.14);
      const double s = rng.next(-1, 1);
      const double target = ak.eval(s, xi);
      double sum = 0.0;
      for (const SymbolPiece& p : pieces) sum += p.eval(s, xi);
      worst = std::max(worst, std::abs(sum - target));
      nonzero += target != 0.0;
    }
    EXPECT_LE(worst, 1e-12) << "k=" << k;
    EXPECT_GT(nonzero, 1000) << "k=" << k;
  }
}

TEST(Decompose, DyadicShellSelectsNeighbouringLevels) {
  const Curve c = helix(1, 1);
  BaseSymbol base;
  base.constant = true;
  const SymbolPiece ak = make_symbol(c, 12, base);
  const int l0 = 3;
  const ConeCoordinates q{1.0, std::ldexp(1.0, -2 * l0), 0.2};
  const Vec3 xi = cone_point(c, q);
  std::set<int> levels;
  for (const SymbolPiece& p : decompose(ak))
    if (p.kind != PieceKind::TildeAk && p.eval(q.sigma, xi) != 0.0) levels.insert(p.l);
  ASSERT_FALSE(levels.empty());
  for (int l : levels) EXPECT_LE(std::abs(l - l0), 1) << l;
}

TEST(Decompose, OnConeAtStationaryPointOnlyTildePiece) {
  const Curve c = helix(1, 1);
  BaseSymbol base;
  base.constant = true;
  const SymbolPiece ak = make_symbol(c, 12, base);
  const ConeCoordinates q{1.0, 0.0, -0.3};
  const Vec3 xi = cone_point(c, q);
  for (const SymbolPiece& p : decompose(ak)) {
    const double v = p.eval(q.sigma, xi);
    if (p.kind == PieceKind::TildeAk)
      EXPECT_EQ(v, 1.0);
    else
      EXPECT_EQ(v, 0.0) << to_string(p.kind) << " l=" << p.l;
  }
}

TEST(Decompose, RejectsSmallA0) {
  const SymbolPiece ak = make_symbol(helix(1, 1), 12);
  EXPECT_THROW(decompose(ak, -1, 1.5), DomainError);
  EXPECT_GT(default_A0(helix(1, 1)), 2.0 * 4.0);
}

TEST(NuLocalize, SumsBackAndStaysInWindow) {
  const Curve c = helix(1, 1);
  const SymbolPiece ak = make_symbol(c, 12);
  const auto pieces = decompose(ak);
  CounterRng rng(7);
  for (const SymbolPiece& p : pieces) {
    const auto loc = nu_localize(p);
    ASSERT_FALSE(loc.empty());
    for (int i = 0; i < 300; ++i) {
      const Vec3 xi = random_tube_frequency(c, rng, 0.14);
      const double s = rng.next(-1, 1);
      double sum = 0.0;
      int count = 0;
      for (const SymbolPiece& q : loc) {
        const double v = q.eval(s, xi);
        sum += v;
        if (v != 0.0) {
          ++count;
          ASSERT_LT(std::abs(q.nu_scale() * s - q.nu), 1.0);
        }
      }
      ASSERT_NEAR(sum, p.eval(s, xi), 1e-12);
      ASSERT_LE(count, 2);
    }
  }
}

TEST(NuLocalize, OverlapCensus) {
  const Curve c = helix(1, 1);
  const SymbolPiece ak = make_symbol(c, 12);
  CounterRng rng(8);
  for (int i = 0; i < 40; ++i) {
    const Vec3 xi = random_tube_frequency(c, rng);
    const OverlapReport r = overlap_census(ak, xi, 801);
    EXPECT_LE(r.max_per_s, 2);
    EXPECT_LE(r.max_per_level, 6);
  }
}

TEST(PlateSupport, HelixLevelThree) {
  const SymbolPiece ak = make_symbol(helix(1, 1), 12);
  for (PieceKind kind : {PieceKind::Aklnu, PieceKind::Bklnu}) {
    const PlateSupportReport r = verify_plate_support(localized(ak, kind, 3, 0), 16.0, 100000, 200);
    EXPECT_GT(r.points, 50000) << to_string(kind);
    EXPECT_TRUE(r.holds) << to_string(kind) << " C_needed=" << r.C_needed;
    EXPECT_LE(r.C_needed, 16.0);
    EXPECT_GT(r.derivative_points, 0);
    EXPECT_TRUE(std::isfinite(r.C_derivative));
  }
}

TEST(PlateSupport, ExactConePointHasUnitCoordinates) {
  const Curve c = helix(1, 1);
  const double s_nu = 0.0;
  const FrenetFrame F = frenet_frame(c, s_nu);
  const Vec3 xi = F.B;
  EXPECT_NEAR(xi.dot(F.T), 0.0, 1e-14);
  EXPECT_NEAR(xi.dot(F.N), 0.0, 1e-14);
  EXPECT_NEAR(xi.dot(F.B), 1.0, 1e-14);
  const ConeCoordinates q = cone_coordinates(c, xi);
  EXPECT_NEAR(q.sigma, s_nu, 1e-10);
  EXPECT_NEAR(q.u, 0.0, 1e-10);
}

TEST(Multiplier, ZeroPieceGivesZero) {
  const Curve c = helix(1, 1);
  const SymbolPiece p = localized(make_symbol(c, 10), PieceKind::Aklnu, 2, 0);
  // sigma far from the nu = 0 window and u well outside the level-2 shell
  const Vec3 xi = std::ldexp(1.0, 10) * cone_point(c, {1.0, 0.1, 0.8});
  EXPECT_EQ(mk_multiplier(p, xi).value, cplx(0.0, 0.0));
}

TEST(Multiplier, MatchesDenseRiemannOracle) {
  const Curve c = helix(1, 1);
  CounterRng rng(21);
  int tested = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = (i % 2) ? 10 : 8;
    const PieceKind kind = (i % 3 == 0) ? PieceKind::Aklnu : (i % 3 == 1) ? PieceKind::Bklnu : PieceKind::TildeAknu;
    const SymbolPiece ak = make_symbol(c, k);
    SymbolPiece p = localized(ak, kind, 2, 0);
    if (kind == PieceKind::TildeAknu) p.l = k / 3;
    const auto pts = sample_piece_support(p, 4, 1000 + i);
    if (pts.empty()) continue;
    const Vec3 xi = std::ldexp(1.0, k) * pts[rng.uniform(i) < 0.5 ? 0 : pts.size() - 1].xi;
    const MultiplierSample m = mk_multiplier(p, xi, 1e-10);
    const cplx oracle = riemann_multiplier(p, xi, 200000);
    ASSERT_LE(std::abs(m.value - oracle), 1e-8) << to_string(kind) << " k=" << k;
    ASSERT_LE(m.quadrature_error, 1e-10);
    const Interval w = p.s_support(cone_coordinates(c, xi / std::ldexp(1.0, k)));
    ASSERT_LE(std::abs(m.value), w.length() + 1e-12);
    ++tested;
  }
  EXPECT_GE(tested, 90);
}

TEST(Multiplier, UnreachableToleranceFails) {
  const Curve c = helix(1, 1);
  const SymbolPiece p = localized(make_symbol(c, 10), PieceKind::Aklnu, 2, 0);
  const auto pts = sample_piece_support(p, 1, 3);
  ASSERT_FALSE(pts.empty());
  EXPECT_THROW(mk_multiplier(p, std::ldexp(1.0, 10) * pts[0].xi, 1e-300), QuadratureFailure);
}

TEST(VanDerCorput, TildeSweepDecays) {
  VdcOptions opt;
  opt.samples = 200;
  const VdcSweep s = vdc_decay_sweep(helix(1, 1), PieceKind::TildeAknu, 0, {8, 10, 12}, opt);
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_LE(s.slope, -0.28);
  EXPECT_TRUE(s.within_band);
}

TEST(VanDerCorput, LevelPrecondition) {
  EXPECT_THROW(vdc_decay_sweep(helix(1, 1), PieceKind::Aklnu, 4, {8, 10}), DomainError);
  EXPECT_THROW(vdc_decay_sweep(helix(1, 1), PieceKind::Ak, 1, {8}), DomainError);
}

TEST(KernelBound, WindowedChartAgreesWithGlobalSearch) {
  const Curve c = helix(1, 1);
  CounterRng rng(31);
  ChartOptions windowed;
  windowed.window_lo = -0.6;
  windowed.window_hi = 0.6;
  windowed.coarse_grid = 16;
  for (int i = 0; i < 500; ++i) {
    ConeCoordinates q{rng.next(0.6, 1.9), 0.0, rng.next(-0.5, 0.5)};
    q.u = rng.next(-0.1, 0.1) * q.r;
    const Vec3 xi = cone_point(c, q);
    const ConeCoordinates a = cone_coordinates(c, xi), b = cone_coordinates(c, xi, windowed);
    ASSERT_NEAR(a.sigma, b.sigma, 1e-12);
    ASSERT_NEAR(a.u, b.u, 1e-12);
  }
}

TEST(KernelBound, LevelTwoAndThree) {
  const SymbolPiece ak = make_symbol(helix(1, 1), 12);
  KernelOptions opt;
  opt.max_doublings = 0;
  for (PieceKind kind : {PieceKind::Aklnu, PieceKind::Bklnu}) {
    const KernelBound k3 = l1_kernel_bound(localized(ak, kind, 3, 0), opt);
    const KernelBound k2 = l1_kernel_bound(localized(ak, kind, 2, 0), opt);
    EXPECT_GT(k3.l1, 0.0);
    EXPECT_NEAR(k3.C, k3.l1 * 8.0, 1e-12);
    EXPECT_LT(k3.C, 16.0) << to_string(kind);
    const double ratio = k2.l1 / k3.l1;
    EXPECT_GE(ratio, 1.0) << to_string(kind);
    EXPECT_LE(ratio, 4.0) << to_string(kind);
  }
}

TEST(KernelBound, ZeroPieceAndUnlocalized) {
  const SymbolPiece ak = make_symbol(helix(1, 1), 12);
  // nu = 40 puts the s-window outside the curve's domain
  EXPECT_EQ(l1_kernel_bound(localized(ak, PieceKind::Aklnu, 3, 40)).l1, 0.0);
  EXPECT_THROW(l1_kernel_bound(localized(ak, PieceKind::Akl, 3, 0)), DomainError);
}

TEST(FiniteTypeRescale, TwistedCubicIsSelfSimilar) {
  const Curve c = twisted_cubic();
  for (int j : {0, 2, 5}) {
    const FiniteTypeRescaling f = finite_type_rescale(c, 0.0, j);
    EXPECT_EQ(f.n, (std::array<int, 3>{1, 2, 3}));
    EXPECT_NEAR((f.beta - Vec3::Ones()).norm(), 0.0, 1e-6);
    for (double u : {-1.5, -0.5, 0.7, 1.9}) {
      EXPECT_NEAR((f.Gamma(u) - Vec3(u, u * u, u * u * u)).norm(), 0.0, 1e-6 * (1 + std::pow(std::abs(u), 3)));
      EXPECT_NEAR(f.det(u), 12.0, 1e-5);
    }
    const Vec3 x(0.3, -1.2, 2.5);
    EXPECT_NEAR((f.contract(f.dilate(x)) - x).norm(), 0.0, 1e-12);
  }
}

TEST(FiniteTypeRescale, QuarticExponents) {
  const FiniteTypeRescaling f = finite_type_rescale(quartic_curve(), 0.0, 3);
  EXPECT_EQ(f.n, (std::array<int, 3>{1, 2, 4}));
}

TEST(FiniteTypeRescale, HelixDeterminantIsExactlyTheLimit) {
  // det(gamma', gamma'', gamma''') is constant on a helix, so there is nothing to decay
  for (int j : {1, 4}) EXPECT_LT(finite_type_rescale(helix(1, 1), 0.1, j).det_deviation(0.25, 1.0), 1e-12);
}

TEST(FiniteTypeRescale, DeviationDecaysAwayFromFlatPoint) {
  const Curve c = quartic_curve();
  // first-order correction: the deviation shrinks by about 4 per two steps of j
  const double d2 = finite_type_rescale(c, 0.3, 2).det_deviation(0.25, 1.0);
  const double d4 = finite_type_rescale(c, 0.3, 4).det_deviation(0.25, 1.0);
  const double d6 = finite_type_rescale(c, 0.3, 6).det_deviation(0.25, 1.0);
  EXPECT_GT(d2 / d4, 3.0);
  EXPECT_GT(d4 / d6, 3.0);
}

TEST(FiniteTypeRescale, LineIsDegenerate) {
  EXPECT_THROW(finite_type_rescale(straight_line(), 0.0, 2), DegenerateExpansion);
}
