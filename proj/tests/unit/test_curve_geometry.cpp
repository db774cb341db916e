#include <gtest/gtest.h>

#include <cmath>

#include "conewolff/curve_geometry.hpp"
#include "conewolff/errors.hpp"
#include "conewolff/rng.hpp"

using namespace conewolff;

namespace {

// Independent oracle: curvature and torsion from central differences of eval only.
struct FdFrenet {
  double kappa, tau;
};
FdFrenet fd_frenet(const Curve& c, double s) {
  const double h = 1e-3;
  auto x = [&](double t) { return c.eval(t); };
  const Vec3 d1 = (x(s + h) - x(s - h)) / (2 * h);
  const Vec3 d2 = (x(s + h) - 2 * x(s) + x(s - h)) / (h * h);
  const Vec3 d3 = (x(s + 2 * h) - 2 * x(s + h) + 2 * x(s - h) - x(s - 2 * h)) / (2 * h * h * h);
  const Vec3 cr = d1.cross(d2);
  return {cr.norm() / std::pow(d1.norm(), 3), cr.dot(d3) / cr.squaredNorm()};
}

std::vector<Curve> frenet_benchmarks() {
  return {helix(1, 1), helix(2, 0.5), twisted_cubic(), quartic_curve({0.2, 1.0}), helix_family(1.5, 1.2)};
}

}  // namespace

TEST(Curve, DerivativeOrderZeroIsEval) {
  for (const auto& c : frenet_benchmarks())
    for (double s : {-0.5, 0.1, 0.7})
      if (c.domain().contains(s)) EXPECT_LT((c.derivative(s, 0) - c.eval(s)).norm(), 1e-15);
}

TEST(Curve, DerivativesMatchCentralDifferences) {
  for (const auto& c : frenet_benchmarks()) {
    const double s = c.domain().mid();
    for (int j = 1; j <= 5; ++j) {
      const double h = 1e-4;
      const Vec3 fd = (c.derivative(s + h, j - 1) - c.derivative(s - h, j - 1)) / (2 * h);
      EXPECT_LT((fd - c.derivative(s, j)).norm(), 1e-5 * (1 + fd.norm())) << c.name() << " order " << j;
    }
  }
}

TEST(Curve, ArclengthHelixHasUnitSpeed) {
  const Curve c = helix(1, 1);
  for (double s = -1; s <= 1; s += 0.1) EXPECT_NEAR(c.derivative(s, 1).norm(), 1.0, 1e-12);
}

TEST(Curve, ArclengthReparametrizationOfTwistedCubic) {
  const Curve base = twisted_cubic({-0.5, 0.5});
  const Curve c = reparametrize_by_arclength(base, 1e-10, 0.0);
  EXPECT_TRUE(c.arclength());
  EXPECT_NEAR(c.eval(0.0).norm(), 0.0, 1e-12);
  for (double s = c.domain().lo + 0.01; s < c.domain().hi; s += 0.05) {
    EXPECT_NEAR(c.derivative(s, 1).norm(), 1.0, 1e-8);
    // Curvature is parametrization invariant: compare against the base curve.
    const double t = c.eval(s).x();  // x component of (t, t^2, t^3) is the old parameter
    EXPECT_NEAR(frenet_frame(c, s).kappa, frenet_frame(base, t).kappa, 1e-7);
    EXPECT_NEAR(frenet_frame(c, s).tau, frenet_frame(base, t).tau, 1e-7);
  }
  // Arclength of the closed form helix reparametrized numerically equals s.
  const Curve h = reparametrize_by_arclength(helix(1, 1, false, {0, 2}), 1e-10, 0.0);
  EXPECT_NEAR(h.domain().hi, 2 * std::sqrt(2.0), 1e-10);
  EXPECT_LT((h.eval(1.0) - helix(1, 1, true).eval(1.0)).norm(), 1e-10);
}

TEST(Curve, DisplacementAgreesWithDifferenceAndIsStable) {
  for (const auto& c : frenet_benchmarks()) {
    const double s0 = c.domain().mid();
    EXPECT_LT((c.displacement(s0 + 0.3, s0) - (c.eval(s0 + 0.3) - c.eval(s0))).norm(), 1e-14);
    const double ds = (s0 + 1e-12) - s0;  // exactly representable increment
    const Vec3 tiny = c.displacement(s0 + ds, s0);
    EXPECT_NEAR(tiny.norm() / ds, c.derivative(s0, 1).norm(), 1e-6);
  }
}

TEST(Curve, SampleCsvHasHeaderAndRows) {
  const std::string csv = curve_samples_csv(sample_curve(helix(1, 1), 5));
  EXPECT_EQ(csv.substr(0, 18), "s,x,y,z,kappa,tau\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Frenet, HelixClosedForms) {
  CounterRng rng(11);
  for (int i = 0; i < 20; ++i) {
    const double a = rng.next(0.2, 3.0), b = rng.next(-2.0, 2.0);
    const Curve c = helix(a, b, false);
    const FrenetFrame f = frenet_frame(c, rng.next(-1, 1));
    EXPECT_NEAR(f.kappa, a / (a * a + b * b), 1e-8);
    EXPECT_NEAR(f.tau, b / (a * a + b * b), 1e-8);
  }
}

TEST(Frenet, ArclengthHelixMatchesFiniteDifferenceOracle) {
  const Curve c = helix(1, 1);
  for (double s : {-0.7, 0.0, 0.4}) {
    const FrenetFrame f = frenet_frame(c, s);
    const FdFrenet o = fd_frenet(c, s);
    EXPECT_NEAR(f.kappa, 0.5, 1e-12);
    EXPECT_NEAR(f.tau, 0.5, 1e-12);
    EXPECT_NEAR(o.kappa, 0.5, 1e-5);
    EXPECT_NEAR(o.tau, 0.5, 1e-5);
    EXPECT_LT((f.T - c.derivative(s, 1)).norm(), 1e-14);
  }
}

TEST(Frenet, PlanarCircleHasZeroTorsionAndLineIsDegenerate) {
  const FrenetFrame f = frenet_frame(planar_circle(), 0.3);
  EXPECT_NEAR(f.kappa, 1.0, 1e-14);
  EXPECT_NEAR(f.tau, 0.0, 1e-14);
  EXPECT_THROW(frenet_frame(straight_line(), 0.2), DegenerateCurvature);
}

TEST(Frenet, OrthonormalityAndFrenetEquationsOnBenchmarks) {
  CounterRng rng(5);
  for (const auto& c : frenet_benchmarks()) {
    for (int i = 0; i < 100; ++i) {
      const double s = rng.next(c.domain().lo + 0.01, c.domain().hi - 0.01);
      const FrenetFrame f = frenet_frame(c, s);
      Mat3 M;
      M << f.T, f.N, f.B;
      EXPECT_LT((M.transpose() * M - Mat3::Identity()).norm(), 1e-8);
      EXPECT_NEAR(M.determinant(), 1.0, 1e-8);
      const double h = 1e-5;
      const FrenetFrame p = frenet_frame(c, s + h), m = frenet_frame(c, s - h);
      // Derivatives with respect to arclength: divide by the speed.
      const double v = f.speed;
      const Vec3 dT = (p.T - m.T) / (2 * h * v), dN = (p.N - m.N) / (2 * h * v), dB = (p.B - m.B) / (2 * h * v);
      EXPECT_LT((dT - f.kappa * f.N).norm(), 1e-5) << c.name();
      EXPECT_LT((dN + f.kappa * f.T - f.tau * f.B).norm(), 1e-5) << c.name();
      EXPECT_LT((dB + f.tau * f.N).norm(), 1e-5) << c.name();
    }
  }
}

TEST(FiniteType, HelixIsTypeThree) {
  const auto rep = finite_type(helix(1, 1), {0.0}, sphere_grid(24, 48), 5);
  EXPECT_EQ(rep.type[0], 3);
  EXPECT_GT(rep.witness_constant, 0.0);
}

TEST(FiniteType, QuarticIsTypeFourAndCubicTypeThree) {
  // Oracle: at s=0 the quartic has gamma', gamma'', gamma''' with zero third component.
  const Curve q = quartic_curve();
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(q.derivative(0.0, j).z(), 0.0);
  EXPECT_EQ(q.derivative(0.0, 4), Vec3(0, 0, 24));
  EXPECT_EQ(finite_type(q, {0.0}, sphere_grid(12, 24), 5).type[0], 4);
  // det(gamma', gamma'', gamma''') = 12 for the twisted cubic.
  const Curve t = twisted_cubic();
  Mat3 D;
  D << t.derivative(0, 1), t.derivative(0, 2), t.derivative(0, 3);
  EXPECT_NEAR(D.determinant(), 12.0, 1e-12);
  EXPECT_EQ(finite_type(t, {0.0}, sphere_grid(12, 24), 5).type[0], 3);
}

TEST(FiniteType, EnlargingNMaxNeverIncreasesType) {
  const Curve q = quartic_curve();
  const std::vector<double> s{-0.5, 0.0, 0.5};
  const auto xi = sphere_grid(10, 20);
  const auto r4 = finite_type(q, s, xi, 4);
  const auto r5 = finite_type(q, s, xi, 5);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_LE(r5.type[i], r4.type[i]);
  EXPECT_THROW(finite_type(q, {0.0}, xi, 3), TypeExceedsNMax);
}

TEST(FiniteType, ExponentTriples) {
  const auto a = exponent_triple(twisted_cubic(), 0.0);
  EXPECT_EQ(a.n1, 1);
  EXPECT_EQ(a.n2, 2);
  EXPECT_EQ(a.n3, 3);
  const auto b = exponent_triple(quartic_curve(), 0.0);
  EXPECT_EQ(b.n3, 4);
}

TEST(Generator, HelixBinormalGeneratorIsTheUnitCircle) {
  const Curve c = helix(1, 1);
  const GeneratorCurve g = binormal_generator(c, {-1, 1});
  for (double s : {-0.9, -0.2, 0.5}) {
    const Vec2 expect(std::sin(s / std::sqrt(2.0)), -std::cos(s / std::sqrt(2.0)));
    EXPECT_LT((g.eval(s) - expect).norm(), 1e-12);
  }
  EXPECT_NEAR(g.b1(), 1.0 / std::sqrt(2.0), 1e-8);
  EXPECT_THROW(binormal_generator(planar_circle(), {-1, 1}), DegenerateCurvature);
}

TEST(Generator, DeterminantIdentityFollowsFrenetNotKappaTauForm) {
  const DetIdentity d = generator_det_identity(helix(1, 1), 0.3);
  EXPECT_NEAR(d.lhs, 1.0 / (2.0 * std::sqrt(2.0)), 1e-7);
  EXPECT_NEAR(d.rhs_frenet, 1.0 / (2.0 * std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(d.rhs_kappa_tau, std::sqrt(2.0) / 2.0, 1e-12);
  EXPECT_GT(std::abs(d.lhs - d.rhs_kappa_tau), 0.1);
  const Curve tc = reparametrize_by_arclength(twisted_cubic({-0.5, 0.5}), 1e-10, 0.0);
  for (double s : {-0.3, 0.0, 0.25}) {
    const DetIdentity e = generator_det_identity(tc, s);
    EXPECT_NEAR(e.lhs / e.rhs_frenet, 1.0, 1e-6);
    // Speed-corrected identity also holds in the polynomial parameter.
    const DetIdentity f = generator_det_identity(twisted_cubic(), s);
    EXPECT_NEAR(f.lhs / f.rhs_frenet, 1.0, 1e-6);
  }
}

TEST(ConeChart, ExactConePointsAndTangentOffsets) {
  const Curve c = helix(1, 1);
  for (double s0 : {-0.6, 0.0, 0.45}) {
    const FrenetFrame f = frenet_frame(c, s0);
    auto q = cone_coordinates(c, 2.0 * f.B);
    EXPECT_NEAR(q.r, 2.0, 1e-12);
    EXPECT_NEAR(q.u, 0.0, 1e-12);
    EXPECT_NEAR(q.sigma, s0, 1e-12);
    q = cone_coordinates(c, f.B + 0.1 * f.T);
    EXPECT_NEAR(q.r, 1.0, 1e-12);
    EXPECT_NEAR(q.u, 0.1, 1e-12);
    EXPECT_NEAR(q.sigma, s0, 1e-12);
  }
  // e3 pairs to zero with every N(sigma) on this helix and sits outside the
  // narrow tube, so the cap is disabled; any returned root reconstructs e3.
  const Vec3 e3(0, 0, 1);
  ChartOptions wide;
  wide.u_over_r_cap = 0.0;
  const auto q = cone_coordinates(c, e3, wide);
  EXPECT_LT((cone_point(c, q) - e3).norm(), 1e-9);
}

TEST(ConeChart, RoundTripOnRandomChartPoints) {
  const Curve c = helix(1, 1);
  CounterRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const ConeCoordinates q{rng.next(0.5, 2.0), 0.0, rng.next(-0.8, 0.8)};
    ConeCoordinates p = q;
    p.u = rng.next(-0.2, 0.2) * p.r;
    const Vec3 xi = cone_point(c, p);
    const auto back = cone_coordinates(c, xi);
    EXPECT_LT((cone_point(c, back) - xi).norm(), 1e-9 * xi.norm());
    EXPECT_NEAR(back.sigma, p.sigma, 1e-9);
  }
}

TEST(ConeChart, GradientsMatchFiniteDifferences) {
  const Curve c = helix(1, 1);
  const FrenetFrame f0 = frenet_frame(c, 0.2);
  const auto g0 = scr_gradients(c, f0.B);
  EXPECT_LT((g0.grad_sigma + 2.0 * f0.N).norm(), 1e-12);
  CounterRng rng(9);
  for (int i = 0; i < 50; ++i) {
    ConeCoordinates p{rng.next(0.5, 2.0), 0.0, rng.next(-0.7, 0.7)};
    p.u = rng.next(-0.15, 0.15) * p.r;
    const Vec3 xi = cone_point(c, p);
    const auto g = scr_gradients(c, xi);
    EXPECT_NEAR(g.grad_r.dot(frenet_frame(c, p.sigma).N), 0.0, 1e-12);
    Mat3 J;  // rows: grad r, grad u, grad sigma by finite differences
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-6;
      Vec3 e = Vec3::Zero();
      e(k) = h;
      const auto a = cone_coordinates(c, xi + e), b = cone_coordinates(c, xi - e);
      J(0, k) = (a.r - b.r) / (2 * h);
      J(1, k) = (a.u - b.u) / (2 * h);
      J(2, k) = (a.sigma - b.sigma) / (2 * h);
    }
    EXPECT_LT((J.row(0).transpose() - g.grad_r).norm(), 1e-4 * g.grad_r.norm());
    EXPECT_LT((J.row(1).transpose() - g.grad_u).norm(), 1e-4 * g.grad_u.norm());
    EXPECT_LT((J.row(2).transpose() - g.grad_sigma).norm(), 1e-4 * g.grad_sigma.norm());
  }
}

TEST(ConeChart, RejectsPointsOutsideTheTube) {
  const Curve c = helix(1, 1);
  EXPECT_THROW(cone_coordinates(c, frenet_frame(c, 0).T), OutsideCone);
}
