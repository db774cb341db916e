#include <gtest/gtest.h>

#include <cmath>

#include "conewolff/curve_geometry.hpp"
#include "conewolff/errors.hpp"
#include "conewolff/rng.hpp"
#include "conewolff/scale_induction.hpp"

using namespace conewolff;

namespace {

Vec4 lift(const Vec3& v, double t = 0.0) { return Vec4(v(0), v(1), v(2), t); }

// A point whose omega coordinates are exactly w (least-norm preimage).
Vec4 preimage(const OmegaMap& om, const Vec3& w) {
  return om.W.transpose() * (om.W * om.W.transpose()).inverse() * w;
}

}  // namespace

TEST(ShearDilation, BasisAction) {
  const Curve c = helix(1, 1);
  const double s = 0.3, r = 0.125;
  const ShearDilation sd = shear_dilation(c, s, r);
  const Vec3 g = c.eval(s), t = c.derivative(s, 1).normalized();
  CounterRng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vec4 X(rng.next(-1, 1), rng.next(-1, 1), rng.next(-1, 1), rng.next(-1, 1));
    const Vec4 Y = sd.L1 * X;
    EXPECT_EQ(Y.head<3>(), X.head<3>());
    EXPECT_NEAR(Y(3), X(3) - g.dot(X.head<3>()), 1e-14);
  }
  const Vec4 e4(0, 0, 0, 1);
  EXPECT_NEAR((sd.L2 * e4 - r * r * e4).norm(), 0.0, 1e-14);
  EXPECT_NEAR((sd.L2 * lift(t) - r * lift(t)).norm(), 0.0, 1e-14);
  const FrenetFrame F = frenet_frame(c, s);
  EXPECT_NEAR((sd.L2 * lift(F.N) - lift(F.N)).norm(), 0.0, 1e-14);
  EXPECT_NEAR((sd.L2 * lift(F.B) - lift(F.B)).norm(), 0.0, 1e-14);
  EXPECT_NEAR((sd.L - sd.L1 * sd.L2).norm(), 0.0, 1e-15);
}

TEST(OmegaMap, RankThree) {
  for (double s : {-0.5, 0.0, 0.4}) EXPECT_GT(omega_map(helix(0.9, 0.3), s).min_singular, 0.1);
}

TEST(Umu, Examples) {
  const Curve c = helix(0.9, 0.3);
  const double smu = 0.2;
  const FrenetFrame F = frenet_frame(c, smu);
  const Vec3 xi = 100.0 * (0.8 * F.N + 0.6 * F.B);  // <gamma'(s_mu), xi> = 0
  EXPECT_NEAR(u_mu(c, smu, xi, 1.5), 1.5 + c.eval(smu).dot(xi), 1e-12);
  EXPECT_NEAR(u_mu(c, smu, xi, -c.eval(smu).dot(xi)), 0.0, 1e-12);

  CounterRng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x(rng.next(-5, 5), rng.next(-5, 5), rng.next(-5, 5));
    const double tau = rng.next(-5, 5);
    const double g1 = c.derivative(smu, 1).dot(x), g2 = c.derivative(smu, 2).dot(x);
    EXPECT_NEAR(u_mu(c, smu, x, tau), tau + c.eval(smu).dot(x) - 0.5 * g1 * g1 / g2, 1e-10 * (1 + std::abs(g1 * g1 / g2)));
  }
  EXPECT_THROW(u_mu_from_omega(Vec3(1.0, 2.0, 0.0)), DivByZeroGamma2);
  EXPECT_NEAR(u_mu_from_omega(Vec3(2.0, 1.0, 4.0)), 0.5, 1e-15);
}

TEST(Umu, StatedConstantsHoldOnHelix) {
  UmuOptions opt;
  opt.r0 = 0.0625;
  opt.samples = 10000;
  const UmuReport r = verify_umu_approximation(helix(0.9, 0.3), 0.1, opt);
  EXPECT_EQ(r.M, 10.0);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.max_ratio_one, 1.0);
  EXPECT_LE(r.max_ratio_two, 1.0);
  EXPECT_LE(r.max_abs_one_at_scr, 1e-14);
}

TEST(Umu, NormalFormHasNoFirstOrderError) {
  UmuOptions opt;
  opt.samples = 2000;
  const UmuReport r = verify_umu_approximation(quadratic_normal_form(), 0.0, opt);
  EXPECT_LE(r.max_ratio_one, 1e-9);
}

TEST(Plates, DirectionsAtZero) {
  const auto u = plate_directions(0.0);
  EXPECT_EQ(u[0], Vec3(0, 0, 1));
  EXPECT_EQ(u[1], Vec3(1, 0, 0));
  EXPECT_EQ(u[2], Vec3(0, 1, 0));
}

TEST(Plates, MembershipAtZeroOffsetSelectsOmegaComponents) {
  const OmegaMap om = omega_map(helix(0.9, 0.3), 0.1);
  const int k = 10, n = 2;
  const double r1 = 1e-3, K = std::ldexp(1.0, k);
  const double b1 = 4 * K, b2 = 16 * K * 4 * r1, b3 = 8 * K * 16 * r1 * r1;
  // w = (w1, w2, w3) probed against |w3| <= b1, |w1| <= b2, |w2| <= b3
  EXPECT_TRUE(pl_plate_membership(om, om.s_mu, n, r1, k, preimage(om, Vec3(0.9 * b2, 0.9 * b3, 0.9 * b1))).inside);
  EXPECT_FALSE(pl_plate_membership(om, om.s_mu, n, r1, k, preimage(om, Vec3(1.1 * b2, 0.0, 0.5 * b1))).inside);
  EXPECT_FALSE(pl_plate_membership(om, om.s_mu, n, r1, k, preimage(om, Vec3(0.0, 1.1 * b3, 0.5 * b1))).inside);
  EXPECT_FALSE(pl_plate_membership(om, om.s_mu, n, r1, k, preimage(om, Vec3(0.0, 0.0, 1.1 * b1))).inside);
  // |U_mu| = |w2| far above 2^{k+2n} r1^2 cannot be in the plate
  const Vec4 far = preimage(om, Vec3(0.0, 100 * std::ldexp(K * r1 * r1, 2 * n), 0.5 * b1));
  EXPECT_GT(std::abs(u_mu_from_omega(om(far))), std::ldexp(K * r1 * r1, 2 * n));
  EXPECT_FALSE(pl_plate_membership(om, om.s_mu, n, r1, k, far).inside);
}

TEST(Census, HelixSupportProperties) {
  CensusOptions opt;
  opt.samples = 5000;
  const CensusReport r = support_census(helix(0.9, 0.3), opt);
  EXPECT_TRUE(r.hypothesis);
  EXPECT_EQ(r.support_points, r.points);
  EXPECT_LE(r.max_multiplicity_a, 75);
  EXPECT_LE(r.max_multiplicity_b, 75);
  EXPECT_GT(r.max_multiplicity_b, 0);
  EXPECT_LE(r.max_a_scale, 16.0);
  EXPECT_LE(r.max_b_scale, 128.0);
  EXPECT_GT(r.plate_checks, 0);
  EXPECT_EQ(r.plate_failures, 0);
  EXPECT_LE(r.reconstruction_error, 1e-12);
  EXPECT_TRUE(r.multiplicity_ok && r.vanishing_ok && r.plates_ok);
}

TEST(Census, HypothesisFlag) {
  CensusOptions opt;
  opt.samples = 10;
  opt.r1 = std::ldexp(1.0, -26);
  EXPECT_FALSE(support_census(helix(0.9, 0.3), opt).hypothesis);
}

TEST(RSchedule, DeskScaleDoesNotContract) {
  const RSchedule rs = r_schedule(20, 0.3, 10);
  EXPECT_NEAR(rs.eps1, 0.003, 1e-15);
  EXPECT_FALSE(rs.contracting);
  EXPECT_EQ(rs.N, -1);
  EXPECT_TRUE(rs.hypothesis_all);
  EXPECT_FALSE(rs.terminal_lower);
  // 2^{-k eps1} 100 M < 1 first happens at k > log2(1000) / 0.003
  EXPECT_EQ(rs.k_contracting, static_cast<int>(std::floor(std::log2(1000.0) / 0.003)) + 1);
}

TEST(RSchedule, ContractingScheduleInvariants) {
  const int k = r_schedule(20, 0.3, 10).k_contracting + 100;
  const RSchedule rs = r_schedule(k, 0.3, 10);
  ASSERT_TRUE(rs.contracting);
  ASSERT_GE(rs.N, 0);
  const double target = -k * (0.5 - rs.eps1);
  EXPECT_GE(rs.rows.back().log2_r1, target);
  EXPECT_LT(1.5 * rs.rows.back().log2_r1, target);  // r1(N+1) = r1(N)^{3/2} misses the target
  EXPECT_TRUE(rs.terminal_lower);
  for (const auto& row : rs.rows) {
    // log2 r1 - log2(100 M) - (3/2) log2 r0 = (3/2)^{n+1} log2(100) - log2(100 M) >= 0
    const double slack = std::pow(1.5, row.n + 1) * std::log2(100.0) - std::log2(1000.0);
    EXPECT_NEAR(row.log2_r1 - std::log2(1000.0) - 1.5 * row.log2_r0, slack, 1e-9 * std::abs(row.log2_r0));
    EXPECT_TRUE(row.hypothesis);
  }
  EXPECT_NEAR(rs.C, rs.N * rs.eps1, 1e-15);
}

TEST(RSchedule, Errors) {
  EXPECT_THROW(r_schedule(5, 0.3, 10), DomainError);
  EXPECT_THROW(r_schedule(20, 5.0, 10), ScheduleEmpty);
}

TEST(KernelProbe, DecayScalesAndBounds) {
  const Curve c = helix(0.9, 0.3);
  KernelDecayOptions opt;
  opt.k = 10;
  opt.r = 0.125;
  const KernelDecayReport a = kernel_decay_probe(c, 0.1, opt);
  const double band = std::exp2(0.2);
  EXPECT_LE(a.scale_tangent / a.target_tangent, band);
  EXPECT_GE(a.scale_tangent / a.target_tangent, 1 / band);
  EXPECT_LE(a.scale_normal / a.target_normal, band);
  EXPECT_GE(a.scale_normal / a.target_normal, 1 / band);
  EXPECT_LE(a.scale_time / a.target_time, band);
  EXPECT_GE(a.scale_time / a.target_time, 1 / band);
  EXPECT_LE(a.center, a.trivial_bound);
  EXPECT_GT(a.l1_bound, 0.5);
  EXPECT_LT(a.l1_bound, 100.0);

  opt.r = 0.25;
  const KernelDecayReport b = kernel_decay_probe(c, 0.1, opt);
  // doubling r halves the decay length along gamma'
  EXPECT_NEAR(b.scale_tangent / a.scale_tangent, 2.0, 0.4);
  EXPECT_DOUBLE_EQ(b.l1_bound, a.l1_bound);
  EXPECT_TRUE(std::isfinite(a.hormander_constant));
}

TEST(KernelProbe, ProfileTransformAtZeroIsTheIntegral) {
  // int eta0 over [-1,1]: eta0 = 1 on [-1/2,1/2] and the two flanks are mirror images summing to 1
  EXPECT_NEAR(probe_profile_transform(0, 0.0).real(), 1.5, 1e-10);
  EXPECT_NEAR(probe_profile_transform(2, 0.0).real(), 0.375, 1e-10);
}

TEST(Llnu, IsometryAtLevelZero) {
  const Curve c = helix(1, 1);
  const LlnuRescaling R = rescale_llnu(c, 0, 0);
  double m = 0.0;
  for (int i = 0; i < 65; ++i) {
    const double u = -1.0 + 2.0 * i / 64;
    m = std::max(m, c.displacement(u, 0.0).norm());
    for (int j = 1; j <= 5; ++j) m = std::max(m, c.derivative(u, j).norm());
  }
  EXPECT_NEAR(R.c5_norm(), m, 1e-9);
  EXPECT_NEAR((R.U.transpose() * R.U - Mat3::Identity()).norm(), 0.0, 1e-12);
}

TEST(Llnu, UniformAcrossLevels) {
  const Curve c = helix(1, 1);
  double lo = INFINITY, hi = 0.0;
  for (int l = 2; l <= 5; ++l)
    for (int nu : {-1, 0, 1}) {
      const double n = rescale_llnu(c, l, nu).c5_norm();
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
  EXPECT_LE(hi / lo, 4.0);
  const LlnuRescaling R = rescale_llnu(c, 3, 2);
  const Vec3 e(0.3, -2.0, 7.0);
  EXPECT_NEAR((R.delta_inv(R.delta(e)) - e).norm(), 0.0, 1e-12);
  EXPECT_NEAR((R.L_inv(R.L(e)) - e).norm(), 0.0, 1e-12);
}

TEST(Llnu, DegenerateCurvature) {
  EXPECT_THROW(rescale_llnu(straight_line(), 2, 0), DegenerateCurvature);
}

TEST(Llnu, CurvatureBandIsReported) {
  const CurvatureBandReport r = curvature_band(helix(1, 1), 14, 3, 0, 500);
  EXPECT_EQ(r.points, 500);
  EXPECT_LE(r.min_ratio, r.max_ratio);
  EXPECT_GT(r.max_ratio, 0.0);
  EXPECT_TRUE(std::isfinite(r.min_ratio_critical));
}
