#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "conewolff/cone_plates.hpp"
#include "conewolff/curve_geometry.hpp"
#include "conewolff/errors.hpp"
#include "conewolff/operator_lab.hpp"
#include "conewolff/rng.hpp"
#include "conewolff/scale_induction.hpp"
#include "conewolff/symbol_decomposition.hpp"
#include "experiments.hpp"

namespace conewolff::cli {

namespace {

template <class E, class F>
bool throws(F&& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(3);
  o << v;
  return o.str();
}

bool line_is_degenerate(std::string&) {
  return throws<DegenerateCurvature>([] { frenet_frame(straight_line(), 0.0); });
}

bool circle_is_planar(std::string& d) {
  const FrenetFrame f = frenet_frame(planar_circle(), 0.3);
  d = "kappa " + fmt(f.kappa) + " tau " + fmt(f.tau);
  return std::abs(f.kappa - 1.0) < 1e-10 && std::abs(f.tau) < 1e-10 &&
         (throws<B3TooSmall>([] { binormal_generator(planar_circle(), {-1, 1}); }) ||
          throws<DegenerateCurvature>([] { binormal_generator(planar_circle(), {-1, 1}); }));
}

bool exact_cone_point(std::string& d) {
  const Curve c = helix(1, 1);
  const FrenetFrame f = frenet_frame(c, 0.4);
  const ConeCoordinates q = cone_coordinates(c, 2.0 * f.B);
  const auto g = scr_gradients(c, f.B + 0.1 * f.T);
  const ConeCoordinates p = cone_coordinates(c, f.B + 0.1 * f.T);
  d = "r " + fmt(q.r) + " u " + fmt(q.u) + " sigma " + fmt(q.sigma);
  return std::abs(q.r - 2) < 1e-12 && std::abs(q.u) < 1e-12 && std::abs(q.sigma - 0.4) < 1e-12 &&
         std::abs(g.grad_r.dot(frenet_frame(c, p.sigma).N)) < 1e-12;
}

bool plate_membership(std::string&) {
  const GeneratorCurve g = parabola_generator();
  const double delta = 1.0 / 64, lambda = 16.0;
  const Plate p = make_plate(g, 0.0, delta, lambda);
  const Plate q = make_plate(g, 0.0, delta, lambda, 2.0);
  return plate_contains(p, Vec3(0, 0, lambda)) && !plate_contains(p, Vec3(0, 2 * lambda * delta, lambda)) &&
         plate_contains(q, Vec3(0, 1.5 * lambda * delta, lambda)) && !plate_contains(q, Vec3(0, 0, 3 * 2.0 * lambda));
}

bool family_edge_cases(std::string& d) {
  const GeneratorCurve g = unit_circle_generator();
  const double delta = 1.0 / 64;
  const PlateFamily one = make_family(g, delta, 8.0, 0.05, std::sqrt(delta));
  const PlateFamily many = make_family(g, delta, 8.0, 1.0, std::sqrt(delta));
  d = std::to_string(many.plates.size()) + " plates";
  return one.plates.size() == 1 && std::abs(many.plates[1].alpha - many.plates[0].alpha - std::sqrt(delta)) < 1e-12 &&
         family_violation(many).empty();
}

bool rotations_and_maps(std::string& d) {
  const GeneratorCurve g = unit_circle_generator();
  const Mat3 r0 = rotation_step1(g, 0.0), r2 = rotation_step1(g, 2 * M_PI);
  const double e = std::max({(r0 - Mat3::Identity()).norm(), (r2 - Mat3::Identity()).norm(),
                             (parabolic_rescale_step1(1.0) - Mat3::Identity()).norm(),
                             (tilt_normalize(0, 0, 1) - Mat3::Identity()).norm()});
  const Vec3 img = tilt_normalize(0.7, -0.4, 1.3) * Vec3(2.0, -0.4, 1.0);
  d = "identity error " + fmt(e);
  return e < 1e-12 && (img - Vec3(1, 0, 1)).norm() < 1e-12;
}

bool circle_osculates_itself(std::string& d) {
  const GeneratorCurve g = unit_circle_generator();
  const OsculatingCircle oc = osculating_circle(g, 1.0);
  const double dev = osculating_deviation(g, oc, 1.0, 1.0 / 64);
  d = "deviation " + fmt(dev);
  return std::abs(oc.rho - 1) < 1e-12 && oc.center.norm() < 1e-12 && dev < 1e-12;
}

bool identity_containment(std::string&) {
  const PlateFamily f = make_family(unit_circle_generator(), 1.0 / 64, 10.0, 1.0, 1.0 / 8);
  std::vector<MappedPlate> m;
  for (std::size_t i = 0; i < f.plates.size(); ++i) m.push_back({f.plates[i], Mat3::Identity(), i});
  const ContainmentReport r = verify_containment(m, f, 1.0, 100);
  return r.holds && r.max_A <= 1.0 + 1e-12;
}

bool schedule_examples(std::string& d) {
  const ExponentSchedule s = exponent_schedule("74", "0.1");
  d = "n_star " + std::to_string(s.n_star);
  return s.n_star == 8 && exponent_schedule("74", "2").n_star == 1 && s.recursion_matches_closed_form;
}

bool cutoff_values(std::string&) {
  const CutoffSystem c = build_cutoffs();
  bool ok = c.eta0(0.0) == 1.0 && c.eta1(0.3) == 0.0 && c.eta1(4.5) == 0.0;
  for (double t = -2; t <= 2; t += 0.0137) {
    double sum = 0.0;
    for (int nu = -4; nu <= 4; ++nu) sum += c.zeta(t - nu);
    ok = ok && std::abs(sum - 1.0) < 1e-12;
  }
  return ok;
}

bool decomposition_telescopes(std::string& d) {
  const Curve c = helix(1, 1);
  const SymbolPiece ak = make_symbol(c, 9);
  const auto pieces = decompose(ak);
  CounterRng rng(5);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    ConeCoordinates q{rng.next(0.6, 1.9), 0.0, rng.next(-0.9, 0.9)};
    q.u = rng.next(-0.14, 0.14) * q.r;
    const Vec3 xi = cone_point(c, q);
    const double s = rng.next(-1, 1);
    double sum = 0.0;
    for (const auto& p : pieces) sum += p.eval(s, xi);
    worst = std::max(worst, std::abs(sum - ak.eval(s, xi)));
  }
  d = "max error " + fmt(worst);
  return worst <= 1e-12;
}

bool nu_pieces_sum_back(std::string&) {
  const Curve c = helix(1, 1);
  const SymbolPiece ak = make_symbol(c, 9);
  const auto pieces = decompose(ak);
  const SymbolPiece& p = pieces[1];
  const auto loc = nu_localize(p);
  CounterRng rng(6);
  for (int i = 0; i < 200; ++i) {
    ConeCoordinates q{rng.next(0.6, 1.9), 0.0, rng.next(-0.9, 0.9)};
    q.u = rng.next(-0.14, 0.14) * q.r;
    const Vec3 xi = cone_point(c, q);
    const double s = rng.next(-1, 1);
    double sum = 0.0;
    int count = 0;
    for (const auto& l : loc) {
      const double v = l.eval(s, xi);
      sum += v;
      if (v != 0.0) {
        ++count;
        if (std::abs(l.nu_scale() * s - l.nu) >= 1.0) return false;
      }
    }
    if (std::abs(sum - p.eval(s, xi)) > 1e-12 || count > 2) return false;
  }
  return true;
}

bool dilations_invert(std::string&) {
  const FiniteTypeRescaling r = finite_type_rescale(twisted_cubic(), 0.0, 3);
  const LlnuRescaling l = rescale_llnu(helix(1, 1), 2, 1);
  const Vec3 x(0.3, -1.2, 2.5);
  return (r.contract(r.dilate(x)) - x).norm() < 1e-12 * x.norm() && (l.delta_inv(l.delta(x)) - x).norm() < 1e-12 * x.norm();
}

bool umu_examples(std::string&) {
  const Curve c = helix(0.9, 0.3);
  const double smu = 0.1;
  const FrenetFrame f = frenet_frame(c, smu);
  const Vec3 xi = 3.0 * f.N + 1.0 * f.B;  // <gamma'(s_mu), xi> = 0
  const double tau = 0.7;
  return std::abs(u_mu(c, smu, xi, tau) - (tau + c.eval(smu).dot(xi))) < 1e-12 &&
         std::abs(u_mu(c, smu, xi, -c.eval(smu).dot(xi))) < 1e-12;
}

bool multiplier_trivia(std::string& d) {
  const Grid3 g(16, 4.0);
  const Field3 f = band_limited_random_field(g, 1, 3);
  const Field3 one = apply_multiplier(f, [](const Vec3&) { return cplx(1.0); });
  const Field3 zero = apply_multiplier(f, [](const Vec3&) { return cplx(0.0); });
  LatticeSymbol half(g.size(), 0.0), rest(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) (g.modes(i)(0) > 0 ? half : rest)[i] = 1.0;
  const double a = apply_multiplier(f, half).l2_norm(), b = apply_multiplier(f, rest).l2_norm(), n = f.l2_norm();
  d = "parseval split " + fmt(std::abs(a * a + b * b - n * n) / (n * n));
  return (one - f).max_abs() < 1e-12 * f.max_abs() && zero.max_abs() == 0.0 && std::abs(a * a + b * b - n * n) < 1e-10 * n * n;
}

bool lp_norm_trivia(std::string&) {
  const Grid3 g(16, 2.0);
  const Field3 c = Field3::from_function(g, [](const Vec3&) { return cplx(3.0); });
  bool ok = std::abs(lp_norm(c, 4.0) - 3.0 * std::pow(g.volume(), 0.25)) < 1e-12;
  const Field3 f = band_limited_random_field(g, 1, 4);
  double prev = 0.0;
  for (double p : {2.0, 4.0, 6.0, 8.0}) {
    const double v = std::pow(g.volume(), -1.0 / p) * lp_norm(f, p);
    ok = ok && v >= prev * (1 - 1e-12);
    prev = v;
  }
  return ok && std::abs(lp_norm(f, 2.0) - f.l2_norm()) < 1e-10 * f.l2_norm();
}

bool decoupling_trivia(std::string& d) {
  const Grid3 g(64, 8.0);
  const PlateFamily fam = light_cone_family(0.25, 14.0);
  const Field3 pf = random_plate_field(g, fam.plates[0], 3);
  bool support = true;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (pf[i] != 0.0) support = support && plate_contains(fam.plates[0], g.frequency(i));
  const auto single = decoupling_family(g, {fam.plates[0]}, 8.0, {{cplx(1.0)}});
  const auto pair = decoupling_family(g, {fam.plates[0], fam.plates[7]}, 2.0, {{1.0, 1.0}, {1.0, -1.0}});
  d = "single " + fmt(single.ratios[0]) + " p=2 " + fmt(pair.ratios[0]);
  return support && std::abs(single.ratios[0] - 1) < 1e-12 && pair.disjoint && std::abs(pair.ratios[0] - 1) < 1e-8 &&
         std::abs(pair.ratios[1] - 1) < 1e-8;
}

bool averaging_trivia(std::string& d) {
  const Grid3 g(16, 8.0);
  const Curve c = helix(1, 1);
  const ParamCutoff chi{0.0, 0.5};
  const Field3 one = Field3::from_function(g, [](const Vec3&) { return cplx(1.0); });
  const Field3 a = averaging_operator(one, c, chi, 1.0).to_physical();
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(a[i] - chi.integral()));
  const MeasureTransform mt(c, chi, 1.0);
  d = "DC error " + fmt(e);
  return e < 1e-12 && std::abs(mt(Vec3::Zero()) - chi.integral()) < 1e-12;
}

bool maximal_trivia(std::string&) {
  const Grid3 g(16, 8.0);
  const Curve c = helix(1, 1);
  const ParamCutoff chi{0.0, 0.5};
  Field3 f = band_limited_random_field(g, 1, 8);
  const Field3 single = maximal_operator(f, c, chi, {1.3});
  const Field3 a = averaging_operator(f, c, chi, 1.3).to_physical();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(single[i].real() - std::abs(a[i])) > 1e-12) return false;
  const Field3 two = maximal_operator(f, c, chi, {1.3, 1.7});
  for (std::size_t i = 0; i < g.size(); ++i)
    if (two[i].real() < single[i].real()) return false;
  return true;
}

bool helix_phase_trivia(std::string&) {
  const auto [l, r] = helix_phase_identity(1.5, 1.2, 0.3, Vec3(0, 0, 1));
  CounterRng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = helix_phase_identity(rng.next(1, 2), rng.next(1, 2), rng.next(-1, 1),
                                             Vec3(rng.next(-1, 1), rng.next(-1, 1), rng.next(-1, 1)));
    worst = std::max(worst, std::abs(a - b));
  }
  return l == 0.0 && std::abs(r) < 1e-15 && worst < 1e-12;
}

bool cli_rejects_bad_sigma(std::string& d) {
  Config cfg = Config::parse("experiment = plates\n[scales]\ndelta = 1/64\nsigma = 0.25\n", "<selftest>");
  try {
    find_experiment("plates").prepare(cfg);
  } catch (const ConfigError& e) {
    d = e.what();
    return true;
  }
  return false;
}

bool cli_list_is_stable(std::string&) {
  const std::string a = list_experiments(), b = list_experiments();
  return a == b && a.rfind("geometry", 0) == 0 && a.find("decouple") != std::string::npos &&
         a.find("umu") != std::string::npos;
}

}  // namespace

const std::vector<SelfCheck>& self_checks() {
  static const std::vector<SelfCheck> list = {
      {"line has no Frenet frame", line_is_degenerate},
      {"planar circle: kappa 1, tau 0, no generator", circle_is_planar},
      {"exact cone point chart coordinates", exact_cone_point},
      {"plate membership examples", plate_membership},
      {"plate family spacing and short windows", family_edge_cases},
      {"trivial rotations and rescalings are identities", rotations_and_maps},
      {"circle is its own osculating circle", circle_osculates_itself},
      {"identity map containment at A = 1", identity_containment},
      {"exponent schedule n_star examples", schedule_examples},
      {"cutoff values and partition of unity", cutoff_values},
      {"decomposition telescopes to a_k", decomposition_telescopes},
      {"nu pieces sum back with bounded overlap", nu_pieces_sum_back},
      {"dilations invert", dilations_invert},
      {"U_mu without the quadratic term", umu_examples},
      {"trivial multipliers and Parseval split", multiplier_trivia},
      {"L^p norm of constants and Holder monotonicity", lp_norm_trivia},
      {"single plate and Plancherel decoupling", decoupling_trivia},
      {"averaging of constants", averaging_trivia},
      {"maximal operator reduces and is monotone", maximal_trivia},
      {"helix phase identity", helix_phase_trivia},
      {"config rejects sigma > sqrt(delta)", cli_rejects_bad_sigma},
      {"experiment list is stable", cli_list_is_stable},
  };
  return list;
}

int selftest(std::ostream& out) {
  int failed = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : self_checks()) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("threw ") + e.what();
    }
    failed += !ok;
    out << (ok ? "PASS " : "FAIL ") << c.name << (detail.empty() ? "" : "  (" + detail + ")") << '\n';
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << self_checks().size() - failed << "/" << self_checks().size() << " passed in " << fmt(s) << " s\n";
  return failed ? 2 : 0;
}

}  // namespace conewolff::cli
