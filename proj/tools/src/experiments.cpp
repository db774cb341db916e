#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <sstream>

#include "conewolff/cone_plates.hpp"
#include "conewolff/curve_geometry.hpp"
#include "conewolff/errors.hpp"
#include "conewolff/fit.hpp"
#include "conewolff/operator_lab.hpp"
#include "conewolff/rng.hpp"
#include "conewolff/scale_induction.hpp"
#include "conewolff/symbol_decomposition.hpp"

namespace conewolff::cli {

namespace {

Grid3 read_grid(Config& cfg, int n, double L) {
  n = cfg.get_int("grid.n", n);
  L = cfg.get_double("grid.L", L);
  try {
    return Grid3(n, L);
  } catch (const Error& e) {
    cfg.fail("grid.n", e.what());
  }
}

void require(Config& cfg, bool ok, const std::string& key, const std::string& message) {
  if (!ok) cfg.fail(key, message);
}

// geometry: Frenet data along the curve plus finite type, exponent triple and the generator identity.
Job prepare_geometry(Config& cfg) {
  std::string name;
  Vec2 ab;
  const Curve c = cfg.get_curve("curve", "helix(1, 1)", &name, &ab);
  const int samples = cfg.get_int("options.samples", 101);
  const double s0 = cfg.get_double("options.s0", c.domain().mid());
  const int n_max = cfg.get_int("options.n_max", Curve::kMaxOrder);
  require(cfg, samples >= 2, "options.samples", "needs at least 2 samples");
  require(cfg, c.domain().contains(s0), "options.s0", "must lie in the curve domain");
  require(cfg, n_max >= 1 && n_max <= Curve::kMaxOrder, "options.n_max", "must be in 1..5");
  return [=] {
    ExperimentOutput out;
    const auto rows = sample_curve(c, samples);
    out.csv = curve_samples_csv(rows);
    Series kap{"kappa", {}, {}}, tor{"tau", {}, {}};
    double kmin = INFINITY, kmax = -INFINITY, tmin = INFINITY, tmax = -INFINITY;
    for (const auto& r : rows) {
      kap.x.push_back(r.s), kap.y.push_back(r.kappa), tor.x.push_back(r.s), tor.y.push_back(r.tau);
      kmin = std::min(kmin, r.kappa), kmax = std::max(kmax, r.kappa);
      if (std::isfinite(r.tau)) tmin = std::min(tmin, r.tau), tmax = std::max(tmax, r.tau);
    }
    auto& R = out.results;
    R["curve"] = c.name();
    R["domain"] = {c.domain().lo, c.domain().hi};
    R["samples"] = samples;
    R["kappa_range"] = {kmin, kmax};
    R["tau_range"] = {tmin, tmax};

    std::vector<double> ss;
    for (int i = 0; i < 21; ++i) ss.push_back(c.domain().lo + c.domain().length() * (i + 0.5) / 21);
    try {
      const FiniteTypeReport ft = finite_type(c, ss, sphere_grid(12, 24), n_max);
      R["finite_type"] = {{"max_type", ft.max_type}, {"witness_constant", ft.witness_constant}};
    } catch (const Error& e) {
      R["finite_type"] = {{"error", e.kind()}};
    }
    try {
      const ExponentTriple t = exponent_triple(c, s0);
      R["exponent_triple"] = {{"s0", s0}, {"n", {t.n1, t.n2, t.n3}}};
    } catch (const Error& e) {
      R["exponent_triple"] = {{"s0", s0}, {"error", e.kind()}};
    }
    try {
      const DetIdentity d = generator_det_identity(c, s0);
      R["generator_determinant"] = {{"s0", s0}, {"lhs", d.lhs}, {"rhs_frenet", d.rhs_frenet}, {"rhs_kappa_tau_form", d.rhs_kappa_tau}};
    } catch (const Error& e) {
      R["generator_determinant"] = {{"s0", s0}, {"error", e.kind()}};
    }

    if (name == "helix") {
      const double a = ab(0), b = ab(1), den = a * a + b * b;
      double ek = 0.0, et = 0.0;
      for (const auto& r : rows) ek = std::max(ek, std::abs(r.kappa - a / den)), et = std::max(et, std::abs(r.tau - b / den));
      R["closed_form"] = {{"kappa", a / den}, {"tau", b / den}};
      out.checks.push_back(check_le("kappa_closed_form_error", ek, 1e-8));
      out.checks.push_back(check_le("tau_closed_form_error", et, 1e-8));
    }
    out.plots.push_back({"frenet", "curvature and torsion of " + c.name(), "s", "value", false, false, {kap, tor}});
    return out;
  };
}

// plates: a plate family on a generator, its standing assumptions and the rescaling containment.
Job prepare_plates(Config& cfg) {
  const std::string gen = cfg.get_string("options.generator", "circle");
  require(cfg, gen == "circle" || gen == "parabola", "options.generator", "expected circle or parabola");
  const double delta = cfg.get_double("scales.delta", 1.0 / 256);
  const double lambda = cfg.get_double("scales.lambda", 64.0);
  const double theta = cfg.get_double("scales.theta", 0.25);
  const double sigma = cfg.get_double("scales.sigma", std::sqrt(delta));
  const double A = cfg.get_double("scales.A", 8.0);
  const std::vector<double> deltas =
      cfg.get_doubles("scales.deltas", {0x1p-6, 0x1p-7, 0x1p-8, 0x1p-9, 0x1p-10, 0x1p-11, 0x1p-12});
  const int samples = cfg.get_int("options.samples", 10000);
  const std::uint64_t seed = cfg.get_seed("seed", 1);
  require(cfg, delta > 0 && delta <= 1, "scales.delta", "must be in (0, 1]");
  require(cfg, lambda > 0, "scales.lambda", "must be positive");
  require(cfg, sigma > 0 && sigma <= std::sqrt(delta) * (1 + 1e-12), "scales.sigma", "needs 0 < sigma <= sqrt(delta)");
  require(cfg, std::sqrt(delta) <= theta * (1 + 1e-12), "scales.theta", "needs sqrt(delta) <= theta");
  require(cfg, theta <= 1.0, "scales.theta", "needs theta <= 1");
  require(cfg, A >= 1.0, "scales.A", "needs A >= 1");
  require(cfg, samples >= 0, "options.samples", "must be non-negative");
  for (double d : deltas) require(cfg, d > 0 && d < 1, "scales.deltas", "entries must be in (0, 1)");
  return [=] {
    ExperimentOutput out;
    const GeneratorCurve g = gen == "circle" ? unit_circle_generator({-M_PI, M_PI}) : parabola_generator();
    const PlateFamily fam = make_family(g, delta, lambda, theta, sigma, -theta / 2);
    const std::string violation = family_violation(fam);
    const BumpDerivativeReport bump = bump_derivative_check(BumpFunction{fam.plates.front()}, 200, seed);
    auto& R = out.results;
    R["generator"] = gen;
    R["plates"] = fam.plates.size();
    R["family_violation"] = violation;
    R["bump_derivative_ratio"] = bump.max_ratio;
    std::ostringstream csv;
    csv.precision(17);
    csv << "alpha,u1x,u1y,u1z,center_x,center_y,center_z\n";
    for (const Plate& p : fam.plates) {
      const Vec3 c = p.center();
      csv << p.alpha << ',' << p.u1(0) << ',' << p.u1(1) << ',' << p.u1(2) << ',' << c(0) << ',' << c(1) << ',' << c(2) << '\n';
    }
    out.csv = csv.str();
    out.checks.push_back(check_true("family_assumptions", violation.empty()));

    if (gen == "circle") {
      const Step1Rescaling r = step1_rescaling(g, delta, lambda, theta, samples, seed);
      R["rescaling"] = {{"source_plates", r.source.plates.size()},
                        {"max_A", r.containment.max_A},
                        {"image_separation", r.image_separation},
                        {"separation_constant", std::sqrt(delta) / theta / r.image_separation}};
      out.checks.push_back(check_le("rescaled_containment_A", r.containment.max_A, A));
    } else {
      const OsculatingCircle oc = osculating_circle(g, 0.0);
      std::vector<double> devs;
      for (double d : deltas) devs.push_back(osculating_deviation(g, oc, 0.0, d));
      const LineFit fit = fit_log2(deltas, devs, true);
      R["osculating"] = {{"deltas", deltas}, {"deviation", devs}, {"slope", fit.slope}};
      out.checks.push_back(check_ge("osculating_slope", fit.slope, 0.95));
      out.plots.push_back({"osculating", "osculating circle deviation", "delta", "max deviation", true, true,
                           {{"deviation", deltas, devs}, {"delta", deltas, deltas}}});
    }
    return out;
  };
}

// decompose: van der Corput sweeps of the localized pieces and the reconstruction identity.
Job prepare_decompose(Config& cfg) {
  const Curve c = cfg.get_curve("curve", "helix(1, 1)");
  const std::vector<int> ks = cfg.get_ints("scales.ks", {8, 10, 12});
  const int l = cfg.get_int("scales.l", 2);
  const std::vector<std::string> kinds = cfg.get_strings("options.kinds", {"a", "b", "tilde"});
  VdcOptions vopt;
  vopt.samples = cfg.get_int("options.samples", 200);
  vopt.A0 = cfg.get_double("options.A0", 0.0);
  vopt.seed = cfg.get_seed("seed", 1);
  const int recon = cfg.get_int("options.reconstruction_points", 2000);
  require(cfg, ks.size() >= 2, "scales.ks", "needs at least two scales for a slope");
  for (int k : ks) {
    require(cfg, k >= 3 && k <= 30, "scales.ks", "entries must be in 3..30");
    require(cfg, 3 * l <= k, "scales.l", "needs l <= k/3 for every k");
  }
  require(cfg, l >= 0, "scales.l", "must be non-negative");
  require(cfg, vopt.samples >= 1, "options.samples", "must be positive");
  for (const auto& k : kinds)
    require(cfg, k == "a" || k == "b" || k == "tilde", "options.kinds", "entries must be a, b or tilde");
  return [=] {
    ExperimentOutput out;
    std::ostringstream csv;
    csv.precision(17);
    csv << "kind,k,sup\n";
    PlotSpec plot{"decay", "multiplier sup against scale", "2^k", "sup |m_k|", true, true, {}};
    for (const auto& name : kinds) {
      const PieceKind kind = piece_kind_from_string(name);
      const VdcSweep s = vdc_decay_sweep(c, kind, name == "tilde" ? 0 : l, ks, vopt);
      out.results["sweeps"][name] = s.to_json();
      Series ser{name, {}, {}};
      for (const auto& p : s.points) {
        csv << name << ',' << p.k << ',' << p.sup << '\n';
        ser.x.push_back(std::ldexp(1.0, p.k));
        ser.y.push_back(p.sup);
      }
      plot.series.push_back(ser);
      out.checks.push_back(check_in(name + "_slope", s.slope, s.band_lo, s.band_hi));
    }
    out.csv = csv.str();
    out.plots.push_back(plot);

    // sum of the decomposition against a_k at random points of the tube
    double worst = 0.0;
    for (int k : ks) {
      const SymbolPiece ak = make_symbol(c, k, {}, vopt.A0);
      const auto pieces = decompose(ak);
      CounterRng rng(vopt.seed, static_cast<std::uint64_t>(k));
      for (int i = 0; i < recon; ++i) {
        ConeCoordinates q;
        q.r = rng.next(0.6, 1.9);
        q.u = rng.next(-0.14, 0.14) * q.r;
        q.sigma = rng.next(c.domain().lo * 0.9, c.domain().hi * 0.9);
        const Vec3 xi = cone_point(c, q);
        const double s = rng.next(c.domain().lo, c.domain().hi);
        double sum = 0.0;
        for (const SymbolPiece& p : pieces) sum += p.eval(s, xi);
        worst = std::max(worst, std::abs(sum - ak.eval(s, xi)));
      }
    }
    out.results["reconstruction_error"] = worst;
    out.checks.push_back(check_le("reconstruction_error", worst, 1e-12));
    return out;
  };
}

// umu: the two pointwise approximation bounds with constants 6M and 13M.
Job prepare_umu(Config& cfg) {
  const Curve c = cfg.get_curve("curve", "helix(0.9, 0.3)");
  UmuOptions opt;
  opt.r0 = cfg.get_double("scales.r0", 1.0 / 16);
  opt.k = cfg.get_int("scales.k", 10);
  opt.M = cfg.get_double("scales.M", 0.0);
  opt.samples = cfg.get_int("options.samples", 10000);
  opt.seed = cfg.get_seed("seed", 1);
  const double s_mu = cfg.get_double("options.s_mu", 0.1);
  require(cfg, opt.r0 > 0 && opt.r0 <= 0.25, "scales.r0", "must be in (0, 1/4]");
  require(cfg, opt.samples >= 1, "options.samples", "must be positive");
  require(cfg, c.domain().contains(s_mu), "options.s_mu", "must lie in the curve domain");
  return [=] {
    ExperimentOutput out;
    const UmuReport r = verify_umu_approximation(c, s_mu, opt);
    out.results = r.to_json();
    out.csv = "bound,max_ratio\nfirst," + std::to_string(r.max_ratio_one) + "\nsecond," + std::to_string(r.max_ratio_two) + "\n";
    out.checks.push_back(check_le("first_bound_ratio", r.max_ratio_one, 1.0));
    out.checks.push_back(check_le("second_bound_ratio", r.max_ratio_two, 1.0));
    return out;
  };
}

// census: multiplicity, vanishing thresholds and plate membership of the n-level pieces.
Job prepare_census(Config& cfg) {
  const Curve c = cfg.get_curve("curve", "helix(0.9, 0.3)");
  CensusOptions opt;
  opt.k = cfg.get_int("scales.k", opt.k);
  opt.r0 = cfg.get_double("scales.r0", opt.r0);
  opt.r1 = cfg.get_double("scales.r1", opt.r1);
  opt.M = cfg.get_double("scales.M", 0.0);
  opt.samples = cfg.get_int("options.samples", opt.samples);
  opt.seed = cfg.get_seed("seed", 1);
  require(cfg, opt.r0 > 0 && opt.r0 < 0.25, "scales.r0", "must be in (0, 1/4)");
  require(cfg, opt.r1 > 0 && opt.r1 <= opt.r0, "scales.r1", "needs 0 < r1 <= r0");
  require(cfg, opt.samples >= 1, "options.samples", "must be positive");
  return [=] {
    ExperimentOutput out;
    const CensusReport r = support_census(c, opt);
    out.results = r.to_json();
    std::ostringstream csv;
    csv << "quantity,value,bound\n"
        << "multiplicity_a," << r.max_multiplicity_a << ",75\n"
        << "multiplicity_b," << r.max_multiplicity_b << ",75\n"
        << "a_scale," << r.max_a_scale << ",16\n"
        << "b_scale," << r.max_b_scale << ",128\n"
        << "plate_failures," << r.plate_failures << ",0\n";
    out.csv = csv.str();
    out.checks.push_back(check_le("multiplicity_a", r.max_multiplicity_a, 75));
    out.checks.push_back(check_le("multiplicity_b", r.max_multiplicity_b, 75));
    out.checks.push_back(check_le("a_scale", r.max_a_scale, 16));
    out.checks.push_back(check_le("b_scale", r.max_b_scale, 128));
    out.checks.push_back(check_le("plate_failures", r.plate_failures, 0));
    return out;
  };
}

// schedule: exact beta recursion (asserted) and the r0/r1 schedule (reported).
Job prepare_schedule(Config& cfg) {
  const std::string p = cfg.get_string("scales.p", "74");
  const std::string eps = cfg.get_string("scales.eps", "0.1");
  const int k = cfg.get_int("scales.k", 20);
  const double eps0 = cfg.get_double("scales.eps0", 0.3);
  const double M = cfg.get_double("scales.M", 10.0);
  const int d = cfg.get_int("scales.d", 3);
  try {
    exponent_schedule(p, eps);
  } catch (const Error& e) {
    cfg.fail("scales.p", e.what());
  }
  require(cfg, eps0 > 0, "scales.eps0", "must be positive");
  require(cfg, M >= 10, "scales.M", "needs M >= 10");
  require(cfg, d >= 1, "scales.d", "must be positive");
  return [=] {
    ExperimentOutput out;
    const ExponentSchedule s = exponent_schedule(p, eps);
    auto& R = out.results;
    R["p"] = p;
    R["eps"] = eps;
    R["n_star"] = s.n_star;
    R["fixed_point"] = s.fixed_point;
    R["betas"] = s.betas;
    R["betas_exact"] = s.betas_exact;
    std::ostringstream csv;
    csv.precision(17);
    csv << "n,beta,beta_exact\n";
    std::vector<double> ns;
    for (std::size_t n = 0; n < s.betas.size(); ++n) {
      csv << n << ',' << s.betas[n] << ',' << s.betas_exact[n] << '\n';
      ns.push_back(static_cast<double>(n));
    }
    out.csv = csv.str();
    out.checks.push_back(check_true("recursion_matches_closed_form", s.recursion_matches_closed_form));
    out.checks.push_back(check_true("strictly_decreasing", s.strictly_decreasing));
    out.checks.push_back(check_true("distance_bound", s.distance_bound));
    out.checks.push_back(check_true("final_bound", s.final_bound));
    try {
      R["r_schedule"] = r_schedule(k, eps0, M, d).to_json();
    } catch (const Error& e) {
      R["r_schedule"] = {{"error", e.kind()}, {"message", e.what()}};
    }
    out.plots.push_back({"betas", "exponent schedule", "n", "beta_n", false, false,
                         {{"beta", ns, s.betas}, {"fixed point", {0.0, ns.back()}, {s.fixed_point, s.fixed_point}}}});
    return out;
  };
}

// decouple: the decoupling ratio over a light-cone plate family per delta.
Job prepare_decouple(Config& cfg) {
  DecouplingExperiment e;
  e.grid = read_grid(cfg, 256, 8.0);
  e.lambda = cfg.get_double("scales.lambda", e.lambda);
  e.p = cfg.get_double("scales.p", e.p);
  e.deltas = cfg.get_doubles("scales.deltas", e.deltas);
  e.trials = cfg.get_int("trials", e.trials);
  e.seed = cfg.get_seed("seed", 1);
  try {
    e.mode = coefficient_mode_from_string(cfg.get_string("options.mode", "all_ones"));
  } catch (const Error& err) {
    cfg.fail("options.mode", err.what());
  }
  const std::string packets = cfg.get_string("options.packets", "aligned");
  require(cfg, packets == "aligned" || packets == "random_phase", "options.packets", "expected aligned or random_phase");
  e.packets = packets == "aligned" ? PacketMode::aligned : PacketMode::random_phase;
  e.stride = cfg.get_int("options.stride", 1);
  e.require_resolved = cfg.get_bool("options.require_resolved", true);
  const double band = cfg.get_double("options.band", 4.0);
  require(cfg, e.p == 2 || e.p == 4 || e.p == 6 || e.p == 8, "scales.p", "decoupling runs use p in {2, 4, 6, 8}");
  require(cfg, e.lambda > 0, "scales.lambda", "must be positive");
  for (double d : e.deltas) require(cfg, d > 0 && d < 1, "scales.deltas", "entries must be in (0, 1)");
  require(cfg, e.trials >= 1, "trials", "must be positive");
  require(cfg, e.stride >= 1, "options.stride", "must be positive");
  return [=] {
    ExperimentOutput out;
    const DecouplingReport r = decoupling_ratio(e);
    out.results = r.to_json();
    out.csv = r.to_csv();
    if (r.deltas.size() >= 2) out.checks.push_back(check_le("normalized_band_ratio", r.band_ratio, band));
    out.checks.push_back(check_true("plates_resolved", r.resolved));
    out.plots.push_back({"decoupling", "decoupling ratio", "delta", "max D", true, true,
                         {{"max D", r.deltas, r.max_D}, {"normalized", r.deltas, r.normalized}}});
    return out;
  };
}

ParamCutoff read_chi(Config& cfg, double center, double halfwidth) {
  ParamCutoff chi{cfg.get_double("options.chi_center", center), cfg.get_double("options.chi_halfwidth", halfwidth)};
  require(cfg, chi.halfwidth > 0, "options.chi_halfwidth", "must be positive");
  return chi;
}

// sobolev: per-band ratio of the weighted fixed-time average.
Job prepare_sobolev(Config& cfg) {
  const Curve c = cfg.get_curve("curve", "helix(1, 1)");
  SobolevSweepOptions o;
  o.grid = read_grid(cfg, o.grid.n(), o.grid.L());
  o.p = cfg.get_double("scales.p", o.p);
  o.alpha = cfg.get_double("scales.alpha", 1.0 / o.p);
  o.ks = cfg.get_ints("scales.ks", o.ks);
  o.chi = read_chi(cfg, o.chi.center, o.chi.halfwidth);
  o.random_seeds = cfg.get_int("options.random_seeds", o.random_seeds);
  o.oversample = cfg.get_int("options.oversample", o.oversample);
  o.seed = cfg.get_seed("seed", 1);
  const double max_slope = cfg.get_double("options.max_slope", 0.05);
  require(cfg, o.p >= 1, "scales.p", "needs p >= 1");
  require(cfg, o.ks.size() >= 2, "scales.ks", "needs at least two bands");
  for (int k : o.ks)
    require(cfg, k >= 0 && std::ldexp(1.0, k + 1) <= o.grid.nyquist(), "scales.ks", "band 2^{k+1} must stay below Nyquist");
  require(cfg, o.random_seeds >= 0, "options.random_seeds", "must be non-negative");
  require(cfg, o.oversample >= 1, "options.oversample", "must be positive");
  const bool asserted = std::abs(o.alpha - 1.0 / o.p) < 1e-12;
  return [=] {
    ExperimentOutput out;
    const SobolevSweep s = sobolev_sweep(c, o);
    out.results = s.to_json();
    out.csv = s.to_csv();
    if (asserted) out.checks.push_back(check_le("slope", s.slope, max_slope));
    std::vector<double> K;
    for (int k : s.ks) K.push_back(std::ldexp(1.0, k));
    out.plots.push_back({"sobolev", "weighted ratio per band", "2^k", "sup ratio", true, true, {{"sup ratio", K, s.sup_ratio}}});
    return out;
  };
}

// smoothing: space-time weighted ratio (report only).
Job prepare_smoothing(Config& cfg) {
  const Curve c = cfg.get_curve("curve", "helix(1, 1)");
  LocalSmoothingOptions o;
  o.grid = read_grid(cfg, o.grid.n(), o.grid.L());
  o.p = cfg.get_double("scales.p", o.p);
  o.alphas = cfg.get_doubles("scales.alphas", o.alphas);
  o.ks = cfg.get_ints("scales.ks", o.ks);
  o.chi = read_chi(cfg, o.chi.center, o.chi.halfwidth);
  o.t_oversample = cfg.get_int("options.t_oversample", o.t_oversample);
  o.seed = cfg.get_seed("seed", 1);
  require(cfg, o.p >= 1, "scales.p", "needs p >= 1");
  require(cfg, o.t_oversample >= 1, "options.t_oversample", "must be positive");
  for (int k : o.ks)
    require(cfg, k >= 0 && std::ldexp(1.0, k + 1) <= o.grid.nyquist(), "scales.ks", "band 2^{k+1} must stay below Nyquist");
  return [=] {
    ExperimentOutput out;
    const LocalSmoothingReport r = local_smoothing_probe(c, o);
    out.results = r.to_json();
    out.csv = r.to_csv();
    PlotSpec plot{"smoothing", "space-time ratio per band", "2^k", "ratio", true, true, {}};
    for (double a : r.alphas) {
      Series s{"alpha " + std::to_string(a), {}, {}};
      for (const auto& row : r.rows)
        if (row.alpha == a) s.x.push_back(std::ldexp(1.0, row.k)), s.y.push_back(row.ratio);
      plot.series.push_back(s);
    }
    out.plots.push_back(plot);
    return out;
  };
}

// maximal: sampled sup over t of the averages (report only).
Job prepare_maximal(Config& cfg) {
  const Curve c = cfg.get_curve("curve", "helix(1, 1)");
  MaximalReportOptions o;
  o.grid = read_grid(cfg, o.grid.n(), o.grid.L());
  o.k = cfg.get_int("scales.k", o.k);
  o.ps = cfg.get_doubles("scales.ps", o.ps);
  o.chi = read_chi(cfg, o.chi.center, o.chi.halfwidth);
  const int nt = cfg.get_int("options.t_samples", 65);
  o.seed = cfg.get_seed("seed", 1);
  require(cfg, nt >= 1, "options.t_samples", "must be positive");
  require(cfg, o.k >= 0 && std::ldexp(1.0, o.k + 1) <= o.grid.nyquist(), "scales.k", "band 2^{k+1} must stay below Nyquist");
  for (double p : o.ps) require(cfg, p >= 1, "scales.ps", "entries must be >= 1");
  o.ts = default_t_samples(nt);
  return [=] {
    ExperimentOutput out;
    const MaximalReport r = maximal_report(c, o);
    out.results = r.to_json();
    out.csv = r.to_csv();
    out.plots.push_back({"maximal", "sampled maximal ratio", "p", "ratio", true, false, {{"ratio", r.ps, r.ratios}}});
    return out;
  };
}

// helix2: sup over the two-parameter helix family (report only).
Job prepare_helix2(Config& cfg) {
  const Grid3 g = read_grid(cfg, 32, 8.0);
  const int k = cfg.get_int("scales.k", 2);
  const double p = cfg.get_double("scales.p", 80.0);
  const double alpha = cfg.get_double("scales.alpha", 1.0 / 240 + 0.01);
  const int per_axis = cfg.get_int("options.ab_per_axis", 4);
  const ParamCutoff chi = read_chi(cfg, 0.0, 1.0 / 16);
  const std::uint64_t seed = cfg.get_seed("seed", 1);
  require(cfg, k >= 0 && std::ldexp(1.0, k + 1) <= g.nyquist(), "scales.k", "band 2^{k+1} must stay below Nyquist");
  require(cfg, p >= 1, "scales.p", "needs p >= 1");
  require(cfg, per_axis >= 1, "options.ab_per_axis", "must be positive");
  return [=] {
    ExperimentOutput out;
    const TwoParamReport r = two_param_report(g, k, p, alpha, per_axis, chi, seed);
    out.results = r.to_json();
    out.csv = "p,alpha,samples,ratio\n" + std::to_string(r.p) + "," + std::to_string(r.alpha) + "," +
              std::to_string(r.samples) + "," + std::to_string(r.ratio) + "\n";
    return out;
  };
}

std::string utc_stamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> list = {
      {"geometry", "curve, options.samples, options.s0, options.n_max",
       "Frenet frame, finite type, binormal generator identity", true, prepare_geometry},
      {"plates", "options.generator, scales.{delta, lambda, theta, sigma, A, deltas}, options.samples, seed",
       "plate families, rescaling containment, osculating circles", true, prepare_plates},
      {"decompose", "curve, scales.{ks, l}, options.{kinds, samples, A0, reconstruction_points}, seed",
       "symbol decomposition and van der Corput decay", true, prepare_decompose},
      {"umu", "curve, scales.{r0, k, M}, options.{samples, s_mu}, seed",
       "second-order approximation of U_mu", true, prepare_umu},
      {"census", "curve, scales.{k, r0, r1, M}, options.samples, seed",
       "support multiplicity and plate membership of the n-level pieces", true, prepare_census},
      {"schedule", "scales.{p, eps, k, eps0, M, d}",
       "exponent and scale schedules of the induction", true, prepare_schedule},
      {"decouple", "grid.{n, L}, scales.{lambda, p, deltas}, trials, seed, options.{mode, packets, stride, require_resolved, band}",
       "decoupling for the light cone", true, prepare_decouple},
      {"sobolev", "curve, grid.{n, L}, scales.{p, alpha, ks}, options.{chi_center, chi_halfwidth, random_seeds, oversample, max_slope}, seed",
       "fixed-time Sobolev regularity of the averages", true, prepare_sobolev},
      {"smoothing", "curve, grid.{n, L}, scales.{p, alphas, ks}, options.{chi_center, chi_halfwidth, t_oversample}, seed",
       "local smoothing in space-time", false, prepare_smoothing},
      {"maximal", "curve, grid.{n, L}, scales.{k, ps}, options.{chi_center, chi_halfwidth, t_samples}, seed",
       "maximal averages over dilations", false, prepare_maximal},
      {"helix2", "grid.{n, L}, scales.{k, p, alpha}, options.{ab_per_axis, chi_center, chi_halfwidth}, seed",
       "maximal averages over the two-parameter helix family", false, prepare_helix2},
  };
  return list;
}

const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  std::string names;
  for (const auto& e : experiments()) names += (names.empty() ? "" : ", ") + e.name;
  throw ConfigError("unknown experiment '" + name + "' (one of " + names + ")");
}

std::string list_experiments() {
  std::ostringstream o;
  for (const auto& e : experiments()) {
    o << e.name << "  " << e.topic << (e.asserted ? "" : " (report only)") << '\n';
    o << "    keys: experiment, " << e.keys << '\n';
  }
  return o.str();
}

RunResult run_config(Config& cfg, std::ostream& log) {
  const std::string name = cfg.require_string("experiment");
  const ExperimentInfo* info = nullptr;
  try {
    info = &find_experiment(name);
  } catch (const ConfigError& e) {
    cfg.fail("experiment", e.what());
  }
  Job job = info->prepare(cfg);
  const char* env = std::getenv("OUTPUT_DIR");
  const std::optional<std::string> dir = cfg.take("output.dir");
  const std::string root = env && *env ? env : dir.value_or("out");
  cfg.finish();

  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentOutput out = job();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunResult res;
  res.report = build_report(name, cfg.echo_json(), out);
  const nlohmann::json meta = {{"stamp", utc_stamp()}, {"runtime_seconds", seconds}, {"config_path", cfg.origin()}};
  res.dir = write_report(root, name, res.report, out, cfg.echo(), meta);
  res.exit_code = out.passed() ? 0 : 2;
  for (const auto& c : out.checks)
    log << describe(c) << '\n';
  log << "wrote " << res.dir.string() << '\n';
  return res;
}

int run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    Config cfg = Config::load(config_path);
    return run_config(cfg, out).exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace conewolff::cli
