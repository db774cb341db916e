#include "conewolff/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conewolff/errors.hpp"
#include "conewolff/fit.hpp"
#include "conewolff/rng.hpp"
#include "fft.hpp"

namespace conewolff {

PlateLattice plate_lattice(const Grid3& g, const Plate& p) {
  PlateLattice out;
  const Plate unit = p.extended(1.0);
  Vec3 lo = Vec3::Constant(INFINITY), hi = Vec3::Constant(-INFINITY);
  for (const Vec3& c : unit.corners()) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  const int half = g.n() / 2;
  Eigen::Vector3i mlo, mhi;
  for (int d = 0; d < 3; ++d) {
    mlo(d) = static_cast<int>(std::ceil(lo(d) / g.dxi()));
    mhi(d) = static_cast<int>(std::floor(hi(d) / g.dxi()));
    if (mlo(d) < -half + 1 || mhi(d) > half - 1) return out;  // does not fit below the Nyquist planes
  }
  out.spacings_across_short_side = 2.0 * p.lambda * p.delta / p.u3.norm() / g.dxi();
  const BumpFunction bump{unit};
  const Mat3 Y = unit.coordinate_map();
  std::array<std::array<bool, 4>, 3> hit{};
  for (int m0 = mlo(0); m0 <= mhi(0); ++m0)
    for (int m1 = mlo(1); m1 <= mhi(1); ++m1)
      for (int m2 = mlo(2); m2 <= mhi(2); ++m2) {
        const Vec3 xi = g.dxi() * Vec3(m0, m1, m2);
        const double b = bump(xi);
        if (b <= 0.0) continue;
        const Vec3 y = Y * xi;
        const Vec3 t((y(0) / p.lambda - 1.25) / 0.75, y(1) / (p.lambda * std::sqrt(p.delta)), y(2) / (p.lambda * p.delta));
        for (int d = 0; d < 3; ++d) hit[d][std::clamp(static_cast<int>(std::floor((t(d) + 1.0) * 2.0)), 0, 3)] = true;
        out.slots.push_back(g.index(g.slot(m0), g.slot(m1), g.slot(m2)));
        out.bump.push_back(b);
      }
  out.resolved = true;
  for (int d = 0; d < 3; ++d) {
    out.quarters_filled[d] = static_cast<int>(std::count(hit[d].begin(), hit[d].end(), true));
    if (out.quarters_filled[d] < 4) out.resolved = false;
  }
  return out;
}

namespace {

PlateLattice resolved_lattice(const Grid3& g, const Plate& p) {
  PlateLattice pl = plate_lattice(g, p);
  if (!pl.resolved) {
    std::ostringstream o;
    o << "plate at alpha " << p.alpha << " (delta " << p.delta << ", lambda " << p.lambda << ") hits quarters "
      << pl.quarters_filled[0] << "/" << pl.quarters_filled[1] << "/" << pl.quarters_filled[2]
      << (pl.slots.empty() ? " or leaves the lattice" : "");
    throw PlateUnresolved(o.str());
  }
  return pl;
}

cplx packet_phase(PacketMode m, std::uint64_t seed, std::size_t plate, std::size_t slot) {
  if (m == PacketMode::aligned) return 1.0;
  return std::polar(1.0, 2.0 * M_PI * CounterRng(seed, plate).uniform(slot));
}

}  // namespace

Field3 random_plate_field(const Grid3& g, const Plate& p, std::uint64_t seed) {
  const PlateLattice pl = resolved_lattice(g, p);
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < pl.slots.size(); ++i)
    v[pl.slots[i]] = pl.bump[i] * packet_phase(PacketMode::random_phase, seed, 0, pl.slots[i]);
  return Field3(g, std::move(v), Space::frequency);
}

PlateFamily light_cone_family(double delta, double lambda) {
  static const GeneratorCurve circle = unit_circle_generator();
  const int N = static_cast<int>(std::ceil(2.0 * M_PI / std::sqrt(delta) - 1e-9));
  const double sigma = 2.0 * M_PI / N;
  return make_family(circle, delta, lambda, (N - 1) * sigma, sigma, 0.0);
}

std::string to_string(CoefficientMode m) { return m == CoefficientMode::all_ones ? "all_ones" : "random_sign"; }

CoefficientMode coefficient_mode_from_string(const std::string& s) {
  if (s == "all_ones") return CoefficientMode::all_ones;
  if (s == "random_sign") return CoefficientMode::random_sign;
  throw ConfigError("unknown coefficient mode '" + s + "'");
}

DecouplingFamilyResult decoupling_family(const Grid3& g, const std::vector<Plate>& plates, double p,
                                         const std::vector<std::vector<cplx>>& coefficients, PacketMode packets,
                                         std::uint64_t seed, bool require_resolved) {
  if (!(p >= 2.0)) throw DomainError("decoupling needs p >= 2");
  if (plates.empty()) throw EmptyFamily("no plates");
  DecouplingFamilyResult res;
  res.plates = static_cast<int>(plates.size());
  std::vector<PlateLattice> lat;
  for (const Plate& pl : plates) {
    if (require_resolved) {
      lat.push_back(resolved_lattice(g, pl));
      continue;
    }
    lat.push_back(plate_lattice(g, pl));
    if (!lat.back().resolved) ++res.unresolved;
    if (lat.back().slots.empty()) throw PlateUnresolved("plate leaves the lattice");
  }

  std::vector<unsigned char> used(g.size(), 0);
  res.disjoint = true;
  for (const auto& pl : lat)
    for (std::size_t s : pl.slots) {
      if (used[s]) res.disjoint = false;
      used[s] = 1;
    }
  used.clear();
  used.shrink_to_fit();

  const int n = g.n();
  const double cell = std::pow(g.dx(), 3);
  const double inv_vol = 1.0 / g.volume();
  std::vector<cplx> buf(g.size());
  auto norm_of_sum = [&](const std::vector<cplx>& c) {
    std::fill(buf.begin(), buf.end(), cplx(0.0));
    for (std::size_t r = 0; r < lat.size(); ++r) {
      if (c[r] == 0.0) continue;
      for (std::size_t i = 0; i < lat[r].slots.size(); ++i)
        buf[lat[r].slots[i]] += c[r] * lat[r].bump[i] * packet_phase(packets, seed, r, lat[r].slots[i]);
    }
    detail::fft_inplace(buf.data(), {n, n, n}, +1);
    for (auto& z : buf) z *= inv_vol;
    return detail::lp_norm_values(buf, p, cell);
  };

  // ||f_R||_p for unit coefficients; the denominator scales by |c_R|
  std::vector<double> single(lat.size());
  for (std::size_t r = 0; r < lat.size(); ++r) {
    std::vector<cplx> e(lat.size(), 0.0);
    e[r] = 1.0;
    single[r] = norm_of_sum(e);
  }
  std::vector<std::vector<cplx>> seen;
  std::vector<double> seen_num;
  for (const auto& c : coefficients) {
    if (c.size() != lat.size()) throw DomainError("one coefficient per plate");
    double den = 0.0;
    for (std::size_t r = 0; r < lat.size(); ++r) den += std::pow(std::abs(c[r]) * single[r], p);
    den = std::pow(den, 1.0 / p);
    double num = -1.0;
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (seen[i] == c) num = seen_num[i];
    if (num < 0.0) {
      num = norm_of_sum(c);
      seen.push_back(c);
      seen_num.push_back(num);
    }
    res.denominator = den;
    res.ratios.push_back(num / den);
  }
  return res;
}

nlohmann::json DecouplingReport::to_json() const {
  nlohmann::json rj = nlohmann::json::array();
  for (const auto& r : rows) rj.push_back({{"delta", r.delta}, {"trial", r.trial}, {"plates", r.plates}, {"D", r.D}});
  return {{"p", p},
          {"mode", mode},
          {"deltas", deltas},
          {"max_D", max_D},
          {"normalized", normalized},
          {"disjoint", disjoint},
          {"min_short_side_spacings", min_short_side_spacings},
          {"unresolved", unresolved},
          {"slope", slope},
          {"band_ratio", band_ratio},
          {"resolved", resolved},
          {"rows", rj}};
}

std::string DecouplingReport::to_csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "delta,trial,plates,D\n";
  for (const auto& r : rows) o << r.delta << ',' << r.trial << ',' << r.plates << ',' << r.D << '\n';
  return o.str();
}

DecouplingReport decoupling_ratio(const DecouplingExperiment& exp) {
  if (exp.stride < 1 || exp.trials < 1) throw DomainError("stride and trials must be positive");
  DecouplingReport rep;
  rep.p = exp.p;
  rep.mode = to_string(exp.mode);
  rep.deltas = exp.deltas;
  for (double delta : exp.deltas) {
    const PlateFamily fam = light_cone_family(delta, exp.lambda);
    std::vector<Plate> plates;
    for (std::size_t i = 0; i < fam.plates.size(); i += static_cast<std::size_t>(exp.stride)) plates.push_back(fam.plates[i]);
    double min_sp = INFINITY;
    for (const Plate& pl : plates)
      min_sp = std::min(min_sp, 2.0 * pl.lambda * pl.delta / pl.u3.norm() / exp.grid.dxi());
    std::vector<std::vector<cplx>> coeffs;
    for (int t = 0; t < exp.trials; ++t) {
      std::vector<cplx> c(plates.size(), 1.0);
      if (exp.mode == CoefficientMode::random_sign) {
        const CounterRng rng(exp.seed, static_cast<std::uint64_t>(t) + 1);
        for (std::size_t r = 0; r < c.size(); ++r) c[r] = static_cast<double>(rng.sign(r));
      }
      coeffs.push_back(std::move(c));
    }
    const DecouplingFamilyResult fr = decoupling_family(exp.grid, plates, exp.p, coeffs, exp.packets, exp.seed, exp.require_resolved);
    double mx = 0.0;
    for (int t = 0; t < exp.trials; ++t) {
      rep.rows.push_back({delta, t, fr.plates, fr.ratios[static_cast<std::size_t>(t)]});
      mx = std::max(mx, fr.ratios[static_cast<std::size_t>(t)]);
    }
    rep.max_D.push_back(mx);
    rep.normalized.push_back(mx * std::pow(delta, 0.5 - 2.0 / exp.p));
    rep.disjoint.push_back(fr.disjoint);
    rep.unresolved.push_back(fr.unresolved);
    rep.min_short_side_spacings.push_back(min_sp);
  }
  rep.resolved = std::all_of(rep.unresolved.begin(), rep.unresolved.end(), [](int u) { return u == 0; });
  if (rep.deltas.size() >= 2) rep.slope = fit_log2(rep.deltas, rep.max_D, true).slope;
  const auto [lo, hi] = std::minmax_element(rep.normalized.begin(), rep.normalized.end());
  rep.band_ratio = *hi / *lo;
  return rep;
}

}  // namespace conewolff
