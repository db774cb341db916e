#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conewolff/fields.hpp"
#include "conewolff/plates.hpp"

namespace conewolff {

// Lattice points of a plate with their bump values.
struct PlateLattice {
  std::vector<std::size_t> slots;
  std::vector<double> bump;
  // Per plate coordinate, how many of the four quarters of the side hold a lattice point.
  std::array<int, 3> quarters_filled{0, 0, 0};
  // Short side 2 lambda delta / |u3| over the lattice spacing.
  double spacings_across_short_side = 0.0;
  bool resolved = false;  // every quarter of every side is hit
};

PlateLattice plate_lattice(const Grid3& g, const Plate& p);

// Bump times seeded unit phases on the plate's lattice points. Throws PlateUnresolved.
Field3 random_plate_field(const Grid3& g, const Plate& p, std::uint64_t seed);

// Full turn of the light cone: unit-circle generator, N = ceil(2 pi / sqrt(delta)) anchors 2 pi i / N.
PlateFamily light_cone_family(double delta, double lambda);

enum class CoefficientMode { random_sign, all_ones };
enum class PacketMode { aligned, random_phase };
std::string to_string(CoefficientMode m);
CoefficientMode coefficient_mode_from_string(const std::string& s);

struct DecouplingFamilyResult {
  int plates = 0;
  int unresolved = 0;  // plates missing a quarter of a side (only when not required)
  bool disjoint = false;
  double denominator = 0.0;  // (sum ||f_R||_p^p)^{1/p}
  std::vector<double> ratios;  // one per coefficient vector
};

// D = ||sum c_R f_R||_p / (sum ||c_R f_R||_p^p)^{1/p} for each coefficient vector.
DecouplingFamilyResult decoupling_family(const Grid3& g, const std::vector<Plate>& plates, double p,
                                         const std::vector<std::vector<cplx>>& coefficients,
                                         PacketMode packets = PacketMode::aligned, std::uint64_t seed = 1,
                                         bool require_resolved = true);

struct DecouplingExperiment {
  Grid3 grid{256, 8.0};
  double lambda = 64.0;
  double p = 8.0;
  std::vector<double> deltas{0x1p-4, 0x1p-5, 0x1p-6, 0x1p-7};
  int trials = 8;
  CoefficientMode mode = CoefficientMode::all_ones;
  PacketMode packets = PacketMode::aligned;
  int stride = 1;  // keep every stride-th plate of the family
  std::uint64_t seed = 1;
  bool require_resolved = true;  // false: count unresolved plates instead of throwing
};

struct DecouplingRow {
  double delta = 0.0;
  int trial = 0;
  int plates = 0;
  double D = 0.0;
};

struct DecouplingReport {
  double p = 0.0;
  std::string mode;
  std::vector<DecouplingRow> rows;
  std::vector<double> deltas, max_D, normalized;  // normalized = max_D * delta^{1/2 - 2/p}
  std::vector<double> min_short_side_spacings;
  std::vector<int> unresolved;
  std::vector<bool> disjoint;
  double slope = 0.0;        // log2 max_D against log2 delta
  double band_ratio = 0.0;   // max / min of normalized
  bool resolved = false;  // no unresolved plate at any delta
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Throws PlateUnresolved when a plate's lattice misses a quarter of a side; p must be >= 2.
DecouplingReport decoupling_ratio(const DecouplingExperiment& exp);

}  // namespace conewolff
