#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fasep/kmc.hpp"
#include "fasep/lattice.hpp"

namespace fasep::coupling {

// HighDensity: 1 -> 1, 0 -> 10 (image has no adjacent empty pair).
// LowDensity:  0 -> 0, 1 -> 01 (image has no adjacent occupied pair).
enum class SubstitutionMap { HighDensity, LowDensity };

// image_start[i] is the image site where the block substituted for source
// site i begins; consecutive starts differ by the block length, 2 - src(i)
// for HighDensity and 1 + src(i) for LowDensity. Anchored so source site 0's
// block begins at image site 0.
struct SiteCorrespondence {
  std::vector<std::int64_t> image_start;
};

std::pair<LatticeConfig, SiteCorrespondence> apply_substitution(
    SubstitutionMap map, const LatticeConfig& src);

// Inverse of apply_substitution; `anchor` is the image site where the first
// block starts. Throws NotInImage when the image constraint fails (00 for
// HighDensity, 11 for LowDensity) and BadAnchor when the anchor site cannot
// start a block.
LatticeConfig invert_substitution(SubstitutionMap map, const LatticeConfig& img,
                                  std::int64_t anchor = 0);

// Sites occupied and immediately followed by another particle; these
// correspond to plain-exclusion particles under the HighDensity map.
std::vector<std::int64_t> true_particles(const LatticeConfig& cfg);

// Finite occupancy pattern with no adjacent empty pair (a G-cylinder).
struct CylinderPattern {
  std::vector<std::uint8_t> bits;
  static CylinderPattern parse(std::string_view text);  // "110", ...
  bool valid() const;
};

// Stationary weight of the pattern at density 1/2 < rho < 1:
//   (1-rho) ((1-rho)/rho)^(m-1-sum) ((2rho-1)/rho)^(2 sum + 1 - m - t1 - tm).
double cylinder_probability(const CylinderPattern& theta, double rho);

// cylinder_probability at rho = 1/(2 - asep_density): the image of the
// Bernoulli(asep_density) stationary state under the HighDensity map.
double mapped_measure_weight(const CylinderPattern& theta, double asep_density);

struct CoupledState {
  double time = 0.0;
  LatticeConfig asep;
  LatticeConfig fasep;
  std::vector<std::int64_t> asep_positions;  // by particle label
  std::vector<std::int64_t> true_positions;  // by particle label
  std::int64_t rotation_offset = 0;          // fasep = rotate(phi(asep), offset)
};

struct CoupledRunOptions {
  double t_end = 1.0;
  std::uint64_t check_every = 1;        // coupling invariant cadence (events)
  std::uint64_t offset_rescan_every = 64;  // recompute offset from scratch
  double snapshot_every = 0.0;          // 0 = initial and final only
  std::uint64_t max_events_hint = 0;    // stop after this many accepted events
};

struct CoupledRunResult {
  std::vector<CoupledState> snapshots;
  CoupledState final_state;
  std::uint64_t events = 0;          // accepted paired exchanges
  std::uint64_t invariant_checks = 0;
  std::uint64_t invariant_violations = 0;
};

// Two-process simulation on rings driven by shared per-particle clocks: at a
// right event of particle k the exclusion particle hops right when its right
// neighbor is empty, and the facilitated true particle with the same label
// exchanges with the 10 pair on its right; left events mirror. After every
// event the facilitated configuration is a rotation of the substituted
// exclusion configuration; the offset moves only when a particle crosses the
// exclusion ring's marked bond.
CoupledRunResult run_coupled(const LatticeConfig& asep0,
                             const kmc::RateParams& params, std::uint64_t seed,
                             const CoupledRunOptions& options);

}  // namespace fasep::coupling
