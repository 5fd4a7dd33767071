#pragma once

#include <cstdint>
#include <vector>

#include "fasep/lattice.hpp"

namespace fasep {

// Walk encoding of a configuration: heights[k] is the profile value after the
// first k sites of the range starting at `base`, heights[0] = 2J, and
// heights[k] - heights[k-1] = +1 over a hole and -1 over a particle.
struct HeightProfile {
  std::int64_t base = 0;
  std::vector<std::int64_t> heights;  // size L + 1
};

HeightProfile height_profile(const LatticeConfig& cfg, std::int64_t bond_current);

// Sites whose profile value strictly exceeds every earlier one. On a ring
// with N < L/2 these are the L-2N record sites of the periodic extension
// within one period; on a window, records of the extension by empty padding
// on the left. Invariant under the totally asymmetric dynamics.
struct RecordSet {
  std::vector<std::int64_t> sites;
};

// Throws NoRecords for a ring with N >= L/2.
RecordSet record_set(const LatticeConfig& cfg);

// Deterministic final state of the totally asymmetric dynamics (p = 1).
// Between consecutive records q, q' the result is (10)^((q'-q-1)/2) 0 on
// sites q+1..q'. Rings are fully determined by their records; on a window the
// wall-bounded stretch after the last record is the absorbed fixpoint of the
// 110 -> 101 rewrite (enabled rewrites never overlap, so the fixpoint is
// order independent).
LatticeConfig final_config_tasep(const LatticeConfig& cfg);

}  // namespace fasep
