#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fasep/lattice.hpp"
#include "fasep/rational.hpp"

namespace fasep {

// Record gaps n_k of a frozen ring configuration, in cyclic record order:
// consecutive records satisfy q_{k+1} - q_k = 2 n_k + 1 and sum(2n_k+1) = L.
struct GapSequence {
  std::vector<std::int64_t> gaps;
};

// Conditional weight, given a record at site 0, of the frozen ring
// configuration whose record gaps are `gaps`:
//   L * prod(c_{n_i}) / ((L-2N) * binom(L, N)).
// Exact rational. Throws InconsistentGaps unless the gaps form L-2N
// non-negative entries with sum(2n_i+1) = L.
Rational ring_final_weight(const GapSequence& gaps, std::int64_t L, std::int64_t N);

// Frozen ring configuration with records at 0 = q_0 < q_1 < ... determined by
// the gap sequence; segment k is (10)^{n_k} 0 on sites q_k+1 .. q_{k+1}.
LatticeConfig config_from_gaps(const GapSequence& gaps, std::int64_t L);

using RingMeasure = std::map<std::string, Rational>;  // "ring:..." -> weight

// Conditional final measure given a record at site 0 (weights sum to 1).
RingMeasure ring_final_conditional(std::int64_t L, std::int64_t N);

// Unconditional final measure of the uniform initial ensemble: the average of
// the conditional measure over all L rotations. Sums to 1 exactly.
RingMeasure ring_final_measure(std::int64_t L, std::int64_t N);

}  // namespace fasep
