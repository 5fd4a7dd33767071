#pragma once

#include <cstdint>
#include <vector>

#include "fasep/lattice.hpp"
#include "fasep/rational.hpp"

namespace fasep::exact {

enum class Model { Fasep, Asep };

// Complete enumeration of ring configurations with N particles on L sites,
// ascending as L-bit integers with site i at bit i.
struct StateSpace {
  std::int64_t sites = 0;
  std::int64_t particles = 0;
  std::vector<std::uint32_t> states;

  static StateSpace enumerate(std::int64_t L, std::int64_t N,
                              std::int64_t site_cap = 16);

  std::int64_t size() const { return static_cast<std::int64_t>(states.size()); }
  std::int64_t index_of(std::uint32_t state) const;  // -1 if absent
  std::uint32_t rotate(std::uint32_t state, std::int64_t shift) const;
  LatticeConfig config(std::int64_t index) const;
  std::int64_t index_of_config(const LatticeConfig& cfg) const;
};

// Conservative Markov generator on a StateSpace. Off-diagonal entries only;
// the diagonal is minus the row sum, so rows sum to zero exactly.
struct GeneratorMatrix {
  std::int64_t n = 0;
  std::vector<std::vector<std::pair<std::int32_t, Rational>>> rows;

  Rational exit_rate(std::int64_t s) const;
  bool is_absorbing(std::int64_t s) const {
    return rows[static_cast<std::size_t>(s)].empty();
  }
};

// Exchange rates per the facilitated rule (or plain exclusion), with exact
// rational p. Zero-rate edges at p in {0, 1} are omitted, so absorbing
// structure is read off the sparsity pattern directly.
GeneratorMatrix build_generator(const StateSpace& space, const Rational& p,
                                Model model);

using ExactDistribution = std::vector<Rational>;

ExactDistribution uniform_distribution(const StateSpace& space);

// Exact hitting distribution over absorbing states from `initial`, via the
// embedded jump chain. Every state must be able to reach an absorbing state
// (NotAbsorbing otherwise). Rotation-invariant initials are lumped over
// rotation orbits before the linear solve; the result is identical to the
// raw solve because rotations commute with the dynamics.
ExactDistribution absorption_distribution(const ExactDistribution& initial,
                                          const GeneratorMatrix& gen,
                                          const StateSpace& space);

struct StationaryResult {
  enum class Kind { Unique, AbsorbingSet } kind = Kind::Unique;
  // Unique: the stationary distribution, null off the recurrent class.
  ExactDistribution distribution;
  // AbsorbingSet: every recurrent class was a single absorbing state.
  std::vector<std::int64_t> absorbing_states;
};

// Stationary distribution on the unique recurrent class (pi Q = 0 with exact
// rationals). When the chain has several recurrent classes they must all be
// absorbing states, and the set of those states is returned instead.
StationaryResult stationary_distribution(const GeneratorMatrix& gen,
                                         const StateSpace& space);

// initial * exp(t Q) by uniformization, truncated when the Poisson tail
// drops below 1e-14. State space capped at 10^4 (TooLarge).
std::vector<double> marginal_at_time(const std::vector<double>& initial,
                                     const GeneratorMatrix& gen, double t);

// Exact solves cap their dense elimination at this many unknowns (transient
// classes for absorption, recurrent states for stationarity) and throw
// TooLarge beyond it; the *_approx variants are the sparse floating
// fallbacks, converged to absolute tolerance 1e-12.
inline constexpr std::int64_t kExactSolveCap = 3000;

std::vector<double> absorption_distribution_approx(
    const std::vector<double>& initial, const GeneratorMatrix& gen);

// Requires a unique recurrent class (run the exact classifier on smaller
// spaces to find out); lazy power iteration on the uniformized chain.
std::vector<double> stationary_distribution_approx(const GeneratorMatrix& gen);

}  // namespace fasep::exact
