#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fasep/errors.hpp"
#include "fasep/rational.hpp"

namespace fasep {

enum class Topology { Ring, ClosedWindow };

// Occupancy configuration on a ring of L sites or a finite line window with
// closed ends. On a ring all site indices wrap mod L; on a window, sites
// outside [0, L) read as permanently empty and no exchange crosses an end.
class LatticeConfig {
 public:
  LatticeConfig() = default;
  LatticeConfig(Topology topology, std::vector<std::uint8_t> sites);

  static LatticeConfig ring(std::string_view bits);
  static LatticeConfig window(std::string_view bits);

  // Text form used in every file and CLI argument: "ring:10100" or
  // "window:10100", site 0 first.
  static LatticeConfig parse(std::string_view text);
  std::string to_string() const;

  Topology topology() const { return topology_; }
  std::int64_t size() const { return static_cast<std::int64_t>(sites_.size()); }

  // Occupancy with topology semantics (wrap vs. empty padding).
  bool occupied(std::int64_t i) const {
    const auto L = size();
    if (topology_ == Topology::Ring) {
      i %= L;
      if (i < 0) i += L;
      return sites_[static_cast<std::size_t>(i)] != 0;
    }
    if (i < 0 || i >= L) return false;
    return sites_[static_cast<std::size_t>(i)] != 0;
  }

  void set(std::int64_t i, bool value);
  LatticeConfig rotated(std::int64_t shift) const;  // ring only; site i <- site i-shift

  const std::vector<std::uint8_t>& sites() const { return sites_; }

  bool operator==(const LatticeConfig&) const = default;
  auto operator<=>(const LatticeConfig&) const = default;

 private:
  Topology topology_ = Topology::Ring;
  std::vector<std::uint8_t> sites_;
};

std::int64_t particle_count(const LatticeConfig& cfg);

// No two adjacent occupied sites (absorbing set of the dynamics).
bool is_frozen(const LatticeConfig& cfg);

// No two adjacent empty sites (the high-density invariant set).
bool is_no_adjacent_holes(const LatticeConfig& cfg);

// Maximal particle block delimited by adjacent empty pairs. Sites
// first..last, taken mod L on a ring; last may exceed L-1 when the block
// wraps. A block begins and ends with a particle and contains no 00 pair.
struct Component {
  std::int64_t first = 0;
  std::int64_t last = 0;
  bool operator==(const Component&) const = default;
};

struct ComponentList {
  std::vector<Component> intervals;
  std::int64_t count() const {
    return static_cast<std::int64_t>(intervals.size());
  }
};

// Components in increasing order of first site. A ring with particles but no
// 00 pair is a single component spanning all particles.
ComponentList components(const LatticeConfig& cfg);

struct DensityValue {
  std::int64_t particles = 0;
  std::int64_t sites = 0;
  Rational ratio;
};

DensityValue density(const LatticeConfig& cfg);

}  // namespace fasep
