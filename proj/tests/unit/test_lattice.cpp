#include <doctest.h>

#include "fasep/lattice.hpp"
#include "fasep/rng.hpp"

using namespace fasep;

TEST_CASE("text encoding round trip") {
  const auto r = LatticeConfig::parse("ring:10100");
  CHECK(r.topology() == Topology::Ring);
  CHECK(r.size() == 5);
  CHECK(r.to_string() == "ring:10100");
  const auto w = LatticeConfig::parse("window:0011");
  CHECK(w.topology() == Topology::ClosedWindow);
  CHECK(w.to_string() == "window:0011");
  CHECK_THROWS_AS(LatticeConfig::parse("10100"), ParseError);
  CHECK_THROWS_AS(LatticeConfig::parse("ring:10x"), ParseError);
  CHECK_THROWS_AS(LatticeConfig::parse("ring:"), DomainError);
}

TEST_CASE("particle count") {
  CHECK(particle_count(LatticeConfig::ring("10100")) == 2);
  CHECK(particle_count(LatticeConfig::ring("00000")) == 0);
  CHECK(particle_count(LatticeConfig::ring("11111")) == 5);
}

TEST_CASE("frozen predicate") {
  CHECK(is_frozen(LatticeConfig::ring("10100")));
  CHECK_FALSE(is_frozen(LatticeConfig::ring("11000")));
  // wrap: sites 4 and 0 are adjacent
  CHECK_FALSE(is_frozen(LatticeConfig::ring("10101")));
  CHECK(is_frozen(LatticeConfig::window("10101")));
}

TEST_CASE("no adjacent holes predicate") {
  CHECK(is_no_adjacent_holes(LatticeConfig::ring("110110")));
  CHECK_FALSE(is_no_adjacent_holes(LatticeConfig::ring("110011")));
  // scan all five bonds by hand: 01101 has no 00 pair, wrap included
  CHECK(is_no_adjacent_holes(LatticeConfig::ring("01101")));
}

TEST_CASE("occupancy semantics outside a window") {
  const auto w = LatticeConfig::window("101");
  CHECK_FALSE(w.occupied(-1));
  CHECK_FALSE(w.occupied(3));
  const auto r = LatticeConfig::ring("101");
  CHECK(r.occupied(-1));  // site 2
  CHECK(r.occupied(3));   // site 0
}

TEST_CASE("components of hand-checked configurations") {
  // Blocks [1,2], [5,7], [10,11]; separators 00 at (3,4), (8,9), (12..15,0).
  const auto cfg = LatticeConfig::ring("0110010100110000");
  const auto comps = components(cfg);
  REQUIRE(comps.count() == 3);
  CHECK(comps.intervals[0] == Component{1, 2});
  CHECK(comps.intervals[1] == Component{5, 7});
  CHECK(comps.intervals[2] == Component{10, 11});

  CHECK(components(LatticeConfig::ring("00100")).count() == 1);
  // no 00 pair anywhere: whole-ring convention
  const auto whole = components(LatticeConfig::ring("10101"));
  REQUIRE(whole.count() == 1);
  CHECK(whole.intervals[0] == Component{0, 4});
}

TEST_CASE("components wrap across the ring seam") {
  // particles 3 and 0 separated by one hole through the seam
  const auto comps = components(LatticeConfig::ring("10010"));
  REQUIRE(comps.count() == 1);
  CHECK(comps.intervals[0].first == 3);
  CHECK(comps.intervals[0].last == 5);  // site 5 = site 0
}

TEST_CASE("component partition properties on random rings") {
  Rng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const auto L = 3 + static_cast<std::int64_t>(rng.below(14));
    std::vector<std::uint8_t> sites(static_cast<std::size_t>(L));
    for (auto& s : sites) s = rng.bernoulli(0.5) ? 1 : 0;
    const LatticeConfig cfg(Topology::Ring, sites);
    const auto comps = components(cfg);
    std::int64_t covered = 0;
    std::int64_t prev_first = -1;
    for (const auto& c : comps.intervals) {
      CHECK(c.first > prev_first);
      prev_first = c.first;
      CHECK(cfg.occupied(c.first));
      CHECK(cfg.occupied(c.last));
      for (std::int64_t i = c.first; i < c.last; ++i)
        CHECK((cfg.occupied(i) || cfg.occupied(i + 1)));  // no 00 inside
      for (std::int64_t i = c.first; i <= c.last; ++i)
        covered += cfg.occupied(i) ? 1 : 0;
    }
    CHECK(covered == particle_count(cfg));
  }
}

TEST_CASE("predicates are rotation invariant") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto L = 2 + static_cast<std::int64_t>(rng.below(12));
    std::vector<std::uint8_t> sites(static_cast<std::size_t>(L));
    for (auto& s : sites) s = rng.bernoulli(0.4) ? 1 : 0;
    const LatticeConfig cfg(Topology::Ring, sites);
    const auto shift = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(L)));
    const auto rot = cfg.rotated(shift);
    CHECK(is_frozen(cfg) == is_frozen(rot));
    CHECK(is_no_adjacent_holes(cfg) == is_no_adjacent_holes(rot));
    CHECK(components(cfg).count() == components(rot).count());
  }
}

TEST_CASE("frozen and hole-free together force the alternating ring") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto L = 2 + static_cast<std::int64_t>(rng.below(12));
    std::vector<std::uint8_t> sites(static_cast<std::size_t>(L));
    for (auto& s : sites) s = rng.bernoulli(0.5) ? 1 : 0;
    const LatticeConfig cfg(Topology::Ring, sites);
    if (is_frozen(cfg) && is_no_adjacent_holes(cfg)) {
      CHECK(L % 2 == 0);
      CHECK(2 * particle_count(cfg) == L);
      for (std::int64_t i = 0; i < L; ++i)
        CHECK(cfg.occupied(i) != cfg.occupied(i + 1));
    }
  }
}

TEST_CASE("density is an exact rational") {
  const auto d = density(LatticeConfig::ring("10100"));
  CHECK(d.particles == 2);
  CHECK(d.sites == 5);
  CHECK(d.ratio == make_rational(2, 5));
  CHECK(density(LatticeConfig::ring("11111")).ratio == 1);
  CHECK(density(LatticeConfig::ring("1010")).ratio == make_rational(1, 2));
}
