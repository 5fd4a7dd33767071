#include <doctest.h>

#include <cmath>

#include "fasep/coupling.hpp"
#include "fasep/rng.hpp"

using namespace fasep;
using namespace fasep::coupling;

TEST_CASE("high-density substitution on the worked example") {
  // source window 011001 maps to 101110101; start sites advance by the block
  // length 2 - src(i)
  const auto [img, corr] =
      apply_substitution(SubstitutionMap::HighDensity,
                         LatticeConfig::window("011001"));
  CHECK(img == LatticeConfig::window("101110101"));
  REQUIRE(corr.image_start.size() == 6);
  const std::vector<std::int64_t> expected{0, 2, 3, 4, 6, 8};
  CHECK(corr.image_start == expected);
  CHECK(is_no_adjacent_holes(img));
}

TEST_CASE("substitution fixed points and the low-density map") {
  const auto [ones, c1] =
      apply_substitution(SubstitutionMap::HighDensity, LatticeConfig::ring("111"));
  CHECK(ones == LatticeConfig::ring("111"));
  CHECK(c1.image_start == std::vector<std::int64_t>{0, 1, 2});

  const auto [low, c2] =
      apply_substitution(SubstitutionMap::LowDensity, LatticeConfig::window("11"));
  CHECK(low == LatticeConfig::window("0101"));
  CHECK(is_frozen(low));
}

TEST_CASE("substitution length bookkeeping on rings") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto l_hat = 2 + static_cast<std::int64_t>(rng.below(10));
    std::vector<std::uint8_t> sites(static_cast<std::size_t>(l_hat));
    for (auto& s : sites) s = rng.bernoulli(0.5) ? 1 : 0;
    const LatticeConfig src(Topology::Ring, sites);
    const auto n_hat = particle_count(src);
    const auto [img, corr] = apply_substitution(SubstitutionMap::HighDensity, src);
    CHECK(img.size() == 2 * l_hat - n_hat);
    CHECK(particle_count(img) == l_hat);
    if (n_hat < l_hat) CHECK(is_no_adjacent_holes(img));
    for (std::int64_t i = 0; i + 1 < l_hat; ++i)
      CHECK(corr.image_start[static_cast<std::size_t>(i + 1)] -
                corr.image_start[static_cast<std::size_t>(i)] ==
            2 - (src.occupied(i) ? 1 : 0));
  }
}

TEST_CASE("substitutions invert exactly") {
  Rng rng(6);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto L = 1 + static_cast<std::int64_t>(rng.below(12));
    std::vector<std::uint8_t> sites(static_cast<std::size_t>(L));
    for (auto& s : sites) s = rng.bernoulli(0.5) ? 1 : 0;
    const auto topo = rng.bernoulli(0.5) ? Topology::Ring : Topology::ClosedWindow;
    const LatticeConfig src(topo, sites);
    for (const auto map :
         {SubstitutionMap::HighDensity, SubstitutionMap::LowDensity}) {
      const auto img = apply_substitution(map, src).first;
      CHECK(invert_substitution(map, img) == src);
    }
  }
}

TEST_CASE("inversion rejects images off the substitution range") {
  CHECK_THROWS_AS(invert_substitution(SubstitutionMap::HighDensity,
                                      LatticeConfig::ring("1001")),
                  NotInImage);
  CHECK_THROWS_AS(invert_substitution(SubstitutionMap::HighDensity,
                                      LatticeConfig::ring("0110"), 1),
                  NotInImage);  // block straddles the anchor
  CHECK_THROWS_AS(invert_substitution(SubstitutionMap::HighDensity,
                                      LatticeConfig::ring("1010"), 1),
                  BadAnchor);
  CHECK_THROWS_AS(invert_substitution(SubstitutionMap::LowDensity,
                                      LatticeConfig::ring("0110")),
                  NotInImage);
  CHECK(invert_substitution(SubstitutionMap::HighDensity,
                            LatticeConfig::ring("111111")) ==
        LatticeConfig::ring("111111"));
}

TEST_CASE("true particles") {
  CHECK(true_particles(LatticeConfig::ring("1101")) ==
        std::vector<std::int64_t>{0, 3});
  CHECK(true_particles(LatticeConfig::ring("1010")).empty());
  CHECK(true_particles(LatticeConfig::ring("111")) ==
        std::vector<std::int64_t>{0, 1, 2});
  // windows have no wraparound pair
  CHECK(true_particles(LatticeConfig::window("1101")) ==
        std::vector<std::int64_t>{0});
}

TEST_CASE("cylinder probabilities at the closed-form corners") {
  const double rho = 0.7;
  CHECK(cylinder_probability(CylinderPattern::parse("1"), rho) ==
        doctest::Approx(rho).epsilon(1e-15));
  CHECK(cylinder_probability(CylinderPattern::parse("0"), rho) ==
        doctest::Approx(1.0 - rho).epsilon(1e-15));
  CHECK(cylinder_probability(CylinderPattern::parse("11"), rho) ==
        doctest::Approx(2.0 * rho - 1.0).epsilon(1e-12));
  const double pair_total =
      cylinder_probability(CylinderPattern::parse("11"), rho) +
      cylinder_probability(CylinderPattern::parse("10"), rho) +
      cylinder_probability(CylinderPattern::parse("01"), rho);
  CHECK(pair_total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cylinder_probability(CylinderPattern::parse("1"), 0.5),
                  DomainError);
  CHECK_THROWS_AS(cylinder_probability(CylinderPattern::parse("100"), 0.7),
                  DomainError);
}

TEST_CASE("cylinder marginalization identities to 1e-12") {
  for (const double rho : {0.55, 0.7, 0.9}) {
    for (std::int64_t m = 1; m <= 6; ++m) {
      for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
        CylinderPattern pat;
        for (std::int64_t j = 0; j < m; ++j) pat.bits.push_back((bits >> j) & 1u);
        if (!pat.valid()) continue;
        const double base = cylinder_probability(pat, rho);
        double extended = 0.0;
        for (const std::uint8_t b : {0, 1}) {
          auto longer = pat;
          longer.bits.push_back(b);
          if (longer.valid()) extended += cylinder_probability(longer, rho);
        }
        CHECK(std::abs(extended - base) < 1e-12);
      }
    }
  }
}

TEST_CASE("mapped measure weights") {
  CHECK(mapped_measure_weight(CylinderPattern::parse("1"), 0.5) ==
        doctest::Approx(1.0 / 1.5).epsilon(1e-15));
  // density relation round trip: rho_hat = (2 rho - 1)/rho inverts to rho
  for (const double rho : {0.55, 0.66, 0.9}) {
    const double rho_hat = (2.0 * rho - 1.0) / rho;
    CHECK(1.0 / (2.0 - rho_hat) == doctest::Approx(rho).epsilon(1e-15));
    CHECK(mapped_measure_weight(CylinderPattern::parse("0"), rho_hat) ==
          doctest::Approx(1.0 - rho).epsilon(1e-12));
  }
}

TEST_CASE("coupled run maintains the translation invariant") {
  CoupledRunOptions opts;
  opts.t_end = 1000.0;
  opts.check_every = 1;
  opts.offset_rescan_every = 16;
  const auto res = run_coupled(LatticeConfig::ring("0101"), {0.65}, 321, opts);
  CHECK(res.events > 500);
  CHECK(res.invariant_checks >= res.events);
  CHECK(res.invariant_violations == 0);
}

TEST_CASE("coupled run on a full ring never fires") {
  CoupledRunOptions opts;
  opts.t_end = 5.0;
  const auto res = run_coupled(LatticeConfig::ring("111"), {0.5}, 1, opts);
  CHECK(res.events == 0);
  CHECK(res.final_state.fasep == LatticeConfig::ring("111"));
  CHECK(is_no_adjacent_holes(res.final_state.fasep));
}

TEST_CASE("coupled run across many seeds and asymmetries") {
  Rng rng(912);
  for (const double p : {0.0, 0.3, 1.0}) {
    CoupledRunOptions opts;
    opts.t_end = 30.0;
    opts.check_every = 1;
    const auto res =
        run_coupled(LatticeConfig::ring("110100101001"), {p}, rng.next(), opts);
    CHECK(res.invariant_violations == 0);
    CHECK(particle_count(res.final_state.asep) == 6);
    CHECK(particle_count(res.final_state.fasep) == 12);
  }
}
