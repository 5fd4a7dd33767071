#include <doctest.h>

#include <cmath>

#include "fasep/exact.hpp"

using namespace fasep;
using namespace fasep::exact;

TEST_CASE("state enumeration") {
  CHECK(StateSpace::enumerate(4, 2).size() == 6);
  CHECK(StateSpace::enumerate(5, 2).size() == 10);
  CHECK(StateSpace::enumerate(8, 3).size() == 56);
  CHECK_THROWS_AS(StateSpace::enumerate(20, 3), TooLarge);
  CHECK_THROWS_AS(StateSpace::enumerate(10, 3, 8), TooLarge);  // custom cap
  CHECK_THROWS_AS(StateSpace::enumerate(4, 5), InvalidCount);
  const auto sp = StateSpace::enumerate(5, 2);
  for (std::int64_t i = 0; i < sp.size(); ++i) {
    CHECK(sp.index_of_config(sp.config(i)) == i);
    CHECK(particle_count(sp.config(i)) == 2);
  }
}

TEST_CASE("generator rows on hand-scanned states") {
  const auto sp = StateSpace::enumerate(4, 2);
  const auto gen = build_generator(sp, Rational(7, 10), Model::Fasep);
  const auto idx = sp.index_of_config(LatticeConfig::ring("1100"));
  REQUIRE(idx >= 0);
  const auto& row = gen.rows[static_cast<std::size_t>(idx)];
  REQUIRE(row.size() == 2);
  Rational to_1010 = 0, to_0101 = 0;
  for (const auto& [col, rate] : row) {
    if (sp.config(col) == LatticeConfig::ring("1010")) to_1010 = rate;
    if (sp.config(col) == LatticeConfig::ring("0101")) to_0101 = rate;
  }
  CHECK(to_1010 == make_rational(7, 10));
  CHECK(to_0101 == make_rational(3, 10));

  // frozen state: absorbing row
  const auto frozen = sp.index_of_config(LatticeConfig::ring("1010"));
  CHECK(gen.is_absorbing(frozen));
}

TEST_CASE("zero-rate edges are dropped at p in {0,1}") {
  const auto sp = StateSpace::enumerate(4, 2);
  const auto gen1 = build_generator(sp, Rational(1), Model::Fasep);
  const auto idx = sp.index_of_config(LatticeConfig::ring("1100"));
  REQUIRE(gen1.rows[static_cast<std::size_t>(idx)].size() == 1);
  CHECK(sp.config(gen1.rows[static_cast<std::size_t>(idx)][0].first) ==
        LatticeConfig::ring("1010"));
}

TEST_CASE("asep generator differs by facilitation only") {
  const auto sp = StateSpace::enumerate(4, 2);
  const auto gen = build_generator(sp, Rational(1), Model::Asep);
  const auto idx = sp.index_of_config(LatticeConfig::ring("1100"));
  // p=1 exclusion from 1100: only the particle at site 1 has an empty right
  // neighbor, no facilitator needed
  const auto& row = gen.rows[static_cast<std::size_t>(idx)];
  REQUIRE(row.size() == 1);
  CHECK(sp.config(row[0].first) == LatticeConfig::ring("1010"));
  CHECK(gen.exit_rate(idx) == 1);
}

TEST_CASE("generator entries are non-negative and exits match row sums") {
  const auto sp = StateSpace::enumerate(6, 3);
  const auto gen = build_generator(sp, Rational(2, 5), Model::Fasep);
  for (std::int64_t s = 0; s < gen.n; ++s) {
    Rational sum = 0;
    for (const auto& [col, rate] : gen.rows[static_cast<std::size_t>(s)]) {
      CHECK(rate > 0);
      CHECK(col != s);
      sum += rate;
    }
    CHECK(sum == gen.exit_rate(s));
  }
}

TEST_CASE("absorption on tiny rings") {
  // L=5, N=2: all frozen states are the 5 rotations of 10100; uniform
  {
    const auto sp = StateSpace::enumerate(5, 2);
    const auto gen = build_generator(sp, Rational(1, 3), Model::Fasep);
    const auto dist =
        absorption_distribution(uniform_distribution(sp), gen, sp);
    int support = 0;
    for (std::int64_t i = 0; i < sp.size(); ++i) {
      if (dist[static_cast<std::size_t>(i)] == 0) continue;
      ++support;
      CHECK(dist[static_cast<std::size_t>(i)] == make_rational(1, 5));
      CHECK(is_frozen(sp.config(i)));
    }
    CHECK(support == 5);
  }
  // L=4, N=2: half the mass on each alternating state, independent of p
  for (const auto& p : {Rational(0), Rational(1, 4), Rational(1)}) {
    const auto sp = StateSpace::enumerate(4, 2);
    const auto gen = build_generator(sp, p, Model::Fasep);
    const auto dist =
        absorption_distribution(uniform_distribution(sp), gen, sp);
    CHECK(dist[static_cast<std::size_t>(sp.index_of_config(
              LatticeConfig::ring("1010")))] == make_rational(1, 2));
    CHECK(dist[static_cast<std::size_t>(sp.index_of_config(
              LatticeConfig::ring("0101")))] == make_rational(1, 2));
  }
}

TEST_CASE("lumped and raw absorption solves coincide") {
  const auto sp = StateSpace::enumerate(7, 3);
  const auto gen = build_generator(sp, Rational(3, 4), Model::Fasep);
  const auto uniform = uniform_distribution(sp);
  const auto lumped = absorption_distribution(uniform, gen, sp);
  // rotation-noninvariant initial forces the raw path; average its results
  // over all rotations of the starting state to reproduce the uniform answer
  ExactDistribution averaged(static_cast<std::size_t>(sp.size()), Rational(0));
  for (std::int64_t i = 0; i < sp.size(); ++i) {
    ExactDistribution delta(static_cast<std::size_t>(sp.size()), Rational(0));
    delta[static_cast<std::size_t>(i)] = 1;
    const auto d = absorption_distribution(delta, gen, sp);
    for (std::int64_t j = 0; j < sp.size(); ++j)
      averaged[static_cast<std::size_t>(j)] +=
          d[static_cast<std::size_t>(j)] / static_cast<unsigned long>(sp.size());
  }
  CHECK(averaged == lumped);
}

TEST_CASE("absorption requires a reachable frozen state") {
  const auto sp = StateSpace::enumerate(6, 4);
  const auto gen = build_generator(sp, Rational(1, 2), Model::Fasep);
  CHECK_THROWS_AS(absorption_distribution(uniform_distribution(sp), gen, sp),
                  NotAbsorbing);
}

TEST_CASE("stationary state above half filling is uniform on G") {
  const auto sp = StateSpace::enumerate(6, 4);
  for (const auto& p : {Rational(1, 4), Rational(1, 2), Rational(9, 10)}) {
    const auto gen = build_generator(sp, p, Model::Fasep);
    const auto st = stationary_distribution(gen, sp);
    REQUIRE(st.kind == StationaryResult::Kind::Unique);
    int support = 0;
    for (std::int64_t i = 0; i < sp.size(); ++i) {
      const auto& w = st.distribution[static_cast<std::size_t>(i)];
      if (is_no_adjacent_holes(sp.config(i))) {
        CHECK(w == make_rational(1, 9));
        ++support;
      } else {
        CHECK(w == 0);
      }
    }
    CHECK(support == 9);  // two rotation orbits, so uniformity is nontrivial
  }
}

TEST_CASE("stationary single-orbit case") {
  const auto sp = StateSpace::enumerate(5, 3);
  const auto gen = build_generator(sp, Rational(1, 2), Model::Fasep);
  const auto st = stationary_distribution(gen, sp);
  REQUIRE(st.kind == StationaryResult::Kind::Unique);
  for (std::int64_t i = 0; i < sp.size(); ++i) {
    const bool in_g = is_no_adjacent_holes(sp.config(i));
    CHECK(st.distribution[static_cast<std::size_t>(i)] ==
          (in_g ? make_rational(1, 5) : Rational(0)));
  }
}

TEST_CASE("asep stationary state is uniform on the whole space") {
  const auto sp = StateSpace::enumerate(5, 2);
  const auto gen = build_generator(sp, Rational(4, 7), Model::Asep);
  const auto st = stationary_distribution(gen, sp);
  REQUIRE(st.kind == StationaryResult::Kind::Unique);
  for (std::int64_t i = 0; i < sp.size(); ++i)
    CHECK(st.distribution[static_cast<std::size_t>(i)] == make_rational(1, 10));
}

TEST_CASE("half filling leaves exactly the two alternating absorbing states") {
  const auto sp = StateSpace::enumerate(6, 3);
  const auto gen = build_generator(sp, Rational(1, 2), Model::Fasep);
  const auto st = stationary_distribution(gen, sp);
  REQUIRE(st.kind == StationaryResult::Kind::AbsorbingSet);
  REQUIRE(st.absorbing_states.size() == 2);
  for (const auto s : st.absorbing_states) {
    const auto cfg = sp.config(s);
    CHECK(is_frozen(cfg));
    CHECK(is_no_adjacent_holes(cfg));
  }
}

TEST_CASE("low density leaves the frozen states as absorbing set") {
  const auto sp = StateSpace::enumerate(6, 2);
  const auto gen = build_generator(sp, Rational(1, 2), Model::Fasep);
  const auto st = stationary_distribution(gen, sp);
  REQUIRE(st.kind == StationaryResult::Kind::AbsorbingSet);
  int frozen_count = 0;
  for (std::int64_t i = 0; i < sp.size(); ++i)
    if (is_frozen(sp.config(i))) ++frozen_count;
  CHECK(static_cast<int>(st.absorbing_states.size()) == frozen_count);
}

TEST_CASE("matrix exponential refuses oversized spaces") {
  const auto sp = StateSpace::enumerate(16, 8);  // 12870 states
  const auto gen = build_generator(sp, Rational(1, 2), Model::Fasep);
  std::vector<double> init(static_cast<std::size_t>(sp.size()), 0.0);
  init[0] = 1.0;
  CHECK_THROWS_AS(marginal_at_time(init, gen, 1.0), TooLarge);
}

TEST_CASE("floating fallbacks agree with the exact solves") {
  // absorption
  {
    const auto sp = StateSpace::enumerate(12, 5);
    const auto gen = build_generator(sp, Rational(2, 3), Model::Fasep);
    const auto exact_dist =
        absorption_distribution(uniform_distribution(sp), gen, sp);
    std::vector<double> init(static_cast<std::size_t>(sp.size()),
                             1.0 / static_cast<double>(sp.size()));
    const auto approx = absorption_distribution_approx(init, gen);
    double total = 0.0;
    for (std::int64_t i = 0; i < sp.size(); ++i) {
      total += approx[static_cast<std::size_t>(i)];
      CHECK(std::abs(approx[static_cast<std::size_t>(i)] -
                     exact_dist[static_cast<std::size_t>(i)].get_d()) < 1e-9);
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
  // stationary (plain exclusion: uniform over the whole space)
  {
    const auto sp = StateSpace::enumerate(8, 4);
    const auto gen = build_generator(sp, Rational(5, 8), Model::Asep);
    const auto st = stationary_distribution(gen, sp);
    REQUIRE(st.kind == StationaryResult::Kind::Unique);
    const auto approx = stationary_distribution_approx(gen);
    for (std::int64_t i = 0; i < sp.size(); ++i)
      CHECK(std::abs(approx[static_cast<std::size_t>(i)] -
                     st.distribution[static_cast<std::size_t>(i)].get_d()) <
            1e-9);
  }
}

TEST_CASE("exact solves refuse spaces past the elimination cap") {
  const auto sp = StateSpace::enumerate(15, 7);
  const auto gen = build_generator(sp, Rational(1, 2), Model::Fasep);
  // a pointed initial cannot be lumped, leaving ~6e3 transient unknowns
  ExactDistribution delta(static_cast<std::size_t>(sp.size()), Rational(0));
  delta[0] = 1;
  CHECK_THROWS_AS(absorption_distribution(delta, gen, sp), TooLarge);
  // the rotation-invariant initial lumps to ~430 classes and stays exact
  const auto lumped =
      absorption_distribution(uniform_distribution(sp), gen, sp);
  std::vector<double> init(static_cast<std::size_t>(sp.size()),
                           1.0 / static_cast<double>(sp.size()));
  const auto approx = absorption_distribution_approx(init, gen);
  for (std::int64_t i = 0; i < sp.size(); ++i)
    CHECK(std::abs(approx[static_cast<std::size_t>(i)] -
                   lumped[static_cast<std::size_t>(i)].get_d()) < 1e-9);
}

TEST_CASE("marginal at time zero and at long times") {
  const auto sp = StateSpace::enumerate(6, 4);
  const auto gen = build_generator(sp, Rational(1, 2), Model::Fasep);
  std::vector<double> init(static_cast<std::size_t>(sp.size()), 0.0);
  init[0] = 1.0;
  CHECK(marginal_at_time(init, gen, 0.0) == init);

  const auto late = marginal_at_time(init, gen, 60.0);
  const auto st = stationary_distribution(gen, sp);
  double total = 0.0;
  for (std::int64_t i = 0; i < sp.size(); ++i) {
    total += late[static_cast<std::size_t>(i)];
    CHECK(std::abs(late[static_cast<std::size_t>(i)] -
                   st.distribution[static_cast<std::size_t>(i)].get_d()) < 1e-8);
  }
  CHECK(std::abs(total - 1.0) < 1e-10);

  // no stationary mass on any state containing the 1100 pattern: frozen-and-
  // blocked patterns are transient above half filling
  for (std::int64_t i = 0; i < sp.size(); ++i) {
    const auto cfg = sp.config(i);
    bool has_1100 = false;
    for (std::int64_t b = 0; b < 6; ++b)
      has_1100 = has_1100 || (cfg.occupied(b) && cfg.occupied(b + 1) &&
                              !cfg.occupied(b + 2) && !cfg.occupied(b + 3));
    if (has_1100) CHECK(st.distribution[static_cast<std::size_t>(i)] == 0);
  }
}
