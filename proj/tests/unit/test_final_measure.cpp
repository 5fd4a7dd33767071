#include <doctest.h>

#include "fasep/exact.hpp"
#include "fasep/final_measure.hpp"
#include "fasep/height.hpp"

using namespace fasep;

TEST_CASE("ring final weights on hand-evaluated cases") {
  // L=5, N=2: a single record, consistency forces the whole conditional mass
  CHECK(ring_final_weight({{2}}, 5, 2) == 1);
  // L=7, N=2, gaps (0,0,2): 7 * (1*1*2) / (3 * 21) = 2/9
  CHECK(ring_final_weight({{0, 0, 2}}, 7, 2) == make_rational(2, 9));
  CHECK_THROWS_AS(ring_final_weight({{1, 1}}, 7, 2), InconsistentGaps);
  CHECK_THROWS_AS(ring_final_weight({{0, 0}}, 7, 2), InconsistentGaps);
  CHECK_THROWS_AS(ring_final_weight({{2}}, 4, 2), DomainError);
}

TEST_CASE("conditional weights sum to one exactly") {
  for (const auto& [L, N] : std::vector<std::pair<int, int>>{
           {5, 2}, {7, 2}, {7, 3}, {9, 3}, {10, 4}, {11, 5}}) {
    const auto cond = ring_final_conditional(L, N);
    Rational total = 0;
    for (const auto& [key, w] : cond) {
      CHECK(w > 0);
      total += w;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("gap-built configurations carry the records they were built from") {
  const GapSequence gaps{{0, 1, 2}};  // L = 9, N = 3
  const auto cfg = config_from_gaps(gaps, 9);
  CHECK(cfg == LatticeConfig::ring("001001010"));
  const auto recs = record_set(cfg).sites;
  CHECK(recs == std::vector<std::int64_t>{0, 1, 4});
}

TEST_CASE("unconditional measure: single-orbit case") {
  const auto m = ring_final_measure(5, 2);
  REQUIRE(m.size() == 5);
  for (const auto& [key, w] : m) CHECK(w == make_rational(1, 5));
}

TEST_CASE("unconditional measure sums to one and sits on frozen states") {
  for (const auto& [L, N] :
       std::vector<std::pair<int, int>>{{7, 3}, {8, 3}, {9, 4}}) {
    const auto m = ring_final_measure(L, N);
    Rational total = 0;
    for (const auto& [key, w] : m) {
      total += w;
      CHECK(is_frozen(LatticeConfig::parse(key)));
    }
    CHECK(total == 1);
  }
}

TEST_CASE("unconditional measure agrees with the absorption solve") {
  const std::int64_t L = 8, N = 3;
  const auto space = exact::StateSpace::enumerate(L, N);
  const auto gen =
      exact::build_generator(space, Rational(2, 7), exact::Model::Fasep);
  const auto dist = exact::absorption_distribution(
      exact::uniform_distribution(space), gen, space);
  const auto formula = ring_final_measure(L, N);
  for (std::int64_t i = 0; i < space.size(); ++i) {
    const auto key = space.config(i).to_string();
    const auto it = formula.find(key);
    const Rational expected = it == formula.end() ? Rational(0) : it->second;
    CHECK(dist[static_cast<std::size_t>(i)] == expected);
  }
}
