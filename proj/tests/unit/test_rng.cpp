#include <doctest.h>

#include <cmath>
#include <vector>

#include "fasep/rng.hpp"

using namespace fasep;

TEST_CASE("identical seeds give identical streams") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("forked substreams are deterministic and distinct") {
  const Rng parent(9);
  Rng c1 = parent.fork(0);
  Rng c2 = parent.fork(0);
  Rng c3 = parent.fork(1);
  bool all_equal = true;
  for (int i = 0; i < 100; ++i) {
    const auto x = c1.next();
    CHECK(x == c2.next());
    all_equal = all_equal && (x == c3.next());
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("bounded draws are unbiased") {
  Rng rng(77);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) counts[static_cast<std::size_t>(rng.below(7))]++;
  const double expect = n / 7.0;
  const double sigma = std::sqrt(n * (1.0 / 7.0) * (6.0 / 7.0));
  for (const auto c : counts) CHECK(std::abs(c - expect) < 4 * sigma);
}

TEST_CASE("exponential draws have the right mean") {
  Rng rng(31);
  double total = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) total += rng.exponential(2.0);
  CHECK(total / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  Rng rng(5);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
