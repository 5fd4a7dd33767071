#include <doctest.h>

#include <cmath>
#include <vector>

#include "fasep/catalan.hpp"
#include "fasep/errors.hpp"

using namespace fasep;

// Independent oracle: the convolution recurrence c_{n+1} = sum c_i c_{n-i}.
static std::vector<BigInt> catalan_by_convolution(int count) {
  std::vector<BigInt> c(static_cast<std::size_t>(count));
  c[0] = 1;
  for (int n = 0; n + 1 < count; ++n) {
    BigInt acc = 0;
    for (int i = 0; i <= n; ++i)
      acc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(n - i)];
    c[static_cast<std::size_t>(n + 1)] = acc;
  }
  return c;
}

TEST_CASE("catalan numbers against the convolution recurrence") {
  const auto oracle = catalan_by_convolution(45);
  for (int n = 0; n < 45; ++n) CHECK(catalan(n) == oracle[static_cast<std::size_t>(n)]);
  CHECK(catalan(0) == 1);
  CHECK(catalan(3) == 5);
  CHECK(catalan(10) == 16796);
  // past the 64-bit range
  CHECK(catalan(40).get_str() == "2622127042276492108820");
  CHECK_THROWS_AS(catalan(-1), DomainError);
}

TEST_CASE("gap law values") {
  CHECK(gap_law(0, 0.3) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(gap_law(1, 0.25) == doctest::Approx(0.140625).epsilon(1e-15));
  // against direct bigint evaluation c_n rho^n (1-rho)^(n+1)
  for (int n = 0; n < 30; ++n) {
    const double direct =
        catalan(n).get_d() * std::pow(0.3, n) * std::pow(0.7, n + 1);
    CHECK(gap_law(n, 0.3) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("gap law sums to one") {
  double total = 0.0;
  for (int n = 0; n <= 200; ++n) total += gap_law(n, 0.3);
  CHECK(std::abs(total - 1.0) < 1e-12);
  const auto table = gap_law_table(201, 0.3);
  double table_total = 0.0;
  for (const auto v : table) table_total += v;
  CHECK(std::abs(table_total - 1.0) < 1e-12);
}

TEST_CASE("gap law domain") {
  CHECK_THROWS_AS(gap_law(0, 0.5), DomainError);
  CHECK_THROWS_AS(gap_law(0, 0.0), DomainError);
  CHECK_THROWS_AS(gap_law(0, -0.1), DomainError);
  CHECK_THROWS_AS(gap_law(-1, 0.3), DomainError);
}
