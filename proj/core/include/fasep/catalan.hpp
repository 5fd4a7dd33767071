#pragma once

#include <cstdint>
#include <vector>

#include "fasep/rational.hpp"

namespace fasep {

// c_n = binom(2n, n) / (n+1), exact. Arbitrary precision, so no overflow cap.
BigInt catalan(std::int64_t n);

// P(gap = n) = c_n rho^n (1-rho)^{n+1}, for 0 < rho < 1/2. Evaluated through
// the ratio recurrence c_{n+1}/c_n = 2(2n+1)/(n+2); never forms c_n in
// floating point.
double gap_law(std::int64_t n, double rho);

// gap_law for n = 0..count-1.
std::vector<double> gap_law_table(std::int64_t count, double rho);

}  // namespace fasep
