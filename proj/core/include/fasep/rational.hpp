#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace fasep {

// Exact arithmetic used by the analytic formulas and the linear solver.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  Rational r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

BigInt binomial(std::int64_t n, std::int64_t k);

// Accepts "3/4", "0.25", "1"; exact in all cases.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

}  // namespace fasep
