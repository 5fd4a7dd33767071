#include "fasep/catalan.hpp"

#include "fasep/errors.hpp"

namespace fasep {

BigInt catalan(std::int64_t n) {
  if (n < 0) throw DomainError("catalan requires n >= 0");
  BigInt b = binomial(2 * n, n);
  BigInt c;
  mpz_divexact_ui(c.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(n + 1));
  return c;
}

static void check_gap_law_domain(double rho) {
  if (!(rho > 0.0 && rho < 0.5))
    throw DomainError("gap_law requires 0 < rho < 1/2");
}

double gap_law(std::int64_t n, double rho) {
  if (n < 0) throw DomainError("gap_law requires n >= 0");
  check_gap_law_domain(rho);
  double term = 1.0 - rho;
  const double x = rho * (1.0 - rho);
  for (std::int64_t k = 0; k < n; ++k)
    term *= 2.0 * static_cast<double>(2 * k + 1) / static_cast<double>(k + 2) * x;
  return term;
}

std::vector<double> gap_law_table(std::int64_t count, double rho) {
  if (count < 0) throw DomainError("gap_law_table requires count >= 0");
  check_gap_law_domain(rho);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double term = 1.0 - rho;
  const double x = rho * (1.0 - rho);
  for (std::int64_t k = 0; k < count; ++k) {
    out.push_back(term);
    term *= 2.0 * static_cast<double>(2 * k + 1) / static_cast<double>(k + 2) * x;
  }
  return out;
}

}  // namespace fasep
