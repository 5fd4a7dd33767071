#include "fasep/final_measure.hpp"

#include <functional>

#include "fasep/catalan.hpp"

namespace fasep {

static void check_low_density(std::int64_t L, std::int64_t N) {
  if (N < 0 || 2 * N >= L)
    throw DomainError("final measure requires 0 <= N < L/2");
}

Rational ring_final_weight(const GapSequence& gaps, std::int64_t L, std::int64_t N) {
  check_low_density(L, N);
  const auto K = L - 2 * N;
  if (static_cast<std::int64_t>(gaps.gaps.size()) != K)
    throw InconsistentGaps("expected " + std::to_string(K) + " gaps, got " +
                           std::to_string(gaps.gaps.size()));
  std::int64_t total = 0;
  BigInt prod = 1;
  for (const auto n : gaps.gaps) {
    if (n < 0) throw InconsistentGaps("negative gap");
    total += 2 * n + 1;
    prod *= catalan(n);
  }
  if (total != L)
    throw InconsistentGaps("gap lengths sum to " + std::to_string(total) +
                           ", expected L=" + std::to_string(L));
  Rational w(BigInt(L) * prod, BigInt(K) * binomial(L, N));
  w.canonicalize();
  return w;
}

LatticeConfig config_from_gaps(const GapSequence& gaps, std::int64_t L) {
  LatticeConfig out(Topology::Ring,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(L), 0));
  std::int64_t q = 0;
  for (const auto n : gaps.gaps) {
    for (std::int64_t j = 1; j <= 2 * n; j += 2) out.set(q + j, true);
    q += 2 * n + 1;
  }
  return out;
}

// Enumerate compositions of N into K non-negative parts.
static void for_each_composition(
    std::int64_t N, std::int64_t K,
    const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::vector<std::int64_t> parts(static_cast<std::size_t>(K), 0);
  std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t idx,
                                                            std::int64_t left) {
    if (idx == K - 1) {
      parts[static_cast<std::size_t>(idx)] = left;
      fn(parts);
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      parts[static_cast<std::size_t>(idx)] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, N);
}

RingMeasure ring_final_conditional(std::int64_t L, std::int64_t N) {
  check_low_density(L, N);
  RingMeasure out;
  for_each_composition(N, L - 2 * N, [&](const std::vector<std::int64_t>& parts) {
    GapSequence g{parts};
    out[config_from_gaps(g, L).to_string()] += ring_final_weight(g, L, N);
  });
  return out;
}

RingMeasure ring_final_measure(std::int64_t L, std::int64_t N) {
  check_low_density(L, N);
  RingMeasure out;
  const Rational inv_l = make_rational(1, L);
  for_each_composition(N, L - 2 * N, [&](const std::vector<std::int64_t>& parts) {
    GapSequence g{parts};
    const Rational share = ring_final_weight(g, L, N) * inv_l;
    const LatticeConfig base = config_from_gaps(g, L);
    for (std::int64_t r = 0; r < L; ++r)
      out[base.rotated(r).to_string()] += share;
  });
  return out;
}

}  // namespace fasep
