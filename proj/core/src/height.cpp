#include "fasep/height.hpp"

#include <deque>

namespace fasep {

HeightProfile height_profile(const LatticeConfig& cfg, std::int64_t bond_current) {
  HeightProfile p;
  const auto L = cfg.size();
  p.heights.resize(static_cast<std::size_t>(L) + 1);
  p.heights[0] = 2 * bond_current;
  for (std::int64_t k = 1; k <= L; ++k)
    p.heights[static_cast<std::size_t>(k)] =
        p.heights[static_cast<std::size_t>(k - 1)] + (cfg.occupied(k - 1) ? -1 : +1);
  return p;
}

// A(q) = profile value after site q, A(-1) = 0.
static std::vector<std::int64_t> partial_heights(const LatticeConfig& cfg) {
  const auto L = cfg.size();
  std::vector<std::int64_t> a(static_cast<std::size_t>(L));
  std::int64_t h = 0;
  for (std::int64_t q = 0; q < L; ++q) {
    h += cfg.occupied(q) ? -1 : +1;
    a[static_cast<std::size_t>(q)] = h;
  }
  return a;
}

static RecordSet record_set_ring(const LatticeConfig& cfg) {
  const auto L = cfg.size();
  const auto N = particle_count(cfg);
  if (2 * N >= L)
    throw NoRecords("ring record set requires N < L/2 (got N=" +
                    std::to_string(N) + ", L=" + std::to_string(L) + ")");
  const auto drift = L - 2 * N;  // profile gain per period
  const auto a = partial_heights(cfg);

  // The supremum over all earlier sites of the periodic extension is realized
  // inside the previous L sites, since each period back loses `drift`.
  // Concatenate one shifted period before the real one and slide a max.
  std::vector<std::int64_t> ext(static_cast<std::size_t>(2 * L));
  for (std::int64_t q = 0; q < L; ++q) {
    ext[static_cast<std::size_t>(q)] = a[static_cast<std::size_t>(q)] - drift;
    ext[static_cast<std::size_t>(L + q)] = a[static_cast<std::size_t>(q)];
  }

  RecordSet out;
  std::deque<std::int64_t> window;  // indices into ext, values decreasing
  for (std::int64_t t = 0; t < 2 * L; ++t) {
    if (t >= L) {
      // window now covers [t-L, t-1]
      while (!window.empty() && window.front() < t - L) window.pop_front();
      const auto q = t - L;
      if (ext[static_cast<std::size_t>(t)] >
          ext[static_cast<std::size_t>(window.front())])
        out.sites.push_back(q);
    }
    while (!window.empty() && ext[static_cast<std::size_t>(window.back())] <=
                                  ext[static_cast<std::size_t>(t)])
      window.pop_back();
    window.push_back(t);
  }
  return out;
}

static RecordSet record_set_window(const LatticeConfig& cfg) {
  const auto L = cfg.size();
  const auto a = partial_heights(cfg);
  RecordSet out;
  std::int64_t running_max = 0;  // padding reference A(-1) = 0
  for (std::int64_t q = 0; q < L; ++q) {
    if (a[static_cast<std::size_t>(q)] > running_max) {
      out.sites.push_back(q);
      running_max = a[static_cast<std::size_t>(q)];
    }
  }
  return out;
}

RecordSet record_set(const LatticeConfig& cfg) {
  return cfg.topology() == Topology::Ring ? record_set_ring(cfg)
                                          : record_set_window(cfg);
}

// Fill sites q+1..q+gap with (10)^n 0, gap = 2n+1, wrapping on rings.
static void fill_segment(LatticeConfig& out, std::int64_t q, std::int64_t gap) {
  for (std::int64_t j = 1; j < gap; j += 2) out.set(q + j, true);
}

static LatticeConfig final_ring(const LatticeConfig& cfg) {
  const auto L = cfg.size();
  const auto records = record_set_ring(cfg).sites;
  LatticeConfig out(Topology::Ring,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(L), 0));
  const auto K = static_cast<std::int64_t>(records.size());
  for (std::int64_t k = 0; k < K; ++k) {
    const auto q = records[static_cast<std::size_t>(k)];
    const auto qn = (k + 1 < K) ? records[static_cast<std::size_t>(k + 1)]
                                : records[0] + L;
    fill_segment(out, q, qn - q);
  }
  return out;
}

static LatticeConfig final_window(const LatticeConfig& cfg) {
  const auto L = cfg.size();
  const auto records = record_set_window(cfg).sites;
  LatticeConfig out(Topology::ClosedWindow,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(L), 0));
  // Leading segment from the virtual record at -1, then between records.
  std::int64_t prev = -1;
  for (const auto q : records) {
    fill_segment(out, prev, q - prev);
    prev = q;
  }
  // Past the last record the profile is pinned by the wall instead of a
  // record; resolve that stretch by the 110 -> 101 rewrite fixpoint.
  std::vector<std::uint8_t> tail(cfg.sites().begin() + (prev + 1),
                                 cfg.sites().end());
  const auto n = static_cast<std::int64_t>(tail.size());
  std::int64_t i = 0;
  while (i + 2 < n) {
    if (tail[static_cast<std::size_t>(i)] && tail[static_cast<std::size_t>(i + 1)] &&
        !tail[static_cast<std::size_t>(i + 2)]) {
      tail[static_cast<std::size_t>(i + 1)] = 0;
      tail[static_cast<std::size_t>(i + 2)] = 1;
      i = i >= 2 ? i - 2 : 0;
    } else {
      ++i;
    }
  }
  for (std::int64_t j = 0; j < n; ++j)
    if (tail[static_cast<std::size_t>(j)]) out.set(prev + 1 + j, true);
  return out;
}

LatticeConfig final_config_tasep(const LatticeConfig& cfg) {
  return cfg.topology() == Topology::Ring ? final_ring(cfg) : final_window(cfg);
}

}  // namespace fasep
