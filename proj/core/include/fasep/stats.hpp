#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fasep/kmc.hpp"
#include "fasep/lattice.hpp"

namespace fasep::stats {

using Distribution = std::map<std::string, double>;

struct EmpiricalDistribution {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(const std::string& key, std::uint64_t n = 1) {
    counts[key] += n;
    total += n;
  }
  void merge(const EmpiricalDistribution& other);
  Distribution normalized() const;  // EmptyDistribution when total == 0
};

struct TestVerdict {
  std::string description;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t samples = 0;
};

// Half the L1 distance between the normalized distributions; missing keys
// count as zero mass.
double tv_distance(const Distribution& a, const Distribution& b);
double tv_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
double tv_distance(const EmpiricalDistribution& a, const Distribution& b);

// Pearson goodness of fit against `model` (probabilities). Cells whose
// expected count falls below min_expected are pooled into one tail cell;
// fewer than two surviving cells raises InsufficientSamples. Pass iff the
// statistic stays below the upper chi-square quantile at `significance`.
TestVerdict chi_square_gof(const EmpiricalDistribution& emp, const Distribution& model,
                           double min_expected = 5.0, double significance = 0.01);

double chi_square_pvalue(double statistic, std::int64_t dof);
double chi_square_quantile(std::int64_t dof, double significance);

// Record sites of a frozen window read off the adjacent-empty pairs (site -1
// counts as empty padding).
std::vector<std::int64_t> frozen_window_records(const LatticeConfig& cfg);

// Gap values n, with q' - q = 2n + 1 between consecutive records, harvested
// from insulated-window finals. Gaps touching the conditioned window ends are
// excluded: a gap (q, q') counts iff q >= 1 and q' <= W-3. Keys are decimal
// gap values.
EmpiricalDistribution gap_histogram(const std::vector<kmc::RunRecord>& records);

// Counts of every length-m pattern over ring positions 0, stride, 2*stride,
// ... in each snapshot, with wraparound. Keys are the pattern bit strings.
EmpiricalDistribution cylinder_counts(const std::vector<LatticeConfig>& snapshots,
                                      std::int64_t m, std::int64_t stride = 1);

}  // namespace fasep::stats
