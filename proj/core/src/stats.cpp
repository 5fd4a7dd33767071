#include "fasep/stats.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace fasep::stats {

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  for (const auto& [k, c] : other.counts) counts[k] += c;
  total += other.total;
}

Distribution EmpiricalDistribution::normalized() const {
  if (total == 0) throw EmptyDistribution("no samples");
  Distribution out;
  for (const auto& [k, c] : counts)
    out[k] = static_cast<double>(c) / static_cast<double>(total);
  return out;
}

double tv_distance(const Distribution& a, const Distribution& b) {
  if (a.empty() || b.empty()) throw EmptyDistribution("empty distribution");
  double l1 = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      l1 += std::abs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      l1 += std::abs(ib->second);
      ++ib;
    } else {
      l1 += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return l1 / 2.0;
}

double tv_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  return tv_distance(a.normalized(), b.normalized());
}

double tv_distance(const EmpiricalDistribution& a, const Distribution& b) {
  return tv_distance(a.normalized(), b);
}

// Regularized incomplete gamma, upper tail Q(a, x); series + Lentz
// continued fraction.
static double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw DomainError("gamma_q domain");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, return 1 - P
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Q(a,x) by continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

double chi_square_pvalue(double statistic, std::int64_t dof) {
  if (dof < 1) throw DomainError("dof must be positive");
  return gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

double chi_square_quantile(std::int64_t dof, double significance) {
  if (!(significance > 0.0 && significance < 1.0))
    throw DomainError("significance must lie in (0, 1)");
  double lo = 0.0, hi = 1.0;
  while (chi_square_pvalue(hi, dof) > significance) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    if (chi_square_pvalue(mid, dof) > significance)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2.0;
}

TestVerdict chi_square_gof(const EmpiricalDistribution& emp, const Distribution& model,
                           double min_expected, double significance) {
  const auto n = emp.total;
  if (n == 0) throw EmptyDistribution("no samples");

  double tail_expected = 0.0;
  std::uint64_t tail_observed = 0;
  double statistic = 0.0;
  std::int64_t cells = 0;

  std::set<std::string> keys;
  for (const auto& [k, _] : model) keys.insert(k);
  for (const auto& [k, _] : emp.counts) keys.insert(k);

  for (const auto& k : keys) {
    const auto mit = model.find(k);
    const double expected =
        (mit == model.end() ? 0.0 : mit->second) * static_cast<double>(n);
    const auto eit = emp.counts.find(k);
    const auto observed = eit == emp.counts.end() ? 0 : eit->second;
    if (expected < min_expected) {
      tail_expected += expected;
      tail_observed += observed;
      continue;
    }
    const double diff = static_cast<double>(observed) - expected;
    statistic += diff * diff / expected;
    ++cells;
  }
  if (tail_expected > 0.0 || tail_observed > 0) {
    if (tail_expected <= 0.0) {
      statistic = std::numeric_limits<double>::infinity();
    } else {
      const double diff = static_cast<double>(tail_observed) - tail_expected;
      statistic += diff * diff / tail_expected;
    }
    ++cells;
  }
  if (cells < 2)
    throw InsufficientSamples("fewer than two cells survive pooling");

  TestVerdict v;
  v.description = "chi-square goodness of fit, " + std::to_string(cells) +
                  " cells, significance " + std::to_string(significance);
  v.statistic = statistic;
  v.threshold = chi_square_quantile(cells - 1, significance);
  v.pass = statistic <= v.threshold;
  v.samples = n;
  return v;
}

std::vector<std::int64_t> frozen_window_records(const LatticeConfig& cfg) {
  if (cfg.topology() != Topology::ClosedWindow)
    throw DomainError("record harvesting expects a closed window");
  std::vector<std::int64_t> records;
  const auto W = cfg.size();
  for (std::int64_t q = 0; q < W; ++q)
    if (!cfg.occupied(q - 1) && !cfg.occupied(q)) records.push_back(q);
  return records;
}

EmpiricalDistribution gap_histogram(const std::vector<kmc::RunRecord>& records) {
  EmpiricalDistribution hist;
  for (const auto& rec : records) {
    const auto& cfg = rec.final_config;
    const auto W = cfg.size();
    const auto sites = frozen_window_records(cfg);
    for (std::size_t k = 0; k + 1 < sites.size(); ++k) {
      const auto q = sites[k];
      const auto qn = sites[k + 1];
      if (q < 1 || qn > W - 3) continue;
      const auto diff = qn - q;
      if (diff % 2 == 0)
        throw std::logic_error("even record gap in a frozen window");
      hist.add(std::to_string((diff - 1) / 2));
    }
  }
  return hist;
}

EmpiricalDistribution cylinder_counts(const std::vector<LatticeConfig>& snapshots,
                                      std::int64_t m, std::int64_t stride) {
  if (m < 1) throw InvalidWindow("pattern length must be positive");
  if (stride < 1) throw InvalidWindow("stride must be positive");
  EmpiricalDistribution out;
  std::string key(static_cast<std::size_t>(m), '0');
  for (const auto& cfg : snapshots) {
    if (cfg.topology() != Topology::Ring)
      throw DomainError("cylinder counting expects ring snapshots");
    const auto L = cfg.size();
    if (m > L) throw InvalidWindow("pattern longer than the ring");
    for (std::int64_t start = 0; start < L; start += stride) {
      for (std::int64_t j = 0; j < m; ++j)
        key[static_cast<std::size_t>(j)] = cfg.occupied(start + j) ? '1' : '0';
      out.add(key);
    }
  }
  return out;
}

}  // namespace fasep::stats
