#include "fasep/coupling.hpp"

#include <cmath>
#include <string>

namespace fasep::coupling {

std::pair<LatticeConfig, SiteCorrespondence> apply_substitution(
    SubstitutionMap map, const LatticeConfig& src) {
  const auto L = src.size();
  std::vector<std::uint8_t> image;
  SiteCorrespondence corr;
  corr.image_start.reserve(static_cast<std::size_t>(L));
  for (std::int64_t i = 0; i < L; ++i) {
    corr.image_start.push_back(static_cast<std::int64_t>(image.size()));
    const bool occ = src.occupied(i);
    if (map == SubstitutionMap::HighDensity) {
      image.push_back(1);
      if (!occ) image.push_back(0);
    } else {
      image.push_back(0);
      if (occ) image.push_back(1);
    }
  }
  return {LatticeConfig(src.topology(), std::move(image)), std::move(corr)};
}

LatticeConfig invert_substitution(SubstitutionMap map, const LatticeConfig& img,
                                  std::int64_t anchor) {
  const auto M = img.size();
  const bool high = map == SubstitutionMap::HighDensity;
  if (img.topology() == Topology::ClosedWindow && anchor != 0)
    throw DomainError("window inversion starts at site 0");
  if (img.topology() == Topology::Ring) {
    anchor %= M;
    if (anchor < 0) anchor += M;
  }
  if (img.occupied(anchor) != high)
    throw BadAnchor(std::string("anchor site must be ") +
                    (high ? "occupied" : "empty"));

  std::vector<std::uint8_t> source;
  if (img.topology() == Topology::Ring) {
    std::int64_t pos = anchor;
    const std::int64_t end = anchor + M;
    while (pos < end) {
      if (img.occupied(pos) != high)
        throw NotInImage(high ? "adjacent empty pair in image"
                              : "adjacent occupied pair in image");
      const bool two = img.occupied(pos + 1) != high;
      source.push_back(high == !two ? 1 : 0);
      pos += two ? 2 : 1;
    }
    if (pos != end) throw NotInImage("blocks do not close up around the ring");
  } else {
    std::int64_t pos = 0;
    while (pos < M) {
      if (img.occupied(pos) != high)
        throw NotInImage(high ? "adjacent empty pair in image"
                              : "adjacent occupied pair in image");
      const bool two = pos + 1 < M && img.occupied(pos + 1) != high;
      source.push_back(high == !two ? 1 : 0);
      pos += two ? 2 : 1;
    }
  }
  return LatticeConfig(img.topology(), std::move(source));
}

std::vector<std::int64_t> true_particles(const LatticeConfig& cfg) {
  std::vector<std::int64_t> out;
  const auto L = cfg.size();
  const auto last = cfg.topology() == Topology::Ring ? L : L - 1;
  for (std::int64_t i = 0; i < last; ++i)
    if (cfg.occupied(i) && cfg.occupied(i + 1)) out.push_back(i);
  return out;
}

CylinderPattern CylinderPattern::parse(std::string_view text) {
  CylinderPattern p;
  for (char c : text) {
    if (c != '0' && c != '1') throw ParseError("pattern bits must be 0/1");
    p.bits.push_back(c == '1' ? 1 : 0);
  }
  return p;
}

bool CylinderPattern::valid() const {
  if (bits.empty()) return false;
  for (std::size_t i = 0; i + 1 < bits.size(); ++i)
    if (bits[i] + bits[i + 1] < 1) return false;
  return true;
}

double cylinder_probability(const CylinderPattern& theta, double rho) {
  if (!(rho > 0.5 && rho < 1.0))
    throw DomainError("cylinder formula requires 1/2 < rho < 1");
  if (!theta.valid())
    throw DomainError("pattern must contain no adjacent empty pair");
  const auto m = static_cast<std::int64_t>(theta.bits.size());
  std::int64_t sum = 0;
  for (const auto b : theta.bits) sum += b;
  const std::int64_t t1 = theta.bits.front();
  const std::int64_t tm = theta.bits.back();
  const double hole_ratio = (1.0 - rho) / rho;
  const double rho_hat = (2.0 * rho - 1.0) / rho;
  return (1.0 - rho) *
         std::pow(hole_ratio, static_cast<double>(m - 1 - sum)) *
         std::pow(rho_hat, static_cast<double>(2 * sum + 1 - m - t1 - tm));
}

double mapped_measure_weight(const CylinderPattern& theta, double asep_density) {
  if (!(asep_density > 0.0 && asep_density < 1.0))
    throw DomainError("exclusion density must satisfy 0 < rho_hat < 1");
  return cylinder_probability(theta, 1.0 / (2.0 - asep_density));
}

namespace {

class CoupledRunner {
 public:
  CoupledRunner(const LatticeConfig& asep0, const kmc::RateParams& params,
                std::uint64_t seed)
      : params_(params), rng_(seed) {
    if (asep0.topology() != Topology::Ring)
      throw DomainError("coupled run needs a ring");
    lhat_ = asep0.size();
    asep_ = asep0.sites();
    for (std::int64_t i = 0; i < lhat_; ++i)
      if (asep_[static_cast<std::size_t>(i)])
        asep_pos_.push_back(i);
    nhat_ = static_cast<std::int64_t>(asep_pos_.size());
    if (nhat_ < 1) throw DomainError("coupled run needs at least one particle");
    auto [img, corr] = apply_substitution(SubstitutionMap::HighDensity, asep0);
    fasep_ = img.sites();
    m_ = img.size();
    for (const auto s : asep_pos_)
      true_pos_.push_back(corr.image_start[static_cast<std::size_t>(s)]);
    offset_ = 0;
  }

  CoupledRunResult run(const CoupledRunOptions& options) {
    CoupledRunResult result;
    result.snapshots.push_back(state());
    double next_snapshot = options.snapshot_every;
    bool ran_out_of_time = false;
    while (!ran_out_of_time) {
      if (options.max_events_hint && events_ >= options.max_events_hint) break;
      const double dt = rng_.exponential(static_cast<double>(nhat_));
      if (time_ + dt > options.t_end) {
        ran_out_of_time = true;
        break;
      }
      time_ += dt;
      const auto k =
          static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(nhat_)));
      const bool right = rng_.uniform01() < params_.p;
      if (!fire(k, right)) continue;
      ++events_;
      if (options.check_every && events_ % options.check_every == 0) {
        ++result.invariant_checks;
        if (!invariant_holds()) ++result.invariant_violations;
        if (options.offset_rescan_every &&
            events_ % options.offset_rescan_every == 0 && !offset_rescan_ok())
          ++result.invariant_violations;
      }
      if (options.snapshot_every > 0.0 && time_ >= next_snapshot) {
        result.snapshots.push_back(state());
        next_snapshot += options.snapshot_every;
      }
    }
    if (ran_out_of_time) time_ = options.t_end;
    result.final_state = state();
    result.events = events_;
    return result;
  }

 private:
  bool occ_asep(std::int64_t i) const {
    i %= lhat_;
    if (i < 0) i += lhat_;
    return asep_[static_cast<std::size_t>(i)] != 0;
  }

  // Paired exchange for particle k; returns false when thinned.
  bool fire(std::int64_t k, bool right) {
    const auto a = asep_pos_[static_cast<std::size_t>(k)];
    const auto target = right ? (a + 1) % lhat_ : (a - 1 + lhat_) % lhat_;
    if (asep_[static_cast<std::size_t>(target)]) return false;
    asep_[static_cast<std::size_t>(a)] = 0;
    asep_[static_cast<std::size_t>(target)] = 1;
    asep_pos_[static_cast<std::size_t>(k)] = target;

    const auto s = true_pos_[static_cast<std::size_t>(k)];
    if (right) {
      // true particle trades places with the 10 block on its right
      const auto s1 = (s + 1) % m_;
      const auto s2 = (s + 2) % m_;
      fasep_[static_cast<std::size_t>(s1)] = 0;
      fasep_[static_cast<std::size_t>(s2)] = 1;
      true_pos_[static_cast<std::size_t>(k)] = s2;
      if (a == lhat_ - 1) offset_ = (offset_ + 1) % m_;
    } else {
      const auto s1 = (s - 1 + m_) % m_;
      const auto s2 = (s - 2 + m_) % m_;
      fasep_[static_cast<std::size_t>(s1)] = 1;
      fasep_[static_cast<std::size_t>(s)] = 0;
      true_pos_[static_cast<std::size_t>(k)] = s2;
      if (a == 0) offset_ = (offset_ - 1 + m_) % m_;
    }
    return true;
  }

  std::vector<std::uint8_t> substituted_asep() const {
    return apply_substitution(SubstitutionMap::HighDensity,
                              LatticeConfig(Topology::Ring, asep_))
        .first.sites();
  }

  bool matches_at(const std::vector<std::uint8_t>& phi, std::int64_t r) const {
    for (std::int64_t j = 0; j < m_; ++j)
      if (fasep_[static_cast<std::size_t>((r + j) % m_)] !=
          phi[static_cast<std::size_t>(j)])
        return false;
    return true;
  }

  bool invariant_holds() const {
    if (!matches_at(substituted_asep(), offset_)) return false;
    // true-particle spacing: k'_{i+1} - k'_i = 2(k_{i+1} - k_i) - 1
    for (std::int64_t i = 0; i < nhat_; ++i) {
      const auto j = (i + 1) % nhat_;
      const auto gap = i == j ? lhat_
                              : (asep_pos_[static_cast<std::size_t>(j)] -
                                 asep_pos_[static_cast<std::size_t>(i)] + lhat_) %
                                    lhat_;
      const auto dd = (true_pos_[static_cast<std::size_t>(j)] -
                       true_pos_[static_cast<std::size_t>(i)] + m_) %
                      m_;
      if (dd != (2 * gap - 1) % m_) return false;
    }
    return true;
  }

  // From-scratch rotation search; the tracked offset must be a valid
  // rotation (symmetric images admit several).
  bool offset_rescan_ok() const {
    const auto phi = substituted_asep();
    bool any = false;
    for (std::int64_t r = 0; r < m_ && !any; ++r) any = matches_at(phi, r);
    return any && matches_at(phi, offset_);
  }

  CoupledState state() const {
    CoupledState st;
    st.time = time_;
    st.asep = LatticeConfig(Topology::Ring, asep_);
    st.fasep = LatticeConfig(Topology::Ring, fasep_);
    st.asep_positions = asep_pos_;
    st.true_positions = true_pos_;
    st.rotation_offset = offset_;
    return st;
  }

  kmc::RateParams params_;
  Rng rng_;
  std::int64_t lhat_ = 0;
  std::int64_t nhat_ = 0;
  std::int64_t m_ = 0;
  std::vector<std::uint8_t> asep_;
  std::vector<std::uint8_t> fasep_;
  std::vector<std::int64_t> asep_pos_;
  std::vector<std::int64_t> true_pos_;
  std::int64_t offset_ = 0;
  double time_ = 0.0;
  std::uint64_t events_ = 0;
};

}  // namespace

CoupledRunResult run_coupled(const LatticeConfig& asep0,
                             const kmc::RateParams& params, std::uint64_t seed,
                             const CoupledRunOptions& options) {
  if (!(params.p >= 0.0 && params.p <= 1.0))
    throw DomainError("rate parameter p must lie in [0, 1]");
  CoupledRunner runner(asep0, params, seed);
  return runner.run(options);
}

}  // namespace fasep::coupling
