#include "fasep/kmc.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fasep::kmc {

std::vector<Move> enabled_moves(const LatticeConfig& cfg, const RateParams& params,
                                Model model) {
  std::vector<Move> out;
  const auto L = cfg.size();
  const auto bonds = cfg.topology() == Topology::Ring ? L : L - 1;
  for (std::int64_t b = 0; b < bonds; ++b) {
    const bool facilitated_r = model == Model::Asep || cfg.occupied(b - 1);
    if (facilitated_r && cfg.occupied(b) && !cfg.occupied(b + 1))
      out.push_back({b, Direction::Right, params.p});
    const bool facilitated_l = model == Model::Asep || cfg.occupied(b + 2);
    if (facilitated_l && !cfg.occupied(b) && cfg.occupied(b + 1))
      out.push_back({b, Direction::Left, 1.0 - params.p});
  }
  return out;
}

void NewDoubleZeroMonitor::on_event(const std::vector<std::uint8_t>& sites,
                                    Topology topology, std::int64_t bond) {
  ++checks;
  const auto L = static_cast<std::int64_t>(sites.size());
  const auto occ_after = [&](std::int64_t i) {
    if (topology == Topology::Ring) {
      i %= L;
      if (i < 0) i += L;
    } else if (i < 0 || i >= L) {
      return false;
    }
    return sites[static_cast<std::size_t>(i)] != 0;
  };
  const auto occ_before = [&](std::int64_t i) {
    // the exchange swapped sites bond, bond+1
    std::int64_t j = i;
    if (topology == Topology::Ring) {
      j %= L;
      if (j < 0) j += L;
    }
    std::int64_t lo = bond, hi = bond + 1;
    if (topology == Topology::Ring) hi %= L;
    if (j == lo) return occ_after(hi);
    if (j == hi) return occ_after(lo);
    return occ_after(i);
  };
  for (std::int64_t j = bond - 1; j <= bond + 1; ++j) {
    if (topology == Topology::ClosedWindow && (j < 0 || j > L - 2)) continue;
    const bool after00 = !occ_after(j) && !occ_after(j + 1);
    if (!after00) continue;
    const bool before00 = !occ_before(j) && !occ_before(j + 1);
    if (!before00) ++violations;
  }
}

void Engine::IndexedSet::insert(std::int64_t b) {
  auto& s = slot[static_cast<std::size_t>(b)];
  if (s >= 0) return;
  s = static_cast<std::int32_t>(members.size());
  members.push_back(static_cast<std::int32_t>(b));
}

void Engine::IndexedSet::erase(std::int64_t b) {
  auto& s = slot[static_cast<std::size_t>(b)];
  if (s < 0) return;
  const auto moved = members.back();
  members[static_cast<std::size_t>(s)] = moved;
  slot[static_cast<std::size_t>(moved)] = s;
  members.pop_back();
  s = -1;
}

Engine::Engine(LatticeConfig initial, RateParams params, Model model,
               ClockScheme scheme, std::uint64_t seed)
    : topology_(initial.topology()),
      length_(initial.size()),
      sites_(initial.sites()),
      params_(params),
      model_(model),
      scheme_(scheme),
      rng_(seed),
      seed_(seed),
      initial_(std::move(initial)) {
  if (!(params_.p >= 0.0 && params_.p <= 1.0))
    throw DomainError("rate parameter p must lie in [0, 1]");
  const auto bonds = topology_ == Topology::Ring ? length_
                                                 : std::max<std::int64_t>(length_ - 1, 0);
  right_.init(bonds);
  left_.init(bonds);
  for (std::int64_t b = 0; b < bonds; ++b) refresh_bond(b);
  if (scheme_ == ClockScheme::ParticleAssociated) {
    particle_at_.assign(static_cast<std::size_t>(length_), -1);
    for (std::int64_t i = 0; i < length_; ++i) {
      if (sites_[static_cast<std::size_t>(i)]) {
        particle_at_[static_cast<std::size_t>(i)] =
            static_cast<std::int32_t>(position_of_.size());
        position_of_.push_back(static_cast<std::int32_t>(i));
      }
    }
    particles_ = static_cast<std::int64_t>(position_of_.size());
  } else {
    particles_ = particle_count(initial_);
  }
}

bool Engine::occ(std::int64_t i) const {
  if (topology_ == Topology::Ring) {
    i %= length_;
    if (i < 0) i += length_;
  } else if (i < 0 || i >= length_) {
    return false;
  }
  return sites_[static_cast<std::size_t>(i)] != 0;
}

bool Engine::right_enabled(std::int64_t b) const {
  if (!occ(b) || occ(b + 1)) return false;
  return model_ == Model::Asep || occ(b - 1);
}

bool Engine::left_enabled(std::int64_t b) const {
  if (occ(b) || !occ(b + 1)) return false;
  return model_ == Model::Asep || occ(b + 2);
}

void Engine::refresh_bond(std::int64_t b) {
  if (topology_ == Topology::Ring) {
    b %= length_;
    if (b < 0) b += length_;
  } else if (b < 0 || b > length_ - 2) {
    return;
  }
  if (right_enabled(b))
    right_.insert(b);
  else
    right_.erase(b);
  if (left_enabled(b))
    left_.insert(b);
  else
    left_.erase(b);
}

double Engine::total_rate() const {
  return params_.p * static_cast<double>(right_.size()) +
         (1.0 - params_.p) * static_cast<double>(left_.size());
}

bool Engine::absorbed() const { return total_rate() == 0.0; }

void Engine::enable_snapshots(double every) {
  if (every <= 0.0) throw DomainError("snapshot interval must be positive");
  snapshot_every_ = every;
  next_snapshot_ = 0.0;
}

void Engine::capture_snapshots_until(double t) {
  if (snapshot_every_ <= 0.0) return;
  while (next_snapshot_ <= t) {
    snapshots_.push_back({next_snapshot_, config()});
    next_snapshot_ += snapshot_every_;
  }
}

void Engine::apply_exchange(std::int64_t b, Direction dir) {
  const std::int64_t i = b;
  std::int64_t j = b + 1;
  if (topology_ == Topology::Ring) j %= length_;
  std::swap(sites_[static_cast<std::size_t>(i)], sites_[static_cast<std::size_t>(j)]);
  if (scheme_ == ClockScheme::ParticleAssociated) {
    const auto from = dir == Direction::Right ? i : j;
    const auto to = dir == Direction::Right ? j : i;
    const auto k = particle_at_[static_cast<std::size_t>(from)];
    particle_at_[static_cast<std::size_t>(to)] = k;
    particle_at_[static_cast<std::size_t>(from)] = -1;
    position_of_[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(to);
  }
  if (b == 0) bond_current_ += dir == Direction::Right ? +1 : -1;
  for (std::int64_t d = -2; d <= 2; ++d) refresh_bond(b + d);
  ++events_;
  if (monitor_) monitor_->on_event(sites_, topology_, b);
}

double Engine::clock_rate() const {
  return scheme_ == ClockScheme::ParticleAssociated ? static_cast<double>(particles_)
                                                    : total_rate();
}

void Engine::fire_event() {
  if (scheme_ == ClockScheme::SiteAssociated) {
    const double u = rng_.uniform01() * total_rate();
    if (u < params_.p * static_cast<double>(right_.size())) {
      apply_exchange(right_.members[rng_.below(right_.size())], Direction::Right);
    } else {
      apply_exchange(left_.members[rng_.below(left_.size())], Direction::Left);
    }
    return;
  }
  // Particle clock: pick a particle and a direction, thin infeasible events.
  const auto k = rng_.below(static_cast<std::uint64_t>(particles_));
  const bool right = rng_.uniform01() < params_.p;
  const std::int64_t s = position_of_[static_cast<std::size_t>(k)];
  if (right) {
    if (topology_ == Topology::ClosedWindow && s + 1 >= length_) return;
    const bool facilitated = model_ == Model::Asep || occ(s - 1);
    if (facilitated && !occ(s + 1)) apply_exchange(s, Direction::Right);
  } else {
    if (topology_ == Topology::ClosedWindow && s - 1 < 0) return;
    const bool facilitated = model_ == Model::Asep || occ(s + 1);
    if (facilitated && !occ(s - 1)) {
      std::int64_t b = s - 1;
      if (topology_ == Topology::Ring && b < 0) b += length_;
      apply_exchange(b, Direction::Left);
    }
  }
}

bool Engine::step() {
  if (absorbed()) return false;
  const double dt = rng_.exponential(clock_rate());
  capture_snapshots_until(time_ + dt);
  time_ += dt;
  fire_event();
  return true;
}

void Engine::run_to_absorption(std::uint64_t max_events) {
  while (!absorbed()) {
    if (events_ >= max_events)
      throw MaxEventsExceeded(
          "no absorbing state reached after " + std::to_string(events_) +
          " exchanges (L=" + std::to_string(length_) +
          ", N=" + std::to_string(particle_count(initial_)) + ")");
    step();
  }
}

void Engine::run_until(double t_end) {
  if (t_end < 0.0) throw DomainError("t_end must be non-negative");
  while (!absorbed()) {
    const double dt = rng_.exponential(clock_rate());
    if (time_ + dt > t_end) break;
    capture_snapshots_until(time_ + dt);
    time_ += dt;
    fire_event();
  }
  capture_snapshots_until(t_end);
  time_ = t_end;
}

RunRecord Engine::take_record() && {
  RunRecord rec;
  rec.seed = seed_;
  rec.params = params_;
  rec.scheme = scheme_;
  rec.model = model_;
  rec.initial = std::move(initial_);
  rec.final_config = LatticeConfig(topology_, std::move(sites_));
  rec.events = events_;
  rec.process_time = time_;
  rec.bond_current = bond_current_;
  rec.absorbed = absorbed();
  rec.snapshots = std::move(snapshots_);
  return rec;
}

StepResult step_gillespie(const LatticeConfig& cfg, const RateParams& params,
                          Rng& rng, Model model) {
  const auto moves = enabled_moves(cfg, params, model);
  double total = 0.0;
  for (const auto& m : moves) total += m.rate;
  if (total == 0.0)
    return {cfg, std::numeric_limits<double>::infinity(), std::nullopt};
  StepResult out{cfg, rng.exponential(total), std::nullopt};
  const double u = rng.uniform01() * total;
  double cum = 0.0;
  for (const auto& m : moves) {
    cum += m.rate;
    if (u < cum) {
      out.move = m;
      break;
    }
  }
  if (!out.move) out.move = moves.back();  // guard against rounding at u ~ total
  const auto b = out.move->bond;
  const bool from_left = out.move->dir == Direction::Right;
  out.config.set(b, !from_left);
  out.config.set(b + 1, from_left);
  return out;
}

static std::uint64_t default_max_events(const LatticeConfig& cfg) {
  const auto L = static_cast<std::uint64_t>(cfg.size());
  return 100 * L * L;
}

RunRecord run_to_frozen(const LatticeConfig& cfg, const RateParams& params,
                        ClockScheme scheme, std::uint64_t seed,
                        std::uint64_t max_events, EventMonitor* monitor) {
  Engine engine(cfg, params, Model::Fasep, scheme, seed);
  engine.set_monitor(monitor);
  engine.run_to_absorption(max_events ? max_events : default_max_events(cfg));
  return std::move(engine).take_record();
}

static RunRecord run_timed(const LatticeConfig& cfg, const RateParams& params,
                           Model model, ClockScheme scheme, std::uint64_t seed,
                           double t_end, double snapshot_every,
                           EventMonitor* monitor) {
  Engine engine(cfg, params, model, scheme, seed);
  engine.set_monitor(monitor);
  if (snapshot_every > 0.0) engine.enable_snapshots(snapshot_every);
  engine.run_until(t_end);
  return std::move(engine).take_record();
}

RunRecord run_for_time(const LatticeConfig& cfg, const RateParams& params,
                       ClockScheme scheme, std::uint64_t seed, double t_end,
                       double snapshot_every, EventMonitor* monitor) {
  return run_timed(cfg, params, Model::Fasep, scheme, seed, t_end, snapshot_every,
                   monitor);
}

RunRecord run_asep_for_time(const LatticeConfig& cfg, const RateParams& params,
                            ClockScheme scheme, std::uint64_t seed, double t_end,
                            double snapshot_every, EventMonitor* monitor) {
  return run_timed(cfg, params, Model::Asep, scheme, seed, t_end, snapshot_every,
                   monitor);
}

LatticeConfig sample_uniform_ring(std::int64_t L, std::int64_t N, Rng& rng) {
  if (L < 1 || N < 0 || N > L)
    throw InvalidCount("need 0 <= N <= L, got N=" + std::to_string(N) +
                       ", L=" + std::to_string(L));
  std::vector<std::int64_t> idx(static_cast<std::size_t>(L));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::uint8_t> sites(static_cast<std::size_t>(L), 0);
  for (std::int64_t i = 0; i < N; ++i) {
    const auto j = i + static_cast<std::int64_t>(
                           rng.below(static_cast<std::uint64_t>(L - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    sites[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
  }
  return LatticeConfig(Topology::Ring, std::move(sites));
}

LatticeConfig sample_bernoulli_window(std::int64_t L, double rho, Rng& rng) {
  if (!(rho > 0.0 && rho < 1.0))
    throw DomainError("Bernoulli density must satisfy 0 < rho < 1");
  if (L < 1) throw DomainError("window length must be positive");
  std::vector<std::uint8_t> sites(static_cast<std::size_t>(L));
  for (auto& s : sites) s = rng.bernoulli(rho) ? 1 : 0;
  return LatticeConfig(Topology::ClosedWindow, std::move(sites));
}

RunRecord insulated_window_experiment(double rho, std::int64_t L,
                                      const RateParams& params, ClockScheme scheme,
                                      std::uint64_t seed, EventMonitor* monitor) {
  if (!(rho > 0.0 && rho < 0.5))
    throw DomainError("insulated window requires 0 < rho < 1/2");
  if (L < 4) throw DomainError("insulated window needs L >= 4");
  const Rng base(seed);
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt > 10000)
      throw DomainError("no usable adjacent empty pairs found; rho too high");
    Rng rng = base.fork(attempt);
    const auto sample = sample_bernoulli_window(L, rho, rng);
    const auto& s = sample.sites();
    std::int64_t left = -1, right = -1;
    for (std::int64_t b = 0; b + 1 < L; ++b) {
      if (!s[static_cast<std::size_t>(b)] && !s[static_cast<std::size_t>(b + 1)]) {
        left = b;
        break;
      }
    }
    for (std::int64_t b = L - 2; b >= 0; --b) {
      if (!s[static_cast<std::size_t>(b)] && !s[static_cast<std::size_t>(b + 1)]) {
        right = b;
        break;
      }
    }
    if (left < 0 || right < left + 2) continue;
    std::vector<std::uint8_t> trimmed(s.begin() + left, s.begin() + right + 2);
    LatticeConfig window(Topology::ClosedWindow, std::move(trimmed));
    Engine engine(window, params, Model::Fasep, scheme, rng.next());
    engine.set_monitor(monitor);
    engine.run_to_absorption(default_max_events(window));
    auto rec = std::move(engine).take_record();
    rec.seed = seed;
    return rec;
  }
}

}  // namespace fasep::kmc
