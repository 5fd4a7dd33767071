#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fasep/lattice.hpp"
#include "fasep/rng.hpp"

namespace fasep::kmc {

enum class Model { Fasep, Asep };
enum class ClockScheme { SiteAssociated, ParticleAssociated };
enum class Direction { Right, Left };

struct RateParams {
  double p = 0.5;  // right rate; left rate is exactly 1 - p
};

// One enabled exchange. `bond` is the site pair (bond, bond+1) that swaps.
// A right move carries the jumping particle bond -> bond+1 at rate p; a left
// move carries bond+1 -> bond at rate 1-p.
struct Move {
  std::int64_t bond = 0;
  Direction dir = Direction::Right;
  double rate = 0.0;
  bool operator==(const Move&) const = default;
};

// Facilitated rule: right needs occupied(bond-1), occupied(bond), empty
// target; left needs empty(bond), occupied(bond+1), occupied(bond+2). Plain
// exclusion drops the facilitator conditions.
std::vector<Move> enabled_moves(const LatticeConfig& cfg, const RateParams& params,
                                Model model = Model::Fasep);

struct Snapshot {
  double time = 0.0;
  LatticeConfig config;
};

struct RunRecord {
  std::uint64_t seed = 0;
  RateParams params;
  ClockScheme scheme = ClockScheme::SiteAssociated;
  Model model = Model::Fasep;
  LatticeConfig initial;
  LatticeConfig final_config;
  std::uint64_t events = 0;  // accepted exchanges
  double process_time = 0.0;
  std::int64_t bond_current = 0;  // signed crossings of the bond (0, 1)
  bool absorbed = false;          // no enabled exchange remains
  std::vector<Snapshot> snapshots;
};

// Called after every accepted exchange with the post-move occupancy; the
// pre-move occupancy is the same vector with sites bond, bond+1 swapped.
class EventMonitor {
 public:
  virtual ~EventMonitor() = default;
  virtual void on_event(const std::vector<std::uint8_t>& sites, Topology topology,
                        std::int64_t bond) = 0;
};

// Checks that no exchange ever creates an adjacent empty pair. Zero
// violations expected for every facilitated run (00 bonds only disappear).
class NewDoubleZeroMonitor : public EventMonitor {
 public:
  void on_event(const std::vector<std::uint8_t>& sites, Topology topology,
                std::int64_t bond) override;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
};

// Continuous-time engine. Both clock schemes drive the same generator:
// SiteAssociated samples the embedded chain of the enabled-move rates;
// ParticleAssociated gives every particle a rate-p right clock and a rate-
// (1-p) left clock and thins infeasible events. Single-threaded per
// trajectory; independent instances are safe concurrently.
class Engine {
 public:
  Engine(LatticeConfig initial, RateParams params, Model model, ClockScheme scheme,
         std::uint64_t seed);

  // One clock event. Returns false once absorbed (no enabled exchange).
  // Accepted exchanges bump events(); thinned ParticleAssociated events only
  // advance time.
  bool step();

  bool absorbed() const;
  double time() const { return time_; }
  std::uint64_t events() const { return events_; }
  std::int64_t bond_current() const { return bond_current_; }
  const std::vector<std::uint8_t>& sites() const { return sites_; }
  LatticeConfig config() const { return LatticeConfig(topology_, sites_); }
  double total_rate() const;

  void set_monitor(EventMonitor* monitor) { monitor_ = monitor; }
  void enable_snapshots(double every);

  // Runs until absorption; throws MaxEventsExceeded after max_events accepted
  // exchanges. On a ring the absorbed state is frozen for every p; a closed
  // window at p in {0,1} can absorb with a particle pile jammed against a
  // wall, which the caller can see via is_frozen(final).
  void run_to_absorption(std::uint64_t max_events);

  // Advances process time to exactly t_end.
  void run_until(double t_end);

  RunRecord take_record() &&;

 private:
  struct IndexedSet {
    std::vector<std::int32_t> members;
    std::vector<std::int32_t> slot;  // bond -> index in members, -1 absent
    void init(std::int64_t bonds) { slot.assign(static_cast<std::size_t>(bonds), -1); }
    bool contains(std::int64_t b) const { return slot[static_cast<std::size_t>(b)] >= 0; }
    std::size_t size() const { return members.size(); }
    void insert(std::int64_t b);
    void erase(std::int64_t b);
  };

  bool occ(std::int64_t i) const;
  bool right_enabled(std::int64_t b) const;
  bool left_enabled(std::int64_t b) const;
  void refresh_bond(std::int64_t b);
  void apply_exchange(std::int64_t b, Direction dir);
  void capture_snapshots_until(double t);
  double clock_rate() const;
  void fire_event();

  Topology topology_;
  std::int64_t length_;
  std::vector<std::uint8_t> sites_;
  RateParams params_;
  Model model_;
  ClockScheme scheme_;
  Rng rng_;
  std::uint64_t seed_;

  IndexedSet right_, left_;
  std::vector<std::int32_t> particle_at_;  // site -> particle id, -1 empty
  std::vector<std::int32_t> position_of_; // particle id -> site
  std::int64_t particles_ = 0;

  double time_ = 0.0;
  std::uint64_t events_ = 0;
  std::int64_t bond_current_ = 0;
  EventMonitor* monitor_ = nullptr;
  double snapshot_every_ = 0.0;
  double next_snapshot_ = 0.0;
  std::vector<Snapshot> snapshots_;
  LatticeConfig initial_;
};

// (cfg', dt, move). Absorbed inputs return the config unchanged and no move.
struct StepResult {
  LatticeConfig config;
  double dt = 0.0;
  std::optional<Move> move;
};
StepResult step_gillespie(const LatticeConfig& cfg, const RateParams& params,
                          Rng& rng, Model model = Model::Fasep);

RunRecord run_to_frozen(const LatticeConfig& cfg, const RateParams& params,
                        ClockScheme scheme, std::uint64_t seed,
                        std::uint64_t max_events = 0,  // 0 -> 100 L^2
                        EventMonitor* monitor = nullptr);

RunRecord run_for_time(const LatticeConfig& cfg, const RateParams& params,
                       ClockScheme scheme, std::uint64_t seed, double t_end,
                       double snapshot_every = 0.0,
                       EventMonitor* monitor = nullptr);

RunRecord run_asep_for_time(const LatticeConfig& cfg, const RateParams& params,
                            ClockScheme scheme, std::uint64_t seed, double t_end,
                            double snapshot_every = 0.0,
                            EventMonitor* monitor = nullptr);

// Uniform over the binom(L, N) ring configurations.
LatticeConfig sample_uniform_ring(std::int64_t L, std::int64_t N, Rng& rng);

// i.i.d. occupancy on a closed window; 0 < rho < 1.
LatticeConfig sample_bernoulli_window(std::int64_t L, double rho, Rng& rng);

// Samples a Bernoulli(rho) window of length L, trims it to run from the first
// adjacent empty pair on the left to the first on the right (resampling from
// a fresh substream when no usable pair exists), then evolves the trimmed
// closed window to absorption. Interior record gaps of the final state sample
// the infinite-volume gap law.
RunRecord insulated_window_experiment(double rho, std::int64_t L,
                                      const RateParams& params, ClockScheme scheme,
                                      std::uint64_t seed,
                                      EventMonitor* monitor = nullptr);

}  // namespace fasep::kmc
