#include "fasep/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "fasep/catalan.hpp"
#include "fasep/coupling.hpp"
#include "fasep/exact.hpp"
#include "fasep/final_measure.hpp"
#include "fasep/height.hpp"
#include "fasep/kmc.hpp"
#include "fasep/stats.hpp"

namespace fasep::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct InvariantTally {
  std::uint64_t double_zero_checks = 0;
  std::uint64_t double_zero_violations = 0;
  std::uint64_t closure_checks = 0;
  std::uint64_t closure_violations = 0;
  std::uint64_t coupling_checks = 0;
  std::uint64_t coupling_violations = 0;

  void absorb(const kmc::NewDoubleZeroMonitor& m, bool started_in_g) {
    double_zero_checks += m.checks;
    double_zero_violations += m.violations;
    if (started_in_g) {
      closure_checks += m.checks;
      closure_violations += m.violations;
    }
  }
};

std::vector<std::pair<std::int64_t, std::int64_t>> low_density_grid(bool quick) {
  std::vector<std::pair<std::int64_t, std::int64_t>> grid;
  const std::int64_t l_max = quick ? 7 : 10;
  for (std::int64_t L = 4; L <= l_max; ++L)
    for (std::int64_t N = 1; 2 * N < L; ++N) grid.push_back({L, N});
  return grid;
}

std::vector<Rational> p_grid_absorption() {
  return {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
}

// --- criterion 1: exact p-independence of the absorption distribution ------

CriterionResult criterion_p_independence(const Options& opt) {
  const auto start = Clock::now();
  CriterionResult r{1, "p-independence of the final measure (exact)", false, 0, 0,
                    0, "", 0};
  std::uint64_t mismatches = 0;
  std::uint64_t points = 0;
  for (const auto& [L, N] : low_density_grid(opt.quick)) {
    const auto space = exact::StateSpace::enumerate(L, N);
    const auto initial = exact::uniform_distribution(space);
    exact::ExactDistribution reference;
    for (const auto& p : p_grid_absorption()) {
      const auto gen = exact::build_generator(space, p, exact::Model::Fasep);
      auto dist = exact::absorption_distribution(initial, gen, space);
      if (reference.empty()) {
        reference = std::move(dist);
      } else if (dist != reference) {
        ++mismatches;
      }
      ++points;
    }
  }
  r.statistic = static_cast<double>(mismatches);
  r.threshold = 0.0;
  r.samples = points;
  r.pass = mismatches == 0;
  std::ostringstream os;
  os << points << " (L,N,p) absorption solves, " << mismatches
     << " distributions differing from their p=0 reference";
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 2: absorption distribution equals the counting formula ------

CriterionResult criterion_formula_match(const Options& opt) {
  const auto start = Clock::now();
  CriterionResult r{2, "final measure matches the Catalan counting formula", false,
                    0, 0, 0, "", 0};
  std::uint64_t mismatches = 0;
  std::uint64_t configs = 0;
  for (const auto& [L, N] : low_density_grid(opt.quick)) {
    const auto space = exact::StateSpace::enumerate(L, N);
    const auto gen =
        exact::build_generator(space, Rational(1, 2), exact::Model::Fasep);
    const auto dist = exact::absorption_distribution(
        exact::uniform_distribution(space), gen, space);
    const auto formula = ring_final_measure(L, N);
    for (std::int64_t i = 0; i < space.size(); ++i) {
      const auto key = space.config(i).to_string();
      const auto it = formula.find(key);
      const Rational expected = it == formula.end() ? Rational(0) : it->second;
      if (dist[static_cast<std::size_t>(i)] != expected) ++mismatches;
      ++configs;
    }
  }
  r.statistic = static_cast<double>(mismatches);
  r.threshold = 0.0;
  r.samples = configs;
  r.pass = mismatches == 0;
  std::ostringstream os;
  os << configs << " state weights compared exactly, " << mismatches
     << " mismatches";
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 3: record construction equals the p=1 simulation ------------

CriterionResult criterion_tasep_oracle(const Options& opt, InvariantTally& tally) {
  const auto start = Clock::now();
  CriterionResult r{3, "analytic F-TASEP final state equals p=1 dynamics", false,
                    0, 0, 0, "", 0};
  Rng rng = Rng(opt.seed).fork(3);
  const std::vector<std::pair<std::int64_t, std::int64_t>> grid = {
      {12, 3}, {16, 5}, {20, 7}};
  const std::uint64_t runs = opt.quick ? 100 : 1000;
  std::uint64_t mismatches = 0;
  kmc::NewDoubleZeroMonitor monitor;
  for (const auto& [L, N] : grid) {
    for (std::uint64_t i = 0; i < runs; ++i) {
      const auto cfg = kmc::sample_uniform_ring(L, N, rng);
      const auto analytic = final_config_tasep(cfg);
      const auto rec = kmc::run_to_frozen(cfg, {1.0},
                                          kmc::ClockScheme::SiteAssociated,
                                          rng.next(), 0, &monitor);
      if (rec.final_config != analytic || !is_frozen(rec.final_config))
        ++mismatches;
    }
  }
  tally.absorb(monitor, false);
  r.statistic = static_cast<double>(mismatches);
  r.threshold = 0.0;
  r.samples = runs * grid.size();
  r.pass = mismatches == 0;
  std::ostringstream os;
  os << r.samples << " random rings, " << mismatches << " final-state mismatches";
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 4: Catalan gap law from insulated windows -------------------

stats::Distribution pooled_gap_model(double rho, std::int64_t tail_at) {
  stats::Distribution model;
  double head = 0.0;
  const auto law = gap_law_table(tail_at, rho);
  for (std::int64_t n = 0; n < tail_at; ++n) {
    model[std::to_string(n)] = law[static_cast<std::size_t>(n)];
    head += law[static_cast<std::size_t>(n)];
  }
  model["tail"] = 1.0 - head;
  return model;
}

stats::EmpiricalDistribution pool_gaps(const stats::EmpiricalDistribution& hist,
                                       std::int64_t tail_at) {
  stats::EmpiricalDistribution out;
  for (const auto& [key, count] : hist.counts) {
    const auto n = std::stoll(key);
    out.add(n < tail_at ? key : "tail", count);
  }
  return out;
}

CriterionResult criterion_gap_law(const Options& opt, InvariantTally& tally) {
  const auto start = Clock::now();
  CriterionResult r{4, "gap law: Catalan distribution, p-independent", false, 0,
                    0, 0, "", 0};
  const std::int64_t tail_at = 20;
  const double tol = 0.02;
  const std::int64_t window = opt.quick ? 10000 : 20000;
  const std::uint64_t target_gaps = opt.quick ? 30000 : 100000;
  const std::vector<double> rhos = {0.25, 0.35};
  const std::vector<double> ps = {0.0, 0.5, 1.0};

  Rng rng = Rng(opt.seed).fork(4);
  double worst_tv = 0.0;
  std::uint64_t gaps_total = 0;
  bool ok = true;
  std::ostringstream os;
  for (const auto rho : rhos) {
    const auto model = pooled_gap_model(rho, tail_at);
    std::vector<stats::EmpiricalDistribution> pooled;
    for (const auto p : ps) {
      kmc::NewDoubleZeroMonitor monitor;
      stats::EmpiricalDistribution hist;
      while (hist.total < target_gaps) {
        const auto rec = kmc::insulated_window_experiment(
            rho, window, {p}, kmc::ClockScheme::SiteAssociated, rng.next(),
            &monitor);
        hist.merge(stats::gap_histogram({rec}));
      }
      tally.absorb(monitor, false);
      gaps_total += hist.total;
      auto emp = pool_gaps(hist, tail_at);
      const double tv = stats::tv_distance(emp, model);
      worst_tv = std::max(worst_tv, tv);
      ok = ok && tv < tol;
      os << "rho=" << rho << " p=" << p << " tv=" << tv << "; ";
      pooled.push_back(std::move(emp));
    }
    for (std::size_t a = 0; a < pooled.size(); ++a) {
      for (std::size_t b = a + 1; b < pooled.size(); ++b) {
        const double tv = stats::tv_distance(pooled[a], pooled[b]);
        worst_tv = std::max(worst_tv, tv);
        ok = ok && tv < tol;
      }
    }
  }
  r.statistic = worst_tv;
  r.threshold = tol;
  r.samples = gaps_total;
  r.pass = ok;
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 5: high-density stationary state is uniform on G ------------

CriterionResult criterion_high_density_uniform(const Options& opt) {
  const auto start = Clock::now();
  CriterionResult r{5, "high-density stationary state uniform on G (exact)", false,
                    0, 0, 0, "", 0};
  (void)opt;
  const std::vector<std::pair<std::int64_t, std::int64_t>> grid = {
      {6, 4}, {7, 4}, {8, 5}, {9, 5}, {10, 6}};
  const std::vector<Rational> ps = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  std::uint64_t mismatches = 0;
  std::uint64_t weights = 0;
  for (const auto& [L, N] : grid) {
    const auto space = exact::StateSpace::enumerate(L, N);
    std::int64_t g_count = 0;
    for (std::int64_t i = 0; i < space.size(); ++i)
      if (is_no_adjacent_holes(space.config(i))) ++g_count;
    const Rational expected(1, static_cast<unsigned long>(g_count));
    for (const auto& p : ps) {
      const auto gen = exact::build_generator(space, p, exact::Model::Fasep);
      const auto st = exact::stationary_distribution(gen, space);
      if (st.kind != exact::StationaryResult::Kind::Unique) {
        mismatches += static_cast<std::uint64_t>(space.size());
        continue;
      }
      for (std::int64_t i = 0; i < space.size(); ++i) {
        const bool in_g = is_no_adjacent_holes(space.config(i));
        const auto& w = st.distribution[static_cast<std::size_t>(i)];
        if (w != (in_g ? expected : Rational(0))) ++mismatches;
        ++weights;
      }
    }
  }
  r.statistic = static_cast<double>(mismatches);
  r.threshold = 0.0;
  r.samples = weights;
  r.pass = mismatches == 0;
  std::ostringstream os;
  os << weights << " stationary weights compared exactly, " << mismatches
     << " mismatches";
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 6: stationary cylinder frequencies match the closed form ----

std::vector<coupling::CylinderPattern> patterns_in_g(std::int64_t m) {
  std::vector<coupling::CylinderPattern> out;
  for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
    coupling::CylinderPattern pat;
    for (std::int64_t j = 0; j < m; ++j)
      pat.bits.push_back((bits >> j) & 1u);
    if (pat.valid()) out.push_back(std::move(pat));
  }
  return out;
}

std::string pattern_key(const coupling::CylinderPattern& pat) {
  std::string key;
  for (const auto b : pat.bits) key.push_back(b ? '1' : '0');
  return key;
}

CriterionResult criterion_cylinders(const Options& opt, InvariantTally& tally) {
  const auto start = Clock::now();
  CriterionResult r{6, "stationary cylinder frequencies (rho = 0.7)", false, 0, 0,
                    0, "", 0};
  const double rho = 0.7;
  const double p = 0.7;
  const std::int64_t l_hat = opt.quick ? 210 : 700;
  const std::int64_t n_hat = opt.quick ? 120 : 400;
  const std::int64_t L = 2 * l_hat - n_hat;  // ring size, density l_hat / L
  const std::int64_t snapshots = opt.quick ? 250 : 600;
  const std::int64_t spacing_events = 50 * L;
  const std::int64_t stride = 12;

  // formula-side marginalization identities, m <= 6
  double worst_identity = 0.0;
  for (std::int64_t m = 1; m <= 6; ++m) {
    double total = 0.0;
    for (const auto& pat : patterns_in_g(m)) {
      const double w = coupling::cylinder_probability(pat, rho);
      total += w;
      if (m < 6) {
        double extended = 0.0;
        for (const std::uint8_t b : {0, 1}) {
          auto longer = pat;
          longer.bits.push_back(b);
          if (longer.valid())
            extended += coupling::cylinder_probability(longer, rho);
        }
        worst_identity = std::max(worst_identity, std::abs(extended - w));
      }
    }
    worst_identity = std::max(worst_identity, std::abs(total - 1.0));
  }

  // stationary Monte Carlo started from a substituted exclusion sample
  Rng rng = Rng(opt.seed).fork(6);
  const auto asep0 = kmc::sample_uniform_ring(l_hat, n_hat, rng);
  const auto init =
      coupling::apply_substitution(coupling::SubstitutionMap::HighDensity, asep0)
          .first;
  kmc::Engine engine(init, {p}, kmc::Model::Fasep,
                     kmc::ClockScheme::SiteAssociated, rng.next());
  kmc::NewDoubleZeroMonitor monitor;
  engine.set_monitor(&monitor);
  const std::uint64_t burn_in =
      10 * static_cast<std::uint64_t>(L) * static_cast<std::uint64_t>(L);
  while (engine.events() < burn_in) engine.step();
  // sample at fixed process times: states seen at fixed event counts are
  // biased toward high-exit-rate configurations
  const double dt = static_cast<double>(spacing_events) *
                    engine.time() / static_cast<double>(engine.events());
  std::vector<LatticeConfig> snaps;
  snaps.reserve(static_cast<std::size_t>(snapshots));
  double mark = engine.time();
  for (std::int64_t s = 0; s < snapshots; ++s) {
    mark += dt;
    engine.run_until(mark);
    snaps.push_back(engine.config());
  }
  tally.absorb(monitor, true);

  double worst_z = 0.0;
  std::uint64_t band_checks = 0;
  bool zero_mass_ok = true;
  for (std::int64_t m = 1; m <= 4; ++m) {
    const auto counts = stats::cylinder_counts(snaps, m, stride);
    const double n = static_cast<double>(counts.total);
    for (const auto& pat : patterns_in_g(m)) {
      const double prob = coupling::cylinder_probability(pat, rho);
      const auto it = counts.counts.find(pattern_key(pat));
      const double freq =
          it == counts.counts.end() ? 0.0 : static_cast<double>(it->second) / n;
      const double sigma = std::sqrt(prob * (1.0 - prob) / n);
      worst_z = std::max(worst_z, std::abs(freq - prob) / sigma);
      ++band_checks;
    }
    // patterns outside G must never occur
    for (const auto& [key, count] : counts.counts) {
      if (key.find("00") != std::string::npos && count > 0) zero_mass_ok = false;
      ++tally.closure_checks;
    }
  }

  r.statistic = worst_z;
  r.threshold = 3.0;
  r.samples = band_checks;
  r.pass = worst_z <= 3.0 && worst_identity <= 1e-12 && zero_mass_ok;
  std::ostringstream os;
  os << "worst |z| = " << worst_z << " over " << band_checks
     << " bands; formula identity residual " << worst_identity;
  if (!zero_mass_ok) os << "; saw mass on a pattern containing 00";
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 7: coupling invariant + marginal referee --------------------

CriterionResult criterion_coupling(const Options& opt, InvariantTally& tally) {
  const auto start = Clock::now();
  CriterionResult r{7, "exclusion coupling: invariant and marginal law", false, 0,
                    0, 0, "", 0};
  Rng rng = Rng(opt.seed).fork(7);

  const std::uint64_t trajectories = opt.quick ? 20 : 100;
  const std::uint64_t events_each = opt.quick ? 2000 : 10000;
  const std::vector<double> ps = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::uint64_t violations = 0;
  for (std::uint64_t i = 0; i < trajectories; ++i) {
    const std::int64_t l_hat = 50;
    const std::int64_t n_hat =
        5 + static_cast<std::int64_t>(rng.below(41));  // 5..45
    const auto asep0 = kmc::sample_uniform_ring(l_hat, n_hat, rng);
    coupling::CoupledRunOptions copts;
    copts.t_end = std::numeric_limits<double>::infinity();
    copts.max_events_hint = events_each;
    copts.check_every = 1;
    copts.offset_rescan_every = 64;
    const auto res = coupling::run_coupled(asep0, {ps[i % ps.size()]}, rng.next(),
                                           copts);
    tally.coupling_checks += res.invariant_checks;
    tally.coupling_violations += res.invariant_violations;
    violations += res.invariant_violations;
  }

  // marginal referee on a small ring: coupled F-ASEP component vs a direct
  // run vs the exact matrix-exponential marginal
  const auto asep0 = LatticeConfig::ring("11000");
  const auto fasep0 =
      coupling::apply_substitution(coupling::SubstitutionMap::HighDensity, asep0)
          .first;
  const double t_end = 1.0;
  const double p = 0.6;
  const std::uint64_t samples = opt.quick ? 20000 : 100000;

  const auto space = exact::StateSpace::enumerate(fasep0.size(),
                                                  particle_count(fasep0));
  const auto gen =
      exact::build_generator(space, Rational(3, 5), exact::Model::Fasep);
  std::vector<double> delta(static_cast<std::size_t>(space.size()), 0.0);
  delta[static_cast<std::size_t>(space.index_of_config(fasep0))] = 1.0;
  const auto exact_marginal = exact::marginal_at_time(delta, gen, t_end);
  stats::Distribution exact_dist;
  for (std::int64_t i = 0; i < space.size(); ++i)
    if (exact_marginal[static_cast<std::size_t>(i)] > 0.0)
      exact_dist[space.config(i).to_string()] =
          exact_marginal[static_cast<std::size_t>(i)];

  stats::EmpiricalDistribution coupled_emp;
  stats::EmpiricalDistribution direct_emp;
  kmc::NewDoubleZeroMonitor monitor;
  coupling::CoupledRunOptions copts;
  copts.t_end = t_end;
  copts.check_every = 16;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto res = coupling::run_coupled(asep0, {p}, rng.next(), copts);
    tally.coupling_checks += res.invariant_checks;
    tally.coupling_violations += res.invariant_violations;
    violations += res.invariant_violations;
    coupled_emp.add(res.final_state.fasep.to_string());
    const auto rec =
        kmc::run_for_time(fasep0, {p}, kmc::ClockScheme::SiteAssociated,
                          rng.next(), t_end, 0.0, &monitor);
    direct_emp.add(rec.final_config.to_string());
  }
  tally.absorb(monitor, true);
  const double tv_coupled = stats::tv_distance(coupled_emp, exact_dist);
  const double tv_direct = stats::tv_distance(direct_emp, exact_dist);

  r.statistic = std::max(tv_coupled, tv_direct);
  r.threshold = 0.02;
  r.samples = trajectories * events_each + samples;
  r.pass = violations == 0 && tv_coupled < 0.02 && tv_direct < 0.02;
  std::ostringstream os;
  os << violations << " invariant violations; marginal tv coupled=" << tv_coupled
     << ", direct=" << tv_direct;
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 8: clock-scheme equivalence ----------------------------------

CriterionResult criterion_clock_schemes(const Options& opt, InvariantTally& tally) {
  const auto start = Clock::now();
  CriterionResult r{8, "site and particle clock schemes share the marginal law",
                    false, 0, 0, 0, "", 0};
  Rng rng = Rng(opt.seed).fork(8);
  const auto cfg0 = LatticeConfig::ring("110100");
  const double p = 0.7;
  const double t_end = 1.0;
  const std::uint64_t samples = opt.quick ? 20000 : 100000;

  const auto space = exact::StateSpace::enumerate(6, 3);
  const auto gen =
      exact::build_generator(space, Rational(7, 10), exact::Model::Fasep);
  std::vector<double> delta(static_cast<std::size_t>(space.size()), 0.0);
  delta[static_cast<std::size_t>(space.index_of_config(cfg0))] = 1.0;
  const auto marginal = exact::marginal_at_time(delta, gen, t_end);
  stats::Distribution exact_dist;
  for (std::int64_t i = 0; i < space.size(); ++i)
    if (marginal[static_cast<std::size_t>(i)] > 0.0)
      exact_dist[space.config(i).to_string()] =
          marginal[static_cast<std::size_t>(i)];

  double worst_tv = 0.0;
  std::ostringstream os;
  for (const auto scheme : {kmc::ClockScheme::SiteAssociated,
                            kmc::ClockScheme::ParticleAssociated}) {
    kmc::NewDoubleZeroMonitor monitor;
    stats::EmpiricalDistribution emp;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const auto rec =
          kmc::run_for_time(cfg0, {p}, scheme, rng.next(), t_end, 0.0, &monitor);
      emp.add(rec.final_config.to_string());
    }
    tally.absorb(monitor, false);
    const double tv = stats::tv_distance(emp, exact_dist);
    worst_tv = std::max(worst_tv, tv);
    os << (scheme == kmc::ClockScheme::SiteAssociated ? "site" : "particle")
       << " tv=" << tv << "; ";
  }

  r.statistic = worst_tv;
  r.threshold = 0.02;
  r.samples = 2 * samples;
  r.pass = worst_tv < 0.02;
  r.detail = os.str();
  r.seconds = elapsed(start);
  return r;
}

// --- criterion 9: structural invariants aggregated over criteria 3-8 -------

CriterionResult criterion_structural(const InvariantTally& tally) {
  CriterionResult r{9, "structural invariants: no new 00, G-closure, coupling",
                    false, 0, 0, 0, "", 0};
  const auto violations = tally.double_zero_violations +
                          tally.closure_violations + tally.coupling_violations;
  r.statistic = static_cast<double>(violations);
  r.threshold = 0.0;
  r.samples = tally.double_zero_checks + tally.closure_checks +
              tally.coupling_checks;
  r.pass = violations == 0;
  std::ostringstream os;
  os << tally.double_zero_checks << " double-zero checks ("
     << tally.double_zero_violations << " bad), " << tally.closure_checks
     << " closure checks (" << tally.closure_violations << " bad), "
     << tally.coupling_checks << " coupling checks ("
     << tally.coupling_violations << " bad)";
  r.detail = os.str();
  return r;
}

void log_result(const Options& opt, const CriterionResult& r) {
  if (!opt.log) return;
  *opt.log << "criterion " << r.id << " [" << (r.pass ? "pass" : "FAIL") << "] "
           << r.name << " -- statistic " << r.statistic << " vs threshold "
           << r.threshold << " (" << r.seconds << " s)\n";
  if (!r.detail.empty()) *opt.log << "  " << r.detail << "\n";
  opt.log->flush();
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& options) {
  std::vector<CriterionResult> results;
  InvariantTally tally;
  const auto push = [&](CriterionResult r) {
    log_result(options, r);
    results.push_back(std::move(r));
  };
  push(criterion_p_independence(options));
  push(criterion_formula_match(options));
  push(criterion_tasep_oracle(options, tally));
  push(criterion_gap_law(options, tally));
  push(criterion_high_density_uniform(options));
  push(criterion_cylinders(options, tally));
  push(criterion_coupling(options, tally));
  push(criterion_clock_schemes(options, tally));
  push(criterion_structural(tally));
  return results;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace fasep::acceptance
