// fasep: simulate, solve, and verify the one-dimensional facilitated
// exclusion process. Subcommands: simulate, exact, couple, gaps, cylinders,
// verify. Exit codes: 0 ok, 2 bad spec/input, 3 dynamics error, 4 capacity
// error, 5 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "fasep/acceptance.hpp"
#include "fasep/catalan.hpp"
#include "fasep/coupling.hpp"
#include "fasep/exact.hpp"
#include "fasep/final_measure.hpp"
#include "fasep/kmc.hpp"
#include "fasep/serialize.hpp"
#include "fasep/stats.hpp"
#include "fasep/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fasep;

namespace {

struct GlobalOptions {
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool quick = false;
};

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open output file " + path.string());
  out << content;
}

std::string sanitize(std::string text) {
  for (auto& c : text)
    if (c == '.' || c == '/' || c == ' ') c = '_';
  return text;
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
  std::string model = "fasep";
  std::string topology = "ring";
  std::int64_t L = 64;
  std::int64_t N = -1;
  double rho = -1.0;
  std::string initial;  // overrides sampling when set
  std::vector<double> p_list = {0.5};
  std::string scheme = "site";
  std::uint64_t runs = 4;
  double t_end = -1.0;
  bool to_frozen = false;
  std::uint64_t max_events = 0;
  double snapshot_every = 0.0;
};

json simulate_spec_json(const GlobalOptions& g, const SimulateOptions& o) {
  json j;
  j["command"] = "simulate";
  j["model"] = o.model;
  j["topology"] = o.topology;
  j["L"] = o.L;
  if (o.N >= 0) j["N"] = o.N;
  if (o.rho >= 0) j["rho"] = o.rho;
  if (!o.initial.empty()) j["initial"] = o.initial;
  j["p"] = o.p_list;
  j["scheme"] = o.scheme;
  j["seed"] = g.seed;
  j["runs"] = o.runs;
  if (o.to_frozen)
    j["to_frozen"] = true;
  else
    j["t_end"] = o.t_end;
  j["max_events"] = o.max_events;
  j["snapshot_every"] = o.snapshot_every;
  return j;
}

int cmd_simulate(const GlobalOptions& g, const SimulateOptions& o) {
  const auto model = serialize::model_from_name(o.model);
  const auto scheme = serialize::scheme_from_name(o.scheme);
  if (o.runs == 0) throw DomainError("need at least one seed");
  if (!o.to_frozen && o.t_end < 0)
    throw DomainError("choose --t-end <time> or --to-frozen");
  if (o.to_frozen && o.t_end >= 0)
    throw DomainError("--t-end and --to-frozen are exclusive");
  if (o.initial.empty() && o.N < 0 && o.rho < 0)
    throw DomainError("choose an initial state: --initial, --N or --rho");
  if (o.N >= 0 && o.rho >= 0) throw DomainError("--N and --rho are exclusive");

  const auto spec = simulate_spec_json(g, o);
  const auto spec_text = spec.dump();

  const auto make_initial = [&](Rng& rng) {
    if (!o.initial.empty()) return LatticeConfig::parse(o.initial);
    if (o.topology == "ring") {
      if (o.N < 0) throw DomainError("rings sample a fixed particle count: --N");
      return kmc::sample_uniform_ring(o.L, o.N, rng);
    }
    if (o.topology != "window") throw DomainError("topology is ring or window");
    if (o.rho >= 0) return kmc::sample_bernoulli_window(o.L, o.rho, rng);
    auto cfg = kmc::sample_uniform_ring(o.L, o.N, rng);
    return LatticeConfig(Topology::ClosedWindow, cfg.sites());
  };

  const auto run_one = [&](double p, std::uint64_t seed) {
    Rng rng(seed);
    const auto initial = make_initial(rng);
    kmc::Engine engine(initial, {p}, model, scheme, rng.next());
    if (o.snapshot_every > 0) engine.enable_snapshots(o.snapshot_every);
    if (o.to_frozen) {
      const auto L = initial.size();
      engine.run_to_absorption(
          o.max_events ? o.max_events
                       : 100 * static_cast<std::uint64_t>(L) *
                             static_cast<std::uint64_t>(L));
    } else {
      engine.run_until(o.t_end);
    }
    auto rec = std::move(engine).take_record();
    rec.seed = seed;
    return serialize::run_record_to_json(rec);
  };

  const std::uint64_t batch =
      std::max<std::uint64_t>(1, std::thread::hardware_concurrency());
  for (const auto p : o.p_list) {
    std::ostringstream body;
    body << serialize::file_header_json("simulate", spec_text) << "\n";
    // seed-parallel fan-out, collected in seed order
    for (std::uint64_t start = 0; start < o.runs; start += batch) {
      const auto stop = std::min(o.runs, start + batch);
      std::vector<std::future<std::string>> futures;
      futures.reserve(stop - start);
      for (std::uint64_t i = start; i < stop; ++i)
        futures.push_back(
            std::async(std::launch::async, run_one, p, g.seed + i));
      for (auto& f : futures) body << f.get() << "\n";
    }
    const auto name = o.p_list.size() == 1
                          ? std::string("runs.jsonl")
                          : "runs_p" + sanitize(std::to_string(p)) + ".jsonl";
    write_file(fs::path(g.out_dir) / name, body.str());
  }
  std::cout << "wrote " << o.p_list.size() << " run file(s) under " << g.out_dir
            << "\n";
  return 0;
}

// --- exact ------------------------------------------------------------------

struct ExactOptions {
  std::int64_t L = 8;
  std::int64_t N = 3;
  std::vector<std::string> grid;  // extra "L,N" points; sweeps share p_list
  std::vector<std::string> p_list;
  std::int64_t cap = 16;
  bool emit_json = false;
};

void exact_one_point(const GlobalOptions& g, const ExactOptions& o,
                     const std::string& spec_text, std::int64_t L,
                     std::int64_t N, std::vector<stats::TestVerdict>& verdicts) {
  const auto space = exact::StateSpace::enumerate(L, N, o.cap);
  const bool low_density = 2 * N < L;
  const auto tag = "_L" + std::to_string(L) + "_N" + std::to_string(N);

  std::vector<std::string> p_texts = o.p_list;
  if (p_texts.empty())
    p_texts = low_density
                  ? std::vector<std::string>{"0", "1/4", "1/2", "3/4", "1"}
                  : std::vector<std::string>{"1/4", "1/2", "3/4"};

  const auto emit = [&](const std::string& stem,
                        const std::map<std::string, Rational>& dist) {
    write_file(fs::path(g.out_dir) / (stem + ".csv"),
               serialize::file_header_csv("exact", spec_text) +
                   serialize::distribution_to_csv(dist));
    if (o.emit_json)
      write_file(fs::path(g.out_dir) / (stem + ".json"),
                 serialize::file_header_json("exact", spec_text) + "\n" +
                     serialize::distribution_to_json(dist) + "\n");
  };

  if (low_density) {
    std::vector<exact::ExactDistribution> dists;
    for (const auto& ptext : p_texts) {
      const auto p = parse_rational(ptext);
      const auto gen = exact::build_generator(space, p, exact::Model::Fasep);
      dists.push_back(exact::absorption_distribution(
          exact::uniform_distribution(space), gen, space));
      emit("exact" + tag + "_p" + sanitize(ptext),
           serialize::keyed_distribution(dists.back(), space));
    }
    std::uint64_t mismatches = 0;
    for (const auto& d : dists)
      if (d != dists.front()) ++mismatches;
    stats::TestVerdict v;
    v.description = "absorption distributions identical across p (exact), L=" +
                    std::to_string(L) + " N=" + std::to_string(N);
    v.statistic = static_cast<double>(mismatches);
    v.threshold = 0.0;
    v.pass = mismatches == 0;
    v.samples = static_cast<std::uint64_t>(space.size()) * p_texts.size();
    verdicts.push_back(v);

    // the counting formula is the independent reference
    const auto formula = ring_final_measure(L, N);
    emit("formula" + tag, formula);
    std::uint64_t formula_mismatches = 0;
    for (std::int64_t i = 0; i < space.size(); ++i) {
      const auto it = formula.find(space.config(i).to_string());
      const Rational expected = it == formula.end() ? Rational(0) : it->second;
      if (dists.front()[static_cast<std::size_t>(i)] != expected)
        ++formula_mismatches;
    }
    stats::TestVerdict fv;
    fv.description = "absorption equals the counting formula, L=" +
                     std::to_string(L) + " N=" + std::to_string(N);
    fv.statistic = static_cast<double>(formula_mismatches);
    fv.threshold = 0.0;
    fv.pass = formula_mismatches == 0;
    fv.samples = static_cast<std::uint64_t>(space.size());
    verdicts.push_back(fv);
    return;
  }

  std::int64_t g_count = 0;
  for (std::int64_t i = 0; i < space.size(); ++i)
    if (is_no_adjacent_holes(space.config(i))) ++g_count;
  std::uint64_t mismatches = 0;
  bool absorbing_set = false;
  for (const auto& ptext : p_texts) {
    const auto p = parse_rational(ptext);
    const auto gen = exact::build_generator(space, p, exact::Model::Fasep);
    const auto st = exact::stationary_distribution(gen, space);
    if (st.kind != exact::StationaryResult::Kind::Unique) {
      absorbing_set = true;
      continue;
    }
    for (std::int64_t i = 0; i < space.size(); ++i) {
      const bool in_g = is_no_adjacent_holes(space.config(i));
      const Rational expected =
          in_g ? Rational(1, static_cast<unsigned long>(g_count)) : Rational(0);
      if (st.distribution[static_cast<std::size_t>(i)] != expected) ++mismatches;
    }
    emit("stationary" + tag + "_p" + sanitize(ptext),
         serialize::keyed_distribution(st.distribution, space));
  }
  stats::TestVerdict v;
  v.description =
      (absorbing_set ? std::string("chain is reducible; absorbing states "
                                   "reported, L=")
                     : std::string("stationary distribution uniform on the "
                                   "no-adjacent-holes states (exact), L=")) +
      std::to_string(L) + " N=" + std::to_string(N);
  v.statistic = static_cast<double>(mismatches);
  v.threshold = 0.0;
  v.pass = !absorbing_set && mismatches == 0;
  v.samples = static_cast<std::uint64_t>(space.size()) * p_texts.size();
  verdicts.push_back(v);
}

int cmd_exact(const GlobalOptions& g, const ExactOptions& o) {
  json spec{{"command", "exact"}, {"L", o.L},     {"N", o.N},
            {"grid", o.grid},     {"p", o.p_list}};
  const auto spec_text = spec.dump();

  std::vector<std::pair<std::int64_t, std::int64_t>> points{{o.L, o.N}};
  for (const auto& entry : o.grid) {
    const auto comma = entry.find(',');
    if (comma == std::string::npos)
      throw ParseError("grid entries look like L,N: " + entry);
    points.emplace_back(std::stoll(entry.substr(0, comma)),
                        std::stoll(entry.substr(comma + 1)));
  }
  if (!o.grid.empty()) points.erase(points.begin());  // grid replaces L/N

  std::vector<stats::TestVerdict> verdicts;
  for (const auto& [L, N] : points)
    exact_one_point(g, o, spec_text, L, N, verdicts);

  write_file(fs::path(g.out_dir) / "exact_verdict.json",
             serialize::file_header_json("exact", spec_text) + "\n" +
                 serialize::verdicts_to_json(verdicts) + "\n");
  for (const auto& v : verdicts)
    std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.description << "\n";
  return 0;
}

// --- couple -----------------------------------------------------------------

struct CoupleOptions {
  std::int64_t l_hat = 50;
  std::int64_t n_hat = 20;
  double p = 0.7;
  double t_end = 10.0;
  double snapshot_every = 1.0;
  std::uint64_t check_every = 1;
};

int cmd_couple(const GlobalOptions& g, const CoupleOptions& o) {
  json spec{{"command", "couple"}, {"L_hat", o.l_hat}, {"N_hat", o.n_hat},
            {"p", o.p},           {"t_end", o.t_end},  {"seed", g.seed}};
  const auto spec_text = spec.dump();
  Rng rng(g.seed);
  const auto asep0 = kmc::sample_uniform_ring(o.l_hat, o.n_hat, rng);
  coupling::CoupledRunOptions copts;
  copts.t_end = o.t_end;
  copts.check_every = o.check_every;
  copts.snapshot_every = o.snapshot_every;
  const auto res = coupling::run_coupled(asep0, {o.p}, rng.next(), copts);

  std::ostringstream body;
  body << serialize::file_header_json("couple", spec_text) << "\n";
  for (const auto& st : res.snapshots)
    body << serialize::coupled_state_to_json(st) << "\n";
  body << serialize::coupled_state_to_json(res.final_state) << "\n";
  write_file(fs::path(g.out_dir) / "couple.jsonl", body.str());

  json summary{{"events", res.events},
               {"invariant_checks", res.invariant_checks},
               {"invariant_violations", res.invariant_violations}};
  write_file(fs::path(g.out_dir) / "couple_summary.json",
             serialize::file_header_json("couple", spec_text) + "\n" +
                 summary.dump(2) + "\n");
  std::cout << res.events << " paired exchanges, " << res.invariant_violations
            << " invariant violations\n";
  if (res.invariant_violations > 0)
    throw MaxEventsExceeded("coupling invariant violated");
  return 0;
}

// --- gaps -------------------------------------------------------------------

struct GapsOptions {
  double rho = 0.25;
  double p = 0.5;
  std::string scheme = "site";
  std::int64_t window = 20000;
  std::uint64_t target_gaps = 0;  // 0: scale default
  std::int64_t tail_at = 20;
};

int cmd_gaps(const GlobalOptions& g, const GapsOptions& o) {
  const auto target = o.target_gaps ? o.target_gaps
                                    : (g.quick ? std::uint64_t{10000}
                                               : std::uint64_t{100000});
  json spec{{"command", "gaps"},     {"rho", o.rho},
            {"p", o.p},              {"scheme", o.scheme},
            {"window", o.window},    {"target_gaps", target},
            {"seed", g.seed}};
  const auto spec_text = spec.dump();
  const auto scheme = serialize::scheme_from_name(o.scheme);

  Rng rng(g.seed);
  stats::EmpiricalDistribution hist;
  std::uint64_t windows = 0;
  while (hist.total < target) {
    const auto rec = kmc::insulated_window_experiment(o.rho, o.window, {o.p},
                                                      scheme, rng.next());
    hist.merge(stats::gap_histogram({rec}));
    ++windows;
  }

  // pooled comparison against the closed-form law
  stats::Distribution model;
  double head = 0.0;
  const auto law = gap_law_table(o.tail_at, o.rho);
  for (std::int64_t n = 0; n < o.tail_at; ++n) {
    model[std::to_string(n)] = law[static_cast<std::size_t>(n)];
    head += law[static_cast<std::size_t>(n)];
  }
  model["tail"] = 1.0 - head;
  stats::EmpiricalDistribution pooled;
  for (const auto& [key, count] : hist.counts)
    pooled.add(std::stoll(key) < o.tail_at ? key : "tail", count);
  const double tv = stats::tv_distance(pooled, model);

  stats::TestVerdict v;
  v.description = "gap histogram vs Catalan law, tail pooled at n=" +
                  std::to_string(o.tail_at);
  v.statistic = tv;
  v.threshold = 0.02;
  v.pass = tv < v.threshold;
  v.samples = hist.total;

  write_file(fs::path(g.out_dir) / "gaps_hist.csv",
             serialize::file_header_csv("gaps", spec_text) +
                 serialize::histogram_to_csv(hist));
  write_file(fs::path(g.out_dir) / "gap_law.csv",
             serialize::file_header_csv("gaps", spec_text) +
                 serialize::gap_law_to_csv(gap_law_table(40, o.rho)));
  write_file(fs::path(g.out_dir) / "gaps_verdict.json",
             serialize::file_header_json("gaps", spec_text) + "\n" +
                 serialize::verdicts_to_json({v}) + "\n");
  std::cout << hist.total << " gaps from " << windows << " windows, tv " << tv
            << (v.pass ? " [pass]\n" : " [FAIL]\n");
  return 0;
}

// --- cylinders ----------------------------------------------------------

struct CylindersOptions {
  double rho = 0.7;
  std::int64_t L = 1000;
  double p = 0.7;
  std::int64_t snapshots = 0;  // 0: scale default
  std::int64_t spacing_factor = 50;
  std::int64_t stride = 12;
  std::int64_t m_max = 4;
};

int cmd_cylinders(const GlobalOptions& g, const CylindersOptions& o) {
  if (!(o.rho > 0.5 && o.rho < 1.0))
    throw DomainError("cylinders requires 1/2 < rho < 1");
  const auto snapshots =
      o.snapshots ? o.snapshots : (g.quick ? std::int64_t{200} : std::int64_t{600});
  json spec{{"command", "cylinders"}, {"rho", o.rho}, {"L", o.L},
            {"p", o.p},               {"snapshots", snapshots},
            {"stride", o.stride},     {"seed", g.seed}};
  const auto spec_text = spec.dump();

  const auto N = static_cast<std::int64_t>(std::llround(o.rho * o.L));
  if (2 * N <= o.L) throw DomainError("rho L must exceed L/2 particles");
  // start from a substituted exclusion sample: L_hat = N, N_hat = 2N - L
  Rng rng(g.seed);
  const auto asep0 = kmc::sample_uniform_ring(N, 2 * N - o.L, rng);
  const auto init =
      coupling::apply_substitution(coupling::SubstitutionMap::HighDensity, asep0)
          .first;

  kmc::Engine engine(init, {o.p}, kmc::Model::Fasep,
                     kmc::ClockScheme::SiteAssociated, rng.next());
  const std::uint64_t burn_in = 10 * static_cast<std::uint64_t>(o.L) *
                                static_cast<std::uint64_t>(o.L);
  while (engine.events() < burn_in) engine.step();
  // time-anchored sampling; fixed event counts would bias toward
  // high-exit-rate states
  const double dt = static_cast<double>(o.spacing_factor * o.L) *
                    engine.time() / static_cast<double>(engine.events());
  std::vector<LatticeConfig> snaps;
  double mark = engine.time();
  for (std::int64_t s = 0; s < snapshots; ++s) {
    mark += dt;
    engine.run_until(mark);
    snaps.push_back(engine.config());
  }

  std::vector<stats::TestVerdict> verdicts;
  for (std::int64_t m = 1; m <= o.m_max; ++m) {
    const auto counts = stats::cylinder_counts(snaps, m, o.stride);
    const double n = static_cast<double>(counts.total);
    stats::Distribution formula;
    double worst_z = 0.0;
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
      coupling::CylinderPattern pat;
      std::string key;
      for (std::int64_t j = 0; j < m; ++j) {
        pat.bits.push_back((bits >> j) & 1u);
        key.push_back(((bits >> j) & 1u) ? '1' : '0');
      }
      if (!pat.valid()) continue;
      const double prob = coupling::cylinder_probability(pat, o.rho);
      formula[key] = prob;
      const auto it = counts.counts.find(key);
      const double freq =
          it == counts.counts.end() ? 0.0 : static_cast<double>(it->second) / n;
      worst_z = std::max(worst_z,
                         std::abs(freq - prob) / std::sqrt(prob * (1 - prob) / n));
    }
    stats::TestVerdict v;
    v.description = "cylinder frequencies within 3 sigma, m=" + std::to_string(m);
    v.statistic = worst_z;
    v.threshold = 3.0;
    v.pass = worst_z <= 3.0;
    v.samples = counts.total;
    verdicts.push_back(v);

    write_file(fs::path(g.out_dir) / ("cylinders_emp_m" + std::to_string(m) +
                                      ".csv"),
               serialize::file_header_csv("cylinders", spec_text) +
                   serialize::histogram_to_csv(counts));
    std::ostringstream model_csv;
    model_csv << serialize::file_header_csv("cylinders", spec_text)
              << "pattern,probability\n";
    model_csv.precision(17);
    for (const auto& [key, prob] : formula) model_csv << key << "," << prob << "\n";
    write_file(fs::path(g.out_dir) /
                   ("cylinders_model_m" + std::to_string(m) + ".csv"),
               model_csv.str());
  }
  write_file(fs::path(g.out_dir) / "cylinders_verdict.json",
             serialize::file_header_json("cylinders", spec_text) + "\n" +
                 serialize::verdicts_to_json(verdicts) + "\n");
  bool all = true;
  for (const auto& v : verdicts) {
    all = all && v.pass;
    std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.description
              << " (worst |z| = " << v.statistic << ")\n";
  }
  return 0;
}

// --- verify -----------------------------------------------------------------

int cmd_verify(const GlobalOptions& g) {
  acceptance::Options options;
  options.quick = g.quick;
  options.seed = g.seed;
  options.log = &std::cout;
  const auto results = acceptance::run_all(options);

  json spec{{"command", "verify"}, {"quick", g.quick}, {"seed", g.seed}};
  json arr = json::array();
  for (const auto& r : results)
    arr.push_back({{"criterion", r.id},
                   {"description", r.name},
                   {"statistic", r.statistic},
                   {"threshold", r.threshold},
                   {"pass", r.pass},
                   {"samples", r.samples},
                   {"seconds", r.seconds},
                   {"detail", r.detail}});
  write_file(fs::path(g.out_dir) / "verify_report.json",
             serialize::file_header_json("verify", spec.dump()) + "\n" +
                 arr.dump(2) + "\n");
  if (!acceptance::all_pass(results)) {
    std::cerr << "verification failed\n";
    return 5;
  }
  std::cout << "verification passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"facilitated exclusion process simulator and exact solver"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "TOML configuration file");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions g;
  app.add_option("--out-dir", g.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_flag("--quick", g.quick, "reduced-scale run");

  SimulateOptions so;
  auto* sim = app.add_subcommand("simulate",
                                 "run trajectories; one JSON line per seed");
  sim->add_option("--model", so.model, "fasep | asep")->capture_default_str();
  sim->add_option("--topology", so.topology, "ring | window")
      ->capture_default_str();
  sim->add_option("--L", so.L, "number of sites")->capture_default_str();
  sim->add_option("--N", so.N, "particle count (uniform initial)");
  sim->add_option("--rho", so.rho, "Bernoulli density (window initial)");
  sim->add_option("--initial", so.initial, "explicit initial configuration");
  sim->add_option("--p", so.p_list, "right-jump rate(s)")->capture_default_str();
  sim->add_option("--scheme", so.scheme, "site | particle")
      ->capture_default_str();
  sim->add_option("--runs", so.runs, "number of seeds")->capture_default_str();
  sim->add_option("--t-end", so.t_end, "stop at this process time");
  sim->add_flag("--to-frozen", so.to_frozen, "run to absorption");
  sim->add_option("--max-events", so.max_events,
                  "absorption event cap (default 100 L^2)");
  sim->add_option("--snapshot-every", so.snapshot_every,
                  "snapshot interval in process time");

  ExactOptions eo;
  auto* ex = app.add_subcommand("exact",
                                "exact absorption / stationary distributions");
  ex->add_option("--L", eo.L, "ring size")->capture_default_str();
  ex->add_option("--N", eo.N, "particle count")->capture_default_str();
  ex->add_option("--grid", eo.grid, "sweep points as L,N (repeatable)");
  ex->add_option("--p", eo.p_list, "rational rates, e.g. 1/4 (repeatable)");
  ex->add_option("--cap", eo.cap, "state enumeration cap")->capture_default_str();
  ex->add_flag("--json", eo.emit_json, "also write JSON distributions");

  CoupleOptions co;
  auto* cp = app.add_subcommand("couple",
                                "coupled exclusion / facilitated simulation");
  cp->add_option("--L-hat", co.l_hat, "exclusion ring size")
      ->capture_default_str();
  cp->add_option("--N-hat", co.n_hat, "exclusion particle count")
      ->capture_default_str();
  cp->add_option("--p", co.p, "right-jump rate")->capture_default_str();
  cp->add_option("--t-end", co.t_end, "process time")->capture_default_str();
  cp->add_option("--snapshot-every", co.snapshot_every, "snapshot interval")
      ->capture_default_str();
  cp->add_option("--check-every", co.check_every,
                 "invariant check cadence in events")
      ->capture_default_str();

  GapsOptions go;
  auto* gp = app.add_subcommand("gaps",
                                "insulated-window gap histogram vs the law");
  gp->add_option("--rho", go.rho, "Bernoulli density, below 1/2")
      ->capture_default_str();
  gp->add_option("--p", go.p, "right-jump rate")->capture_default_str();
  gp->add_option("--scheme", go.scheme, "site | particle")
      ->capture_default_str();
  gp->add_option("--window", go.window, "window length before trimming")
      ->capture_default_str();
  gp->add_option("--target-gaps", go.target_gaps,
                 "harvest at least this many gaps");
  gp->add_option("--tail-at", go.tail_at, "pool gaps >= this value")
      ->capture_default_str();

  CylindersOptions yo;
  auto* cy = app.add_subcommand("cylinders",
                                "stationary pattern frequencies vs the formula");
  cy->add_option("--rho", yo.rho, "density above 1/2")->capture_default_str();
  cy->add_option("--L", yo.L, "ring size")->capture_default_str();
  cy->add_option("--p", yo.p, "right-jump rate")->capture_default_str();
  cy->add_option("--snapshots", yo.snapshots, "snapshot count");
  cy->add_option("--spacing", yo.spacing_factor,
                 "events between snapshots, in units of L")
      ->capture_default_str();
  cy->add_option("--stride", yo.stride, "window stride")->capture_default_str();
  cy->add_option("--m-max", yo.m_max, "largest pattern length")
      ->capture_default_str();

  auto* vf = app.add_subcommand("verify", "run the acceptance suite");

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(g, so);
    if (ex->parsed()) return cmd_exact(g, eo);
    if (cp->parsed()) return cmd_couple(g, co);
    if (gp->parsed()) return cmd_gaps(g, go);
    if (cy->parsed()) return cmd_cylinders(g, yo);
    if (vf->parsed()) return cmd_verify(g);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Spec:
        return 2;
      case ErrorKind::Dynamics:
        return 3;
      case ErrorKind::Capacity:
        return 4;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
