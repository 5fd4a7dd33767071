#include "fasep/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fasep::exact {

StateSpace StateSpace::enumerate(std::int64_t L, std::int64_t N,
                                 std::int64_t site_cap) {
  if (L < 1 || L > site_cap || L > 31)
    throw TooLarge("state enumeration capped at L <= " +
                   std::to_string(std::min<std::int64_t>(site_cap, 31)) +
                   ", got L=" + std::to_string(L));
  if (N < 0 || N > L) throw InvalidCount("need 0 <= N <= L");
  StateSpace sp;
  sp.sites = L;
  sp.particles = N;
  const std::uint32_t limit = 1u << L;
  for (std::uint32_t s = 0; s < limit; ++s)
    if (std::popcount(s) == N) sp.states.push_back(s);
  return sp;
}

std::int64_t StateSpace::index_of(std::uint32_t state) const {
  const auto it = std::lower_bound(states.begin(), states.end(), state);
  if (it == states.end() || *it != state) return -1;
  return it - states.begin();
}

std::uint32_t StateSpace::rotate(std::uint32_t state, std::int64_t shift) const {
  const auto L = sites;
  shift %= L;
  if (shift < 0) shift += L;
  const std::uint32_t mask = (1u << L) - 1;
  return ((state << shift) | (state >> (L - shift))) & mask;
}

LatticeConfig StateSpace::config(std::int64_t index) const {
  const auto s = states[static_cast<std::size_t>(index)];
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(sites));
  for (std::int64_t i = 0; i < sites; ++i)
    bits[static_cast<std::size_t>(i)] = (s >> i) & 1u;
  return LatticeConfig(Topology::Ring, std::move(bits));
}

std::int64_t StateSpace::index_of_config(const LatticeConfig& cfg) const {
  if (cfg.topology() != Topology::Ring || cfg.size() != sites) return -1;
  std::uint32_t s = 0;
  for (std::int64_t i = 0; i < sites; ++i)
    if (cfg.occupied(i)) s |= 1u << i;
  return index_of(s);
}

Rational GeneratorMatrix::exit_rate(std::int64_t s) const {
  Rational total = 0;
  for (const auto& [_, rate] : rows[static_cast<std::size_t>(s)]) total += rate;
  return total;
}

static void add_rate(std::vector<std::pair<std::int32_t, Rational>>& row,
                     std::int64_t col, const Rational& rate) {
  for (auto& [c, r] : row) {
    if (c == col) {
      r += rate;
      return;
    }
  }
  row.emplace_back(static_cast<std::int32_t>(col), rate);
}

GeneratorMatrix build_generator(const StateSpace& space, const Rational& p,
                                Model model) {
  if (p < 0 || p > 1) throw DomainError("p must lie in [0, 1]");
  const Rational q = Rational(1) - p;
  GeneratorMatrix gen;
  gen.n = space.size();
  gen.rows.resize(static_cast<std::size_t>(gen.n));
  const auto L = space.sites;
  const auto bit = [&](std::uint32_t s, std::int64_t i) {
    i %= L;
    if (i < 0) i += L;
    return (s >> i) & 1u;
  };
  for (std::int64_t idx = 0; idx < gen.n; ++idx) {
    const auto s = space.states[static_cast<std::size_t>(idx)];
    for (std::int64_t b = 0; b < L; ++b) {
      const auto bn = (b + 1) % L;
      const std::uint32_t swapped = s ^ (1u << b) ^ (1u << bn);
      if (bit(s, b) && !bit(s, bn)) {
        const bool facilitated = model == Model::Asep || bit(s, b - 1);
        if (facilitated && p != 0) {
          add_rate(gen.rows[static_cast<std::size_t>(idx)],
                   space.index_of(swapped), p);
        }
      } else if (!bit(s, b) && bit(s, bn)) {
        const bool facilitated = model == Model::Asep || bit(s, b + 2);
        if (facilitated && q != 0) {
          add_rate(gen.rows[static_cast<std::size_t>(idx)],
                   space.index_of(swapped), q);
        }
      }
    }
  }
  return gen;
}

ExactDistribution uniform_distribution(const StateSpace& space) {
  return ExactDistribution(static_cast<std::size_t>(space.size()),
                           Rational(1, static_cast<unsigned long>(space.size())));
}

// Dense exact solve of A x = b, destructive.
static std::vector<Rational> solve_dense(std::vector<std::vector<Rational>> A,
                                         std::vector<Rational> b) {
  const auto n = static_cast<std::int64_t>(A.size());
  for (std::int64_t col = 0; col < n; ++col) {
    std::int64_t pivot = -1;
    for (std::int64_t r = col; r < n; ++r) {
      if (A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw std::logic_error("singular linear system");
    std::swap(A[static_cast<std::size_t>(col)], A[static_cast<std::size_t>(pivot)]);
    std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
    auto& prow = A[static_cast<std::size_t>(col)];
    const Rational inv = 1 / prow[static_cast<std::size_t>(col)];
    for (auto& v : prow) v *= inv;
    b[static_cast<std::size_t>(col)] *= inv;
    for (std::int64_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Rational f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      auto& row = A[static_cast<std::size_t>(r)];
      for (std::int64_t c = col; c < n; ++c)
        row[static_cast<std::size_t>(c)] -=
            f * prow[static_cast<std::size_t>(c)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  return b;
}

static void check_reaches_absorbing(const GeneratorMatrix& gen) {
  const auto n = gen.n;
  // reversed adjacency
  std::vector<std::vector<std::int32_t>> rev(static_cast<std::size_t>(n));
  std::vector<std::int8_t> reached(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> queue;
  for (std::int64_t s = 0; s < n; ++s) {
    if (gen.is_absorbing(s)) {
      reached[static_cast<std::size_t>(s)] = 1;
      queue.push_back(s);
    }
    for (const auto& [t, _] : gen.rows[static_cast<std::size_t>(s)])
      rev[static_cast<std::size_t>(t)].push_back(static_cast<std::int32_t>(s));
  }
  while (!queue.empty()) {
    const auto t = queue.back();
    queue.pop_back();
    for (const auto s : rev[static_cast<std::size_t>(t)]) {
      if (!reached[static_cast<std::size_t>(s)]) {
        reached[static_cast<std::size_t>(s)] = 1;
        queue.push_back(s);
      }
    }
  }
  for (std::int64_t s = 0; s < n; ++s)
    if (!reached[static_cast<std::size_t>(s)])
      throw NotAbsorbing(
          "state " + std::to_string(s) +
          " cannot reach any absorbing state (no frozen state reachable)");
}

namespace {

// Rotation-orbit partition; classes index into reps.
struct OrbitPartition {
  std::vector<std::int32_t> class_of;   // state index -> class
  std::vector<std::int64_t> rep;        // class -> representative state index
  std::vector<std::int64_t> orbit_size; // class -> orbit cardinality
};

OrbitPartition rotation_orbits(const StateSpace& space) {
  OrbitPartition part;
  const auto n = space.size();
  part.class_of.assign(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < n; ++i) {
    if (part.class_of[static_cast<std::size_t>(i)] >= 0) continue;
    const auto cls = static_cast<std::int32_t>(part.rep.size());
    std::int64_t size = 0;
    for (std::int64_t k = 0; k < space.sites; ++k) {
      const auto j = space.index_of(
          space.rotate(space.states[static_cast<std::size_t>(i)], k));
      if (part.class_of[static_cast<std::size_t>(j)] < 0) {
        part.class_of[static_cast<std::size_t>(j)] = cls;
        ++size;
      }
    }
    part.rep.push_back(i);
    part.orbit_size.push_back(size);
  }
  return part;
}

bool rotation_invariant(const ExactDistribution& initial, const StateSpace& space) {
  for (std::int64_t i = 0; i < space.size(); ++i) {
    const auto j =
        space.index_of(space.rotate(space.states[static_cast<std::size_t>(i)], 1));
    if (initial[static_cast<std::size_t>(i)] != initial[static_cast<std::size_t>(j)])
      return false;
  }
  return true;
}

// Hitting solve on an arbitrary partition compatible with the dynamics.
// Classes with an absorbing representative absorb; the rest are transient.
ExactDistribution lumped_absorption(const ExactDistribution& initial,
                                    const GeneratorMatrix& gen,
                                    const OrbitPartition& part) {
  const auto classes = static_cast<std::int64_t>(part.rep.size());
  std::vector<Rational> init_class(static_cast<std::size_t>(classes), Rational(0));
  for (std::size_t s = 0; s < initial.size(); ++s)
    init_class[static_cast<std::size_t>(part.class_of[s])] += initial[s];

  std::vector<std::int64_t> transient;  // class ids
  std::vector<std::int64_t> slot(static_cast<std::size_t>(classes), -1);
  for (std::int64_t c = 0; c < classes; ++c) {
    if (!gen.is_absorbing(part.rep[static_cast<std::size_t>(c)])) {
      slot[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(transient.size());
      transient.push_back(c);
    }
  }
  if (static_cast<std::int64_t>(transient.size()) > kExactSolveCap)
    throw TooLarge("exact absorption solve capped at " +
                   std::to_string(kExactSolveCap) +
                   " transient classes; use absorption_distribution_approx");

  // Embedded one-step matrix on classes, from each transient representative.
  const auto m = static_cast<std::int64_t>(transient.size());
  std::vector<std::vector<std::pair<std::int32_t, Rational>>> phat(
      static_cast<std::size_t>(m));
  for (std::int64_t ti = 0; ti < m; ++ti) {
    const auto c = transient[static_cast<std::size_t>(ti)];
    const auto s = part.rep[static_cast<std::size_t>(c)];
    const Rational exit = gen.exit_rate(s);
    for (const auto& [t, rate] : gen.rows[static_cast<std::size_t>(s)])
      add_rate(phat[static_cast<std::size_t>(ti)],
               part.class_of[static_cast<std::size_t>(t)], rate / exit);
  }

  // y^T (I - P_TT) = init_T, i.e. columns give the system.
  std::vector<std::vector<Rational>> A(
      static_cast<std::size_t>(m),
      std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)));
  std::vector<Rational> b(static_cast<std::size_t>(m), Rational(0));
  for (std::int64_t i = 0; i < m; ++i) {
    A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    b[static_cast<std::size_t>(i)] =
        init_class[static_cast<std::size_t>(transient[static_cast<std::size_t>(i)])];
  }
  for (std::int64_t i = 0; i < m; ++i) {
    for (const auto& [cls, prob] : phat[static_cast<std::size_t>(i)]) {
      const auto j = slot[static_cast<std::size_t>(cls)];
      if (j >= 0) A[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -= prob;
    }
  }
  const auto y = m > 0 ? solve_dense(std::move(A), std::move(b))
                       : std::vector<Rational>{};

  std::vector<Rational> mass(static_cast<std::size_t>(classes), Rational(0));
  for (std::int64_t c = 0; c < classes; ++c)
    if (slot[static_cast<std::size_t>(c)] < 0)
      mass[static_cast<std::size_t>(c)] = init_class[static_cast<std::size_t>(c)];
  for (std::int64_t i = 0; i < m; ++i)
    for (const auto& [cls, prob] : phat[static_cast<std::size_t>(i)])
      if (slot[static_cast<std::size_t>(cls)] < 0)
        mass[static_cast<std::size_t>(cls)] += y[static_cast<std::size_t>(i)] * prob;

  ExactDistribution out(initial.size(), Rational(0));
  for (std::size_t s = 0; s < initial.size(); ++s) {
    const auto c = part.class_of[s];
    if (slot[static_cast<std::size_t>(c)] < 0)
      out[s] = mass[static_cast<std::size_t>(c)] /
               static_cast<unsigned long>(part.orbit_size[static_cast<std::size_t>(c)]);
  }
  return out;
}

OrbitPartition trivial_partition(std::int64_t n) {
  OrbitPartition part;
  part.class_of.resize(static_cast<std::size_t>(n));
  part.rep.resize(static_cast<std::size_t>(n));
  part.orbit_size.assign(static_cast<std::size_t>(n), 1);
  for (std::int64_t i = 0; i < n; ++i) {
    part.class_of[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    part.rep[static_cast<std::size_t>(i)] = i;
  }
  return part;
}

}  // namespace

ExactDistribution absorption_distribution(const ExactDistribution& initial,
                                          const GeneratorMatrix& gen,
                                          const StateSpace& space) {
  if (static_cast<std::int64_t>(initial.size()) != gen.n)
    throw DomainError("initial distribution size mismatch");
  Rational total = 0;
  for (const auto& w : initial) {
    if (w < 0) throw DomainError("negative initial weight");
    total += w;
  }
  if (total != 1) throw DomainError("initial distribution must sum to 1");
  check_reaches_absorbing(gen);

  const auto part = rotation_invariant(initial, space)
                        ? rotation_orbits(space)
                        : trivial_partition(gen.n);
  auto out = lumped_absorption(initial, gen, part);

  Rational sum = 0;
  for (const auto& w : out) sum += w;
  if (sum != 1) throw std::logic_error("absorption weights do not sum to 1");
  return out;
}

namespace {

// Iterative Tarjan SCC.
std::vector<std::int32_t> scc_of(const GeneratorMatrix& gen) {
  const auto n = gen.n;
  std::vector<std::int32_t> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> index(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> low(static_cast<std::size_t>(n), 0);
  std::vector<std::int8_t> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<std::int32_t> stack;
  std::int32_t next_index = 0;
  std::int32_t comp_count = 0;

  struct Frame {
    std::int32_t v;
    std::size_t edge;
  };
  for (std::int64_t root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] >= 0) continue;
    std::vector<Frame> call;
    call.push_back({static_cast<std::int32_t>(root), 0});
    while (!call.empty()) {
      auto& fr = call.back();
      const auto v = fr.v;
      if (fr.edge == 0) {
        index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] =
            next_index++;
        stack.push_back(v);
        on_stack[static_cast<std::size_t>(v)] = 1;
      }
      const auto& row = gen.rows[static_cast<std::size_t>(v)];
      bool descended = false;
      while (fr.edge < row.size()) {
        const auto w = row[fr.edge].first;
        ++fr.edge;
        if (index[static_cast<std::size_t>(w)] < 0) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[static_cast<std::size_t>(w)])
          low[static_cast<std::size_t>(v)] = std::min(
              low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
      }
      if (descended) continue;
      if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
        while (true) {
          const auto w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = comp_count;
          if (w == v) break;
        }
        ++comp_count;
      }
      call.pop_back();
      if (!call.empty()) {
        const auto parent = call.back().v;
        low[static_cast<std::size_t>(parent)] =
            std::min(low[static_cast<std::size_t>(parent)],
                     low[static_cast<std::size_t>(v)]);
      }
    }
  }
  return comp;
}

}  // namespace

StationaryResult stationary_distribution(const GeneratorMatrix& gen,
                                         const StateSpace& space) {
  (void)space;
  const auto n = gen.n;
  const auto comp = scc_of(gen);
  std::int32_t comp_count = 0;
  for (const auto c : comp) comp_count = std::max(comp_count, c + 1);

  std::vector<std::int8_t> has_exit(static_cast<std::size_t>(comp_count), 0);
  for (std::int64_t s = 0; s < n; ++s)
    for (const auto& [t, _] : gen.rows[static_cast<std::size_t>(s)])
      if (comp[static_cast<std::size_t>(s)] != comp[static_cast<std::size_t>(t)])
        has_exit[static_cast<std::size_t>(comp[static_cast<std::size_t>(s)])] = 1;

  std::vector<std::vector<std::int64_t>> recurrent;
  {
    std::vector<std::vector<std::int64_t>> members(
        static_cast<std::size_t>(comp_count));
    for (std::int64_t s = 0; s < n; ++s)
      members[static_cast<std::size_t>(comp[static_cast<std::size_t>(s)])].push_back(s);
    for (std::int32_t c = 0; c < comp_count; ++c)
      if (!has_exit[static_cast<std::size_t>(c)])
        recurrent.push_back(std::move(members[static_cast<std::size_t>(c)]));
  }

  StationaryResult result;
  if (recurrent.size() != 1) {
    result.kind = StationaryResult::Kind::AbsorbingSet;
    for (const auto& cls : recurrent) {
      if (cls.size() != 1)
        throw std::logic_error(
            "multiple recurrent classes with a non-singleton class");
      result.absorbing_states.push_back(cls.front());
    }
    std::sort(result.absorbing_states.begin(), result.absorbing_states.end());
    return result;
  }

  const auto& cls = recurrent.front();
  const auto r = static_cast<std::int64_t>(cls.size());
  if (r > kExactSolveCap)
    throw TooLarge("exact stationary solve capped at " +
                   std::to_string(kExactSolveCap) +
                   " recurrent states; use stationary_distribution_approx");
  std::vector<std::int64_t> slot(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < r; ++i)
    slot[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])] = i;

  // pi Q = 0 restricted to the class, one equation replaced by sum(pi) = 1.
  std::vector<std::vector<Rational>> A(
      static_cast<std::size_t>(r),
      std::vector<Rational>(static_cast<std::size_t>(r), Rational(0)));
  std::vector<Rational> b(static_cast<std::size_t>(r), Rational(0));
  for (std::int64_t i = 0; i < r; ++i) {
    const auto s = cls[static_cast<std::size_t>(i)];
    A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] -= gen.exit_rate(s);
    for (const auto& [t, rate] : gen.rows[static_cast<std::size_t>(s)]) {
      const auto j = slot[static_cast<std::size_t>(t)];
      if (j >= 0) A[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] += rate;
    }
  }
  for (std::int64_t i = 0; i < r; ++i)
    A[0][static_cast<std::size_t>(i)] = 1;
  b[0] = 1;
  auto pi = solve_dense(std::move(A), std::move(b));

  result.kind = StationaryResult::Kind::Unique;
  result.distribution.assign(static_cast<std::size_t>(n), Rational(0));
  for (std::int64_t i = 0; i < r; ++i) {
    if (pi[static_cast<std::size_t>(i)] < 0)
      throw std::logic_error("negative stationary weight");
    result.distribution[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])] =
        pi[static_cast<std::size_t>(i)];
  }
  return result;
}

std::vector<double> absorption_distribution_approx(
    const std::vector<double>& initial, const GeneratorMatrix& gen) {
  const auto n = static_cast<std::size_t>(gen.n);
  if (initial.size() != n) throw DomainError("initial distribution size mismatch");
  check_reaches_absorbing(gen);

  // embedded jump probabilities as doubles
  std::vector<std::vector<std::pair<std::int32_t, double>>> jump(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (gen.is_absorbing(static_cast<std::int64_t>(s))) continue;
    const double exit = gen.exit_rate(static_cast<std::int64_t>(s)).get_d();
    for (const auto& [t, rate] : gen.rows[s])
      jump[s].emplace_back(t, rate.get_d() / exit);
  }

  // expected-visits sweep: y <- init_T + y P_TT
  std::vector<double> visits(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    if (!gen.is_absorbing(static_cast<std::int64_t>(s))) visits[s] = initial[s];
  std::vector<double> next(n, 0.0);
  for (std::int64_t iter = 0; iter < 1000000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s)
      if (!gen.is_absorbing(static_cast<std::int64_t>(s))) next[s] = initial[s];
    double delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (visits[s] == 0.0) continue;
      for (const auto& [t, prob] : jump[s])
        if (!gen.is_absorbing(t)) next[static_cast<std::size_t>(t)] +=
            visits[s] * prob;
    }
    for (std::size_t s = 0; s < n; ++s) delta += std::abs(next[s] - visits[s]);
    visits.swap(next);
    if (delta < 1e-12) break;
  }

  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    if (gen.is_absorbing(static_cast<std::int64_t>(s))) out[s] = initial[s];
  for (std::size_t s = 0; s < n; ++s) {
    if (visits[s] == 0.0) continue;
    for (const auto& [t, prob] : jump[s])
      if (gen.is_absorbing(t)) out[static_cast<std::size_t>(t)] +=
          visits[s] * prob;
  }
  return out;
}

std::vector<double> stationary_distribution_approx(const GeneratorMatrix& gen) {
  const auto comp = scc_of(gen);
  std::int32_t comp_count = 0;
  for (const auto c : comp) comp_count = std::max(comp_count, c + 1);
  std::vector<std::int8_t> has_exit(static_cast<std::size_t>(comp_count), 0);
  for (std::int64_t s = 0; s < gen.n; ++s)
    for (const auto& [t, _] : gen.rows[static_cast<std::size_t>(s)])
      if (comp[static_cast<std::size_t>(s)] != comp[static_cast<std::size_t>(t)])
        has_exit[static_cast<std::size_t>(comp[static_cast<std::size_t>(s)])] = 1;
  std::int32_t recurrent = -1;
  for (std::int32_t c = 0; c < comp_count; ++c) {
    if (has_exit[static_cast<std::size_t>(c)]) continue;
    if (recurrent >= 0)
      throw NotAbsorbing("several recurrent classes; no unique stationary state");
    recurrent = c;
  }

  const auto n = static_cast<std::size_t>(gen.n);
  std::vector<double> exit(n, 0.0);
  double lambda = 0.0;
  std::size_t class_size = 0;
  for (std::size_t s = 0; s < n; ++s) {
    exit[s] = gen.exit_rate(static_cast<std::int64_t>(s)).get_d();
    if (comp[s] == recurrent) {
      lambda = std::max(lambda, exit[s]);
      ++class_size;
    }
  }

  // lazy uniformized chain restricted to the recurrent class
  std::vector<double> pi(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    if (comp[s] == recurrent) pi[s] = 1.0 / static_cast<double>(class_size);
  if (lambda == 0.0) return pi;  // a single absorbing state
  std::vector<double> next(n, 0.0);
  for (std::int64_t iter = 0; iter < 2000000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      if (pi[s] == 0.0) continue;
      next[s] += pi[s] * (0.5 + 0.5 * (1.0 - exit[s] / lambda));
      for (const auto& [t, rate] : gen.rows[s])
        next[static_cast<std::size_t>(t)] +=
            pi[s] * 0.5 * rate.get_d() / lambda;
    }
    double delta = 0.0;
    for (std::size_t s = 0; s < n; ++s) delta += std::abs(next[s] - pi[s]);
    pi.swap(next);
    if (delta < 1e-12) break;
  }
  return pi;
}

std::vector<double> marginal_at_time(const std::vector<double>& initial,
                                     const GeneratorMatrix& gen, double t) {
  if (gen.n > 10000) throw TooLarge("marginal_at_time capped at 10^4 states");
  if (static_cast<std::int64_t>(initial.size()) != gen.n)
    throw DomainError("initial distribution size mismatch");
  if (t < 0.0) throw DomainError("time must be non-negative");

  const auto n = static_cast<std::size_t>(gen.n);
  std::vector<double> exit(n, 0.0);
  double lambda = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    exit[s] = gen.exit_rate(static_cast<std::int64_t>(s)).get_d();
    lambda = std::max(lambda, exit[s]);
  }
  if (lambda * t == 0.0) return initial;

  // v P, with P = I + Q / lambda
  const auto apply = [&](const std::vector<double>& v) {
    std::vector<double> out(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      out[s] += v[s] * (1.0 - exit[s] / lambda);
      if (v[s] == 0.0) continue;
      for (const auto& [tgt, rate] : gen.rows[s])
        out[static_cast<std::size_t>(tgt)] += v[s] * rate.get_d() / lambda;
    }
    return out;
  };

  const double mean = lambda * t;
  std::vector<double> v = initial;
  std::vector<double> acc(n, 0.0);
  double weight = std::exp(-mean);  // Poisson(mean, 0); fine for mean < ~700
  double cumulative = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    if (k > 0) {
      v = apply(v);
      weight *= mean / static_cast<double>(k);
    }
    for (std::size_t s = 0; s < n; ++s) acc[s] += weight * v[s];
    cumulative += weight;
    if (1.0 - cumulative < 1e-14 && k >= static_cast<std::uint64_t>(mean)) break;
    if (k > static_cast<std::uint64_t>(mean + 60.0 * std::sqrt(mean) + 200.0))
      break;
  }
  return acc;
}

}  // namespace fasep::exact
