#include "fasep/lattice.hpp"

#include <algorithm>

namespace fasep {

LatticeConfig::LatticeConfig(Topology topology, std::vector<std::uint8_t> sites)
    : topology_(topology), sites_(std::move(sites)) {
  if (sites_.empty()) throw DomainError("configuration needs at least one site");
  for (auto s : sites_)
    if (s > 1) throw DomainError("site values must be 0 or 1");
}

static std::vector<std::uint8_t> bits_of(std::string_view text) {
  std::vector<std::uint8_t> sites;
  sites.reserve(text.size());
  for (char c : text) {
    if (c == '0')
      sites.push_back(0);
    else if (c == '1')
      sites.push_back(1);
    else
      throw ParseError("configuration bits must be 0/1, got '" +
                       std::string(1, c) + "'");
  }
  return sites;
}

LatticeConfig LatticeConfig::ring(std::string_view bits) {
  return LatticeConfig(Topology::Ring, bits_of(bits));
}

LatticeConfig LatticeConfig::window(std::string_view bits) {
  return LatticeConfig(Topology::ClosedWindow, bits_of(bits));
}

LatticeConfig LatticeConfig::parse(std::string_view text) {
  constexpr std::string_view kRing = "ring:";
  constexpr std::string_view kWindow = "window:";
  if (text.substr(0, kRing.size()) == kRing) return ring(text.substr(kRing.size()));
  if (text.substr(0, kWindow.size()) == kWindow)
    return window(text.substr(kWindow.size()));
  throw ParseError("configuration must start with 'ring:' or 'window:'");
}

std::string LatticeConfig::to_string() const {
  std::string out = topology_ == Topology::Ring ? "ring:" : "window:";
  out.reserve(out.size() + sites_.size());
  for (auto s : sites_) out.push_back(s ? '1' : '0');
  return out;
}

void LatticeConfig::set(std::int64_t i, bool value) {
  const auto L = size();
  if (topology_ == Topology::Ring) {
    i %= L;
    if (i < 0) i += L;
  } else if (i < 0 || i >= L) {
    throw DomainError("window site index out of range");
  }
  sites_[static_cast<std::size_t>(i)] = value ? 1 : 0;
}

LatticeConfig LatticeConfig::rotated(std::int64_t shift) const {
  if (topology_ != Topology::Ring) throw DomainError("rotation needs a ring");
  const auto L = size();
  shift %= L;
  if (shift < 0) shift += L;
  std::vector<std::uint8_t> out(sites_.size());
  for (std::int64_t i = 0; i < L; ++i)
    out[static_cast<std::size_t>((i + shift) % L)] =
        sites_[static_cast<std::size_t>(i)];
  return LatticeConfig(topology_, std::move(out));
}

std::int64_t particle_count(const LatticeConfig& cfg) {
  std::int64_t n = 0;
  for (auto s : cfg.sites()) n += s;
  return n;
}

bool is_frozen(const LatticeConfig& cfg) {
  const auto L = cfg.size();
  const auto last = cfg.topology() == Topology::Ring ? L : L - 1;
  for (std::int64_t i = 0; i < last; ++i)
    if (cfg.occupied(i) && cfg.occupied(i + 1)) return false;
  return true;
}

bool is_no_adjacent_holes(const LatticeConfig& cfg) {
  const auto L = cfg.size();
  const auto last = cfg.topology() == Topology::Ring ? L : L - 1;
  for (std::int64_t i = 0; i < last; ++i)
    if (!cfg.occupied(i) && !cfg.occupied(i + 1)) return false;
  return true;
}

ComponentList components(const LatticeConfig& cfg) {
  ComponentList out;
  std::vector<std::int64_t> particles;
  const auto L = cfg.size();
  for (std::int64_t i = 0; i < L; ++i)
    if (cfg.occupied(i)) particles.push_back(i);
  if (particles.empty()) return out;

  const auto n = static_cast<std::int64_t>(particles.size());
  if (cfg.topology() == Topology::ClosedWindow) {
    // Two consecutive particles share a component iff fewer than two holes
    // separate them; window ends count as empty padding.
    Component cur{particles[0], particles[0]};
    for (std::int64_t k = 1; k < n; ++k) {
      if (particles[k] - particles[k - 1] <= 2) {
        cur.last = particles[k];
      } else {
        out.intervals.push_back(cur);
        cur = {particles[k], particles[k]};
      }
    }
    out.intervals.push_back(cur);
    return out;
  }

  // Ring: find a particle whose predecessor gap holds a 00 pair; if none
  // exists the whole ring is one component spanning all particles.
  std::int64_t start = -1;
  for (std::int64_t k = 0; k < n; ++k) {
    const auto prev = particles[(k + n - 1) % n];
    const auto gap = (particles[k] - prev + L) % L;
    const auto zeros = (n == 1) ? L - 1 : gap - 1;
    if (zeros >= 2) {
      start = k;
      break;
    }
  }
  if (start < 0) {
    out.intervals.push_back({particles.front(), particles.back()});
    return out;
  }

  // Walk particles cyclically from the first separator, tracking unwrapped
  // positions; normalize each component's first site back into [0, L).
  std::int64_t pos = particles[static_cast<std::size_t>(start)];
  std::int64_t comp_first = pos;
  std::int64_t comp_last = pos;
  auto emit = [&] {
    const std::int64_t first_mod = ((comp_first % L) + L) % L;
    out.intervals.push_back({first_mod, first_mod + (comp_last - comp_first)});
  };
  for (std::int64_t step = 1; step < n; ++step) {
    const auto k = (start + step) % n;
    const auto prev = particles[static_cast<std::size_t>((k + n - 1) % n)];
    const auto gap = (particles[static_cast<std::size_t>(k)] - prev + L) % L;
    pos += gap;
    if (gap <= 2) {
      comp_last = pos;
    } else {
      emit();
      comp_first = comp_last = pos;
    }
  }
  emit();
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const Component& a, const Component& b) { return a.first < b.first; });
  return out;
}

DensityValue density(const LatticeConfig& cfg) {
  DensityValue d;
  d.particles = particle_count(cfg);
  d.sites = cfg.size();
  d.ratio = make_rational(d.particles, d.sites);
  return d;
}

}  // namespace fasep
