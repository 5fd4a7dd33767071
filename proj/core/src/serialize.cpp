#include "fasep/serialize.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "fasep/version.hpp"

namespace fasep::serialize {

using nlohmann::json;

const char* scheme_name(kmc::ClockScheme scheme) {
  return scheme == kmc::ClockScheme::SiteAssociated ? "site" : "particle";
}

kmc::ClockScheme scheme_from_name(const std::string& name) {
  if (name == "site" || name == "sapp") return kmc::ClockScheme::SiteAssociated;
  if (name == "particle" || name == "papp")
    return kmc::ClockScheme::ParticleAssociated;
  throw ParseError("unknown clock scheme: " + name);
}

const char* model_name(kmc::Model model) {
  return model == kmc::Model::Fasep ? "fasep" : "asep";
}

kmc::Model model_from_name(const std::string& name) {
  if (name == "fasep") return kmc::Model::Fasep;
  if (name == "asep") return kmc::Model::Asep;
  throw ParseError("unknown model: " + name);
}

std::string run_record_to_json(const kmc::RunRecord& record) {
  json j;
  j["seed"] = record.seed;
  j["p"] = record.params.p;
  j["scheme"] = scheme_name(record.scheme);
  j["model"] = model_name(record.model);
  j["initial"] = record.initial.to_string();
  j["final"] = record.final_config.to_string();
  j["events"] = record.events;
  j["process_time"] = record.process_time;
  j["bond_current"] = record.bond_current;
  j["absorbed"] = record.absorbed;
  if (!record.snapshots.empty()) {
    json snaps = json::array();
    for (const auto& s : record.snapshots)
      snaps.push_back({{"t", s.time}, {"config", s.config.to_string()}});
    j["snapshots"] = std::move(snaps);
  }
  return j.dump();
}

kmc::RunRecord run_record_from_json(const std::string& text) {
  const auto j = json::parse(text);
  kmc::RunRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.params.p = j.at("p").get<double>();
  r.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  r.model = model_from_name(j.at("model").get<std::string>());
  r.initial = LatticeConfig::parse(j.at("initial").get<std::string>());
  r.final_config = LatticeConfig::parse(j.at("final").get<std::string>());
  r.events = j.at("events").get<std::uint64_t>();
  r.process_time = j.at("process_time").get<double>();
  r.bond_current = j.at("bond_current").get<std::int64_t>();
  r.absorbed = j.at("absorbed").get<bool>();
  if (j.contains("snapshots")) {
    for (const auto& s : j.at("snapshots"))
      r.snapshots.push_back(
          {s.at("t").get<double>(),
           LatticeConfig::parse(s.at("config").get<std::string>())});
  }
  return r;
}

std::string coupled_state_to_json(const coupling::CoupledState& state) {
  json j;
  j["t"] = state.time;
  j["asep"] = state.asep.to_string();
  j["fasep"] = state.fasep.to_string();
  j["asep_positions"] = state.asep_positions;
  j["true_positions"] = state.true_positions;
  j["rotation_offset"] = state.rotation_offset;
  return j.dump();
}

std::string verdicts_to_json(const std::vector<stats::TestVerdict>& verdicts) {
  json arr = json::array();
  for (const auto& v : verdicts)
    arr.push_back({{"description", v.description},
                   {"statistic", v.statistic},
                   {"threshold", v.threshold},
                   {"pass", v.pass},
                   {"samples", v.samples}});
  return arr.dump(2);
}

static std::string spec_hash_hex(const std::string& spec_text) {
  std::ostringstream os;
  os << std::hex << fnv1a64(spec_text);
  return os.str();
}

std::string file_header_json(const std::string& command,
                             const std::string& spec_text) {
  json j;
  j["artifact"] = "fasep";
  j["version"] = std::string(kVersion);
  j["command"] = command;
  j["spec_hash"] = spec_hash_hex(spec_text);
  return j.dump();
}

std::string file_header_csv(const std::string& command,
                            const std::string& spec_text) {
  return "# fasep " + std::string(kVersion) + " command=" + command +
         " spec_hash=" + spec_hash_hex(spec_text) + "\n";
}

std::string distribution_to_csv(const std::map<std::string, Rational>& dist) {
  std::ostringstream os;
  os << "config,numerator,denominator\n";
  for (const auto& [key, w] : dist)
    os << key << "," << w.get_num().get_str() << "," << w.get_den().get_str()
       << "\n";
  return os.str();
}

std::map<std::string, Rational> keyed_distribution(
    const exact::ExactDistribution& dist, const exact::StateSpace& space) {
  std::map<std::string, Rational> by_key;
  for (std::int64_t i = 0; i < space.size(); ++i) {
    const auto& w = dist[static_cast<std::size_t>(i)];
    if (w != 0) by_key[space.config(i).to_string()] = w;
  }
  return by_key;
}

std::string exact_distribution_to_csv(const exact::ExactDistribution& dist,
                                      const exact::StateSpace& space) {
  return distribution_to_csv(keyed_distribution(dist, space));
}

std::string distribution_to_json(const std::map<std::string, Rational>& dist) {
  json j = json::object();
  for (const auto& [key, w] : dist) j[key] = w.get_str();
  return j.dump(2);
}

std::string histogram_to_csv(const stats::EmpiricalDistribution& hist) {
  std::ostringstream os;
  os << "key,count\n";
  std::vector<std::pair<std::string, std::uint64_t>> rows(hist.counts.begin(),
                                                          hist.counts.end());
  // numeric keys sort numerically, everything else lexicographically
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    const bool na = !a.first.empty() &&
                    a.first.find_first_not_of("0123456789") == std::string::npos;
    const bool nb = !b.first.empty() &&
                    b.first.find_first_not_of("0123456789") == std::string::npos;
    if (na && nb) {
      if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
      return a.first < b.first;
    }
    if (na != nb) return na;
    return a.first < b.first;
  });
  for (const auto& [key, count] : rows) os << key << "," << count << "\n";
  return os.str();
}

std::string gap_law_to_csv(const std::vector<double>& law) {
  std::ostringstream os;
  os << "n,probability\n";
  os.precision(17);
  for (std::size_t n = 0; n < law.size(); ++n) os << n << "," << law[n] << "\n";
  return os.str();
}

}  // namespace fasep::serialize
