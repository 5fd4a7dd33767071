#pragma once

#include <map>
#include <string>
#include <vector>

#include "fasep/coupling.hpp"
#include "fasep/exact.hpp"
#include "fasep/kmc.hpp"
#include "fasep/rational.hpp"
#include "fasep/stats.hpp"

namespace fasep::serialize {

// Self-describing single-line JSON documents.
std::string run_record_to_json(const kmc::RunRecord& record);
kmc::RunRecord run_record_from_json(const std::string& text);

std::string coupled_state_to_json(const coupling::CoupledState& state);
std::string verdicts_to_json(const std::vector<stats::TestVerdict>& verdicts);

// Header record stamped at the top of every output file: artifact version
// plus an FNV-1a hash of the experiment spec the file was produced from.
std::string file_header_json(const std::string& command, const std::string& spec_text);
std::string file_header_csv(const std::string& command, const std::string& spec_text);

// "config,numerator,denominator" rows, keys sorted.
std::string distribution_to_csv(const std::map<std::string, Rational>& dist);
std::string exact_distribution_to_csv(const exact::ExactDistribution& dist,
                                      const exact::StateSpace& space);

// {"config": "num/den", ...}, exact strings.
std::string distribution_to_json(const std::map<std::string, Rational>& dist);
std::map<std::string, Rational> keyed_distribution(
    const exact::ExactDistribution& dist, const exact::StateSpace& space);

// "key,count" rows, keys sorted.
std::string histogram_to_csv(const stats::EmpiricalDistribution& hist);

// "n,probability" rows.
std::string gap_law_to_csv(const std::vector<double>& law);

const char* scheme_name(kmc::ClockScheme scheme);
kmc::ClockScheme scheme_from_name(const std::string& name);
const char* model_name(kmc::Model model);
kmc::Model model_from_name(const std::string& name);

}  // namespace fasep::serialize
