#pragma once

// JSON and CSV encodings of plans, chain outcomes, search traces and cost
// reports. Reals are written with 15 significant digits; the layouts are
// described in docs/formats.md.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qbs/analysis.hpp"
#include "qbs/differentiator.hpp"
#include "qbs/subdiv.hpp"

namespace qbs {

using Json = nlohmann::json;

// "%.15g" in the C locale.
std::string format_sig15(double value);
// "%.15f", with negative zero printed as zero.
std::string format_fixed15(double value);
// The double nearest to format_sig15(value).
double round_sig15(double value);

Json plan_to_json(const DifferentiatorPlan& plan);
DifferentiatorPlan plan_from_json(const Json& doc);

Json chain_to_json(const ChainOutcome& outcome);

Json trace_to_json(const SearchTrace& trace, const SearchConfig& config,
                   const OracleSpec& oracle);

Json report_to_json(const CostReport& report);
std::string report_to_csv(const CostReport& report);
CostReport report_from_json(const Json& doc);

Json joint_report_to_json(const JointModeReport& report);

}  // namespace qbs
