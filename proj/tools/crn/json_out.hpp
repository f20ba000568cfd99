#pragma once

#include <string>

#include <json.hpp>

#include "crn/detbal.hpp"
#include "crn/model.hpp"
#include "crn/stoch.hpp"
#include "report.hpp"

namespace crn::cli {

using nlohmann::ordered_json;

/// Compact JSON with every float written as %.17g (non-finite -> null).
std::string dump(const ordered_json& j, bool trailing_newline = true);

ordered_json state_json(const DetState& c);
ordered_json state_json(const DiscreteState& x);
ordered_json verdict_json(const Verdict& v);
ordered_json report_json(const StateBalanceReport& r);
ordered_json report_json(const MeasureBalanceReport& r);
ordered_json measure_json(const Measure& mu);
ordered_json component_json(const ComponentResult& c);
ordered_json component_analysis_json(const ComponentAnalysis& ca);
ordered_json system_report_json(const SystemReport& rep, const SpeciesTable& species);

}  // namespace crn::cli
