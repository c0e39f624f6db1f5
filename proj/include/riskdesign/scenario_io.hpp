#pragma once

#include <string>

#include <json.hpp>

#include "riskdesign/case_study.hpp"
#include "riskdesign/contract_solvers.hpp"
#include "riskdesign/core_model.hpp"
#include "riskdesign/monotonicity.hpp"
#include "riskdesign/moral_hazard.hpp"

namespace riskdesign {

using Json = nlohmann::ordered_json;

/// Doubles in reports are quantized to 12 significant digits so emitted
/// files are identical across platforms.
Json json_number(double value);

RiskMeasureSpec risk_spec_from_json(const Json& j);
Json risk_spec_to_json(const RiskMeasureSpec& spec);

Contract contract_from_json(const Json& j);
Json contract_to_json(const Contract& contract);

/// Parses a scenario document. Unknown fields anywhere are rejected with an
/// error naming the offending field.
Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::string& path);

Json solve_report_to_json(const SolveReport& report);
Json imh_report_to_json(const ImhReport& report);
Json design_step_to_json(const DesignStepReport& report);
Json check_result_to_json(const CheckResult& result);
Json case_study_to_json(const CaseStudyReport& report);

}  // namespace riskdesign
