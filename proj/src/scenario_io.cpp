#include "riskdesign/scenario_io.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "riskdesign/numerics.hpp"

namespace riskdesign {

namespace {

void reject_unknown_fields(const Json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw std::invalid_argument(where + ": unknown field \"" + item.key() + "\"");
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw std::invalid_argument(where + ": missing field \"" + key + "\"");
    return j.at(key);
}

std::vector<double> number_list(const Json& j, const std::string& where) {
    if (!j.is_array()) throw std::invalid_argument(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) {
        if (!e.is_number()) throw std::invalid_argument(where + ": expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Json number_array(const std::vector<double>& v) {
    Json arr = Json::array();
    for (double e : v) arr.push_back(json_number(e));
    return arr;
}

}  // namespace

Json json_number(double value) {
    return std::strtod(format_double(value).c_str(), nullptr);
}

RiskMeasureSpec risk_spec_from_json(const Json& j) {
    reject_unknown_fields(j, {"kind", "kappa", "alpha"}, "types[]");
    std::string kind = require(j, "kind", "types[]").get<std::string>();
    if (kind == "expectation") {
        reject_unknown_fields(j, {"kind"}, "types[] (expectation)");
        return RiskMeasureSpec::expectation();
    }
    if (kind == "semideviation") {
        auto spec =
            RiskMeasureSpec::semideviation(require(j, "kappa", "types[]").get<double>());
        spec.validate();
        return spec;
    }
    if (kind == "avar") {
        auto spec = RiskMeasureSpec::avar(require(j, "alpha", "types[]").get<double>());
        spec.validate();
        return spec;
    }
    throw std::invalid_argument("types[]: unknown kind \"" + kind + "\"");
}

Json risk_spec_to_json(const RiskMeasureSpec& spec) {
    Json j;
    j["kind"] = spec.kind_name();
    if (spec.kind == RiskKind::AbsSemiDeviation) j["kappa"] = json_number(spec.kappa);
    if (spec.kind == RiskKind::AverageValueAtRisk) j["alpha"] = json_number(spec.alpha);
    return j;
}

Contract contract_from_json(const Json& j) {
    std::string kind = require(j, "kind", "contract").get<std::string>();
    if (kind == "linear") {
        reject_unknown_fields(j, {"kind", "c", "p"}, "contract");
        return LinearContract{require(j, "c", "contract").get<double>(),
                              require(j, "p", "contract").get<double>()};
    }
    if (kind == "tabular") {
        reject_unknown_fields(j, {"kind", "w"}, "contract");
        return TabularContract{number_list(require(j, "w", "contract"), "contract.w")};
    }
    throw std::invalid_argument("contract: unknown kind \"" + kind + "\"");
}

Json contract_to_json(const Contract& contract) {
    Json j;
    if (const auto* lin = std::get_if<LinearContract>(&contract)) {
        j["kind"] = "linear";
        j["c"] = json_number(lin->coverage_fraction);
        j["p"] = json_number(lin->premium);
        return j;
    }
    j["kind"] = "tabular";
    j["w"] = number_array(std::get<TabularContract>(contract).coverage);
    return j;
}

Scenario scenario_from_json(const Json& j) {
    reject_unknown_fields(j,
                          {"grid", "reference_probs", "family", "types", "mu0", "disutility",
                           "U_bar", "gamma", "action_set", "contract"},
                          "scenario");

    OutcomeGrid grid{number_list(require(j, "grid", "scenario"), "grid")};

    const Json& fam = require(j, "family", "scenario");
    std::string fam_kind = require(fam, "kind", "family").get<std::string>();
    ActionFamily family = [&] {
        if (fam_kind == "linear") {
            reject_unknown_fields(fam, {"kind", "p_L", "p_H"}, "family");
            return ActionFamily::linear(number_list(require(fam, "p_L", "family"), "family.p_L"),
                                        number_list(require(fam, "p_H", "family"), "family.p_H"));
        }
        if (fam_kind == "table") {
            reject_unknown_fields(fam, {"kind", "actions", "rows"}, "family");
            std::vector<std::vector<double>> rows;
            for (const auto& row : require(fam, "rows", "family"))
                rows.push_back(number_list(row, "family.rows[]"));
            return ActionFamily::table(
                number_list(require(fam, "actions", "family"), "family.actions"), std::move(rows));
        }
        throw std::invalid_argument("family: unknown kind \"" + fam_kind + "\"");
    }();

    OutcomeModel model{std::move(grid),
                       number_list(require(j, "reference_probs", "scenario"), "reference_probs"),
                       std::move(family)};

    std::vector<RiskMeasureSpec> types;
    for (const auto& t : require(j, "types", "scenario")) types.push_back(risk_spec_from_json(t));

    const Json& dis = require(j, "disutility", "scenario");
    reject_unknown_fields(dis, {"g", "power", "m"}, "disutility");
    DisutilitySpec disutility;
    std::string g = require(dis, "g", "disutility").get<std::string>();
    if (g == "identity")
        disutility.shape = DisutilityShape::Identity;
    else if (g == "quadratic")
        disutility.shape = DisutilityShape::Quadratic;
    else if (g == "power")
        disutility.shape = DisutilityShape::Power;
    else
        throw std::invalid_argument("disutility: unknown g \"" + g + "\"");
    if (dis.contains("power")) disutility.power = dis.at("power").get<double>();
    disutility.investment_cost = require(dis, "m", "disutility").get<double>();

    const Json& act = require(j, "action_set", "scenario");
    std::string act_kind = require(act, "kind", "action_set").get<std::string>();
    ActionSet actions = [&] {
        if (act_kind == "discrete") {
            reject_unknown_fields(act, {"kind", "values"}, "action_set");
            return ActionSet::discrete(
                number_list(require(act, "values", "action_set"), "action_set.values"));
        }
        if (act_kind == "interval") {
            reject_unknown_fields(act, {"kind", "lo", "hi"}, "action_set");
            return ActionSet::interval(require(act, "lo", "action_set").get<double>(),
                                       require(act, "hi", "action_set").get<double>());
        }
        throw std::invalid_argument("action_set: unknown kind \"" + act_kind + "\"");
    }();

    Scenario scenario{std::move(model),
                      TypeSpace{std::move(types)},
                      TypeDistribution{number_list(require(j, "mu0", "scenario"), "mu0")},
                      disutility,
                      require(j, "U_bar", "scenario").get<double>(),
                      require(j, "gamma", "scenario").get<double>(),
                      std::move(actions),
                      std::nullopt};
    if (j.contains("contract")) scenario.contract = contract_from_json(j.at("contract"));
    scenario.validate();
    return scenario;
}

Json scenario_to_json(const Scenario& scenario) {
    Json j;
    j["grid"] = number_array(scenario.model.grid.points);
    j["reference_probs"] = number_array(scenario.model.reference_probs);
    Json fam;
    if (scenario.model.family.kind == FamilyKind::Linear) {
        fam["kind"] = "linear";
        fam["p_L"] = number_array(scenario.model.family.low);
        fam["p_H"] = number_array(scenario.model.family.high);
    } else {
        fam["kind"] = "table";
        fam["actions"] = number_array(scenario.model.family.actions);
        Json rows = Json::array();
        for (const auto& row : scenario.model.family.rows) rows.push_back(number_array(row));
        fam["rows"] = rows;
    }
    j["family"] = fam;
    Json types = Json::array();
    for (const auto& t : scenario.types.types) types.push_back(risk_spec_to_json(t));
    j["types"] = types;
    j["mu0"] = number_array(scenario.mu0.weights);
    Json dis;
    dis["g"] = scenario.disutility.shape == DisutilityShape::Identity    ? "identity"
               : scenario.disutility.shape == DisutilityShape::Quadratic ? "quadratic"
                                                                         : "power";
    if (scenario.disutility.shape == DisutilityShape::Power)
        dis["power"] = json_number(scenario.disutility.power);
    dis["m"] = json_number(scenario.disutility.investment_cost);
    j["disutility"] = dis;
    j["U_bar"] = json_number(scenario.u_bar);
    j["gamma"] = json_number(scenario.gamma);
    Json act;
    if (scenario.actions.kind == ActionSetKind::Discrete) {
        act["kind"] = "discrete";
        act["values"] = number_array(scenario.actions.values);
    } else {
        act["kind"] = "interval";
        act["lo"] = json_number(scenario.actions.lo);
        act["hi"] = json_number(scenario.actions.hi);
    }
    j["action_set"] = act;
    if (scenario.contract) j["contract"] = contract_to_json(*scenario.contract);
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("scenario file is not valid JSON: " + std::string(e.what()));
    }
    return scenario_from_json(j);
}

Json solve_report_to_json(const SolveReport& report) {
    Json j;
    j["contract"] = contract_to_json(report.contract);
    j["action"] = json_number(report.action);
    j["objective"] = json_number(report.objective);
    j["ir_slack"] = json_number(report.ir_slack);
    j["alpha"] = json_number(report.alpha);
    j["beta"] = json_number(report.beta);
    j["alpha_residual_norm"] = json_number(report.alpha_residual_norm);
    j["mu"] = number_array(report.mu.weights);
    j["flags"] = report.flags;
    return j;
}

Json imh_report_to_json(const ImhReport& report) {
    Json j;
    j["benchmark_action"] = json_number(report.benchmark_action);
    j["agent_action"] = json_number(report.agent_action);
    j["imh"] = json_number(report.intensity);
    if (report.grad_available)
        j["grad"] = number_array(report.grad);
    else
        j["grad_error"] = report.grad_error;
    j["b_star"] = number_array(report.dual_potential);
    j["direction_exists"] = report.direction.has_value();
    if (report.direction)
        j["direction"] = number_array(*report.direction);
    else
        j["direction"] = nullptr;
    j["benchmark"] = solve_report_to_json(report.benchmark);
    return j;
}

Json design_step_to_json(const DesignStepReport& report) {
    Json j;
    j["accepted"] = report.accepted;
    j["no_op"] = report.no_op;
    j["step_requested"] = json_number(report.step_requested);
    j["step_used"] = json_number(report.step_used);
    j["halvings"] = report.halvings;
    j["imh_before"] = json_number(report.intensity_before);
    j["imh_after"] = json_number(report.intensity_after);
    j["w1_before"] = json_number(report.w1_before);
    j["w1_after"] = json_number(report.w1_after);
    j["mu_before"] = number_array(report.mu_before);
    j["mu_after"] = number_array(report.mu_after);
    return j;
}

Json check_result_to_json(const CheckResult& result) {
    Json j;
    j["name"] = result.name;
    j["status"] = result.status == CheckStatus::Pass          ? "pass"
                  : result.status == CheckStatus::Fail        ? "fail"
                                                              : "inconclusive";
    j["values"] = number_array(result.values);
    j["notes"] = result.notes;
    return j;
}

Json case_study_to_json(const CaseStudyReport& report) {
    Json j;
    Json params;
    params["c"] = json_number(report.params.coverage);
    params["p"] = json_number(report.params.premium);
    params["kappa"] = json_number(report.params.kappa);
    params["m"] = json_number(report.params.investment_cost);
    params["mu2_0"] = json_number(report.params.mu2_baseline);
    params["gamma"] = json_number(report.params.gamma);
    j["params"] = params;

    Json participation;
    participation["premium_bound_formula"] = json_number(report.premium_bound_formula);
    participation["premium_bound_bruteforce"] = json_number(report.premium_bound_bruteforce);
    participation["bounds_agree"] = report.bounds_agree;
    participation["participation_ok"] = report.participation_ok;
    participation["indifference_gap_at_bound"] = json_number(report.indifference_gap_at_bound);
    j["participation"] = participation;

    Json flip;
    flip["printed_ic_threshold_rhs"] = json_number(report.printed_ic_threshold_rhs);
    flip["oracle_flip_rhs_at_baseline"] = json_number(report.oracle_flip_rhs_at_baseline);
    flip["thresholds_disagree"] = report.thresholds_disagree;
    flip["note"] = report.threshold_note;
    flip["mu2_flip_threshold"] =
        report.mu2_flip_threshold ? Json(json_number(*report.mu2_flip_threshold)) : Json(nullptr);
    flip["mu2_flip_threshold_search"] =
        report.mu2_flip_threshold_search ? Json(json_number(*report.mu2_flip_threshold_search))
                                         : Json(nullptr);
    flip["best_response_at_baseline"] = json_number(report.best_response_at_baseline);
    j["incentive_flip"] = flip;

    Json design;
    design["imh_before"] = report.imh_before ? Json(json_number(*report.imh_before)) : Json(nullptr);
    design["mu2_design"] = report.mu2_design ? Json(json_number(*report.mu2_design)) : Json(nullptr);
    design["imh_after"] = report.imh_after ? Json(json_number(*report.imh_after)) : Json(nullptr);
    j["design"] = design;

    Json decomposition = Json::array();
    for (std::size_t i = 0; i < report.type_mean.size(); ++i) {
        Json row;
        row["type"] = i;
        row["mean"] = json_number(report.type_mean[i]);
        row["deviation_addon"] = json_number(report.type_deviation_addon[i]);
        decomposition.push_back(row);
    }
    j["type_decomposition_at_high_action"] = decomposition;
    return j;
}

}  // namespace riskdesign
