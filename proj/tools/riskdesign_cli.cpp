// Command-line front end: loads a scenario (or the built-in linear-contract
// ransomware preset), dispatches to the solvers and diagnostics, and writes
// JSON/CSV reports.
//
// Exit codes: 0 success, 2 input error, 3 infeasibility, 4 numerical failure.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskdesign/case_study.hpp"
#include "riskdesign/contract_solvers.hpp"
#include "riskdesign/errors.hpp"
#include "riskdesign/monotonicity.hpp"
#include "riskdesign/moral_hazard.hpp"
#include "riskdesign/numerics.hpp"
#include "riskdesign/scenario_io.hpp"
#include "riskdesign/transport.hpp"

namespace rd = riskdesign;

namespace {

struct GlobalOptions {
    std::string scenario_path;
    std::string out_dir = ".";
    std::string mu_csv;
    double step = 1e-3;
    bool csv = false;
    bool json = true;
    bool parallel = false;
};

std::vector<double> parse_mu_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("--mu: cannot parse \"" + item + "\" as a number");
        }
    }
    if (values.empty()) throw std::invalid_argument("--mu: empty list");
    return values;
}

rd::Scenario load_or_preset(const GlobalOptions& options) {
    if (!options.scenario_path.empty()) return rd::load_scenario(options.scenario_path);
    return rd::case_study_scenario();
}

rd::TypeDistribution mu_or_default(const GlobalOptions& options, const rd::Scenario& scenario) {
    if (options.mu_csv.empty()) return scenario.mu0;
    return rd::TypeDistribution(parse_mu_list(options.mu_csv));
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write to output directory: " + dir);
    out << content;
}

// Flat key,value listing of the numeric/boolean leaves for the --csv mirror.
void flatten_csv(const rd::Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& item : j.items())
            flatten_csv(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
        return;
    }
    if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& e : j) flatten_csv(e, prefix + "[" + std::to_string(i++) + "]", out);
        return;
    }
    if (j.is_number())
        out << prefix << "," << rd::format_double(j.get<double>()) << "\n";
    else if (j.is_boolean())
        out << prefix << "," << (j.get<bool>() ? "true" : "false") << "\n";
    else if (j.is_string())
        out << prefix << "," << j.get<std::string>() << "\n";
    else
        out << prefix << ",\n";
}

void emit(const GlobalOptions& options, const std::string& name, const rd::Json& j) {
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (options.json) write_file(options.out_dir, name + ".json", text);
    if (options.csv) {
        std::ostringstream csv;
        csv << "key,value\n";
        flatten_csv(j, "", csv);
        write_file(options.out_dir, name + ".csv", csv.str());
    }
}

rd::Contract effective_contract(const rd::Scenario& scenario, const rd::TypeDistribution& mu,
                                double* action_out) {
    if (scenario.contract) {
        if (action_out) *action_out = rd::agent_best_response(scenario, mu, *scenario.contract);
        return *scenario.contract;
    }
    rd::SolveReport report = rd::solve_full_info(scenario, mu);
    if (action_out) *action_out = report.action;
    return report.contract;
}

int cmd_evaluate(const GlobalOptions& options, std::optional<double> x_opt) {
    rd::Scenario scenario = load_or_preset(options);
    rd::TypeDistribution mu = mu_or_default(options, scenario);
    if (mu.size() != scenario.types.size())
        throw std::invalid_argument("--mu: dimension does not match the scenario's type space");

    rd::Contract contract =
        scenario.contract ? *scenario.contract
                          : rd::Contract(rd::TabularContract{
                                std::vector<double>(scenario.model.grid.size(), 0.0)});
    double x = x_opt ? *x_opt : rd::agent_best_response(scenario, mu, contract);

    rd::Json j;
    j["action"] = rd::json_number(x);
    j["agent_objective"] = rd::json_number(rd::agent_objective(scenario, mu, contract, x));
    j["principal_objective"] =
        rd::json_number(rd::principal_objective(scenario, contract, x, mu));
    j["ir_slack"] =
        rd::json_number(scenario.u_bar - rd::agent_objective(scenario, mu, contract, x));

    std::vector<double> q = rd::density(scenario.model, x);
    std::vector<double> insured =
        rd::residual_cost_row(scenario.model.grid, contract, scenario.disutility);
    rd::Contract bare = rd::TabularContract{std::vector<double>(scenario.model.grid.size(), 0.0)};
    std::vector<double> uninsured =
        rd::residual_cost_row(scenario.model.grid, bare, scenario.disutility);

    rd::Json rows = rd::Json::array();
    for (std::size_t i = 0; i < scenario.types.size(); ++i) {
        const auto& type = scenario.types.types[i];
        rd::Json row;
        row["type"] = rd::risk_spec_to_json(type);
        row["weight"] = rd::json_number(mu.weights[i]);
        double v_ins = rd::evaluate(type, insured, q);
        double v_un = rd::evaluate(type, uninsured, q);
        row["risk_insured"] = rd::json_number(v_ins);
        row["risk_insured_mean"] = rd::json_number(rd::expectation(insured, q));
        row["risk_uninsured"] = rd::json_number(v_un);
        row["risk_uninsured_mean"] = rd::json_number(rd::expectation(uninsured, q));
        row["risk_uninsured_deviation_addon"] =
            rd::json_number(v_un - rd::expectation(uninsured, q));
        rows.push_back(row);
    }
    j["type_decomposition"] = rows;
    emit(options, "evaluate", j);
    return 0;
}

int cmd_solve(const GlobalOptions& options, const std::string& mode, double mu_grid_step) {
    rd::Scenario scenario = load_or_preset(options);
    rd::TypeDistribution mu = mu_or_default(options, scenario);
    rd::SolveReport report =
        mode == "hidden" ? rd::solve_hidden_action(scenario, {.mu_grid_step = mu_grid_step})
                         : rd::solve_full_info(scenario, mu);
    emit(options, "report", rd::solve_report_to_json(report));

    if (scenario.types.size() == 2) {  // objective sweep over the type mix
        const int n_points = 101;
        std::vector<std::string> lines(n_points);
        auto row_at = [&](int i) {
            double t = static_cast<double>(i) / (n_points - 1);
            rd::TypeDistribution mu_i{{1.0 - t, t}};
            std::string line = rd::format_double(t);
            try {
                rd::SolveReport r = rd::solve_full_info(scenario, mu_i);
                line += "," + rd::format_double(r.objective) + "," + rd::format_double(r.action);
            } catch (const rd::InfeasibleError&) {
                line += ",nan,nan";
            }
            return line + "\n";
        };
        if (options.parallel) {
            std::vector<std::future<std::string>> futures;
            futures.reserve(n_points);
            for (int i = 0; i < n_points; ++i)
                futures.push_back(std::async(std::launch::async, row_at, i));
            for (int i = 0; i < n_points; ++i) lines[i] = futures[i].get();
        } else {
            for (int i = 0; i < n_points; ++i) lines[i] = row_at(i);
        }
        std::string csv = "mu2,objective,action\n";
        for (const auto& line : lines) csv += line;
        write_file(options.out_dir, "sweep.csv", csv);
    }
    return 0;
}

int cmd_imh(const GlobalOptions& options) {
    rd::Scenario scenario = load_or_preset(options);
    rd::TypeDistribution mu = mu_or_default(options, scenario);
    rd::ImhReport report = rd::imh(scenario, mu);
    emit(options, "imh", rd::imh_report_to_json(report));
    return 0;
}

int cmd_grad_t(const GlobalOptions& options) {
    rd::Scenario scenario = load_or_preset(options);
    rd::TypeDistribution mu = mu_or_default(options, scenario);
    std::vector<double> grad = rd::imh_gradient(scenario, mu);
    rd::DualPotential dual = rd::w1_dual(mu, scenario.mu0);
    auto direction = rd::mitigating_direction(grad, dual.b);

    rd::Json j;
    rd::Json grad_json = rd::Json::array();
    for (double g : grad) grad_json.push_back(rd::json_number(g));
    j["grad"] = grad_json;
    rd::Json b_json = rd::Json::array();
    for (double b : dual.b) b_json.push_back(rd::json_number(b));
    j["b_star"] = b_json;
    j["w1"] = rd::json_number(dual.value);
    if (direction) {
        rd::Json d_json = rd::Json::array();
        for (double d : *direction) d_json.push_back(rd::json_number(d));
        j["direction"] = d_json;
    } else {
        j["direction"] = nullptr;
        j["note"] = "no direction lowers both the intensity and the design cost to first order";
    }
    emit(options, "grad_t", j);
    return 0;
}

int cmd_design_step(const GlobalOptions& options) {
    rd::Scenario scenario = load_or_preset(options);
    rd::TypeDistribution mu = mu_or_default(options, scenario);
    rd::ImhReport base = rd::imh(scenario, mu);
    if (!base.grad_available) {
        throw rd::NumericalError("design step needs the intensity gradient: " + base.grad_error);
    }
    if (!base.direction) {
        rd::Json j;
        j["accepted"] = false;
        j["note"] = "no beneficial direction exists at this distribution";
        emit(options, "design_step", j);
        return 0;
    }
    rd::DesignStepReport report = rd::design_step(scenario, mu, *base.direction, options.step);
    emit(options, "design_step", rd::design_step_to_json(report));
    if (!report.accepted)
        throw rd::NumericalError("design step collapsed without lowering the intensity");
    return 0;
}

int cmd_check_monotonicity(const GlobalOptions& options, std::optional<double> x_opt,
                           std::optional<double> alpha_opt, double beta) {
    rd::Scenario scenario = load_or_preset(options);
    rd::TypeDistribution mu = mu_or_default(options, scenario);

    double x = 0.0;
    rd::Contract contract = effective_contract(scenario, mu, &x);
    if (x_opt) x = *x_opt;
    double alpha = alpha_opt ? *alpha_opt
                             : rd::recover_ir_multiplier(scenario, mu, contract, x).alpha;

    rd::DiagnosticOptions diag;
    diag.x_step = options.step > 0.0 && options.step != 1e-3 ? options.step : diag.x_step;

    rd::Json checks = rd::Json::array();
    checks.push_back(rd::check_result_to_json(rd::check_mass_growth(scenario, mu, contract, x, diag)));
    checks.push_back(rd::check_result_to_json(
        rd::check_severe_loss_avoidance(scenario, mu, contract, x, diag)));
    checks.push_back(rd::check_result_to_json(
        rd::check_risk_sensitive_mlr(scenario, mu, contract, x, alpha, beta)));
    checks.push_back(rd::check_result_to_json(rd::mlr_diagnostic(scenario.model, x)));
    if (const auto* tab = std::get_if<rd::TabularContract>(&contract)) {
        rd::CheckResult mono;
        mono.name = "monotone_coverage";
        mono.status = rd::check_monotone_contract(*tab) ? rd::CheckStatus::Pass
                                                        : rd::CheckStatus::Fail;
        mono.values = tab->coverage;
        checks.push_back(rd::check_result_to_json(mono));
    }

    rd::Json j;
    j["action"] = rd::json_number(x);
    j["alpha"] = rd::json_number(alpha);
    j["beta"] = rd::json_number(beta);
    j["checks"] = checks;
    j["foc_ic_residual"] = rd::json_number(rd::foc_ic_residual(scenario, mu, contract, x));
    rd::Json residual = rd::Json::array();
    for (double r : rd::foc_pointwise_residual(scenario, mu, contract, x, alpha, beta))
        residual.push_back(rd::json_number(r));
    j["foc_pointwise_residual"] = residual;
    emit(options, "monotonicity", j);
    return 0;
}

int cmd_case_study(const GlobalOptions& options, const rd::CaseStudyParams& params) {
    rd::CaseStudyReport report = rd::run_case_study(params);
    emit(options, "case_study", rd::case_study_to_json(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"risk preference design toolkit for principal-agent insurance contracts"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions options;
    app.add_option("--scenario", options.scenario_path, "scenario JSON file (default: built-in preset)");
    app.add_option("--out", options.out_dir, "output directory for report files");
    app.add_option("--mu", options.mu_csv, "type distribution as a comma list, e.g. 0.9,0.1");
    app.add_option("--step", options.step, "step size (design step / diagnostics)");
    app.add_flag("--csv", options.csv, "also write flat CSV mirrors of the reports");
    app.add_flag("!--no-json", options.json, "suppress JSON report files");
    app.add_flag("--parallel", options.parallel, "evaluate parameter sweeps concurrently");

    auto* evaluate = app.add_subcommand("evaluate", "agent/principal objectives and risk decomposition");
    std::optional<double> eval_x;
    evaluate->add_option("--x", eval_x, "action (default: agent best response)");

    auto* solve = app.add_subcommand("solve", "solve the benchmark or the hidden-action design");
    std::string mode = "full-info";
    double mu_grid_step = 0.01;
    solve->add_option("--mode", mode, "full-info | hidden")
        ->check(CLI::IsMember({"full-info", "hidden"}));
    solve->add_option("--mu-grid-step", mu_grid_step, "type-distribution grid step (hidden mode)");

    auto* imh_cmd = app.add_subcommand("imh", "intensity of moral hazard at a distribution");
    auto* grad_cmd = app.add_subcommand("grad-t", "gradient of the intensity in the type weights");
    auto* step_cmd = app.add_subcommand("design-step", "apply a mitigating design step");

    auto* check_cmd = app.add_subcommand("check-monotonicity", "contract monotonicity diagnostics");
    std::optional<double> check_x;
    std::optional<double> check_alpha;
    double check_beta = 0.0;
    check_cmd->add_option("--x", check_x, "action at which to evaluate the checks");
    check_cmd->add_option("--alpha", check_alpha, "IR multiplier (default: recovered)");
    check_cmd->add_option("--beta", check_beta, "IC multiplier (default 0)");

    auto* case_cmd = app.add_subcommand("case-study", "built-in linear-contract ransomware report");
    rd::CaseStudyParams params;
    case_cmd->add_option("--c", params.coverage, "coverage fraction in (0,1)");
    case_cmd->add_option("--p", params.premium, "premium > 0");
    case_cmd->add_option("--kappa", params.kappa, "semideviation weight in (0,1]");
    case_cmd->add_option("--m", params.investment_cost, "investment cost >= 0");
    case_cmd->add_option("--mu2", params.mu2_baseline, "baseline share of the semideviation type");
    case_cmd->add_option("--gamma", params.gamma, "design cost weight > 0");

    CLI11_PARSE(app, argc, argv);

    try {
        if (evaluate->parsed()) return cmd_evaluate(options, eval_x);
        if (solve->parsed()) return cmd_solve(options, mode, mu_grid_step);
        if (imh_cmd->parsed()) return cmd_imh(options);
        if (grad_cmd->parsed()) return cmd_grad_t(options);
        if (step_cmd->parsed()) return cmd_design_step(options);
        if (check_cmd->parsed())
            return cmd_check_monotonicity(options, check_x, check_alpha, check_beta);
        if (case_cmd->parsed()) return cmd_case_study(options, params);
    } catch (const rd::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const rd::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const rd::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
