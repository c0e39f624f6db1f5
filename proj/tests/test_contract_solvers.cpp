#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <variant>

#include "riskdesign/case_study.hpp"
#include "riskdesign/contract_solvers.hpp"
#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"
#include "riskdesign/transport.hpp"

using namespace riskdesign;

namespace {

// The ransomware scenario without a pinned contract, so the solvers search
// over tabular coverage.
Scenario tabular_scenario(double u_bar) {
    Scenario scenario = case_study_scenario();
    scenario.contract.reset();
    scenario.u_bar = u_bar;
    return scenario;
}

// Preference-flip threshold by direct evaluation of both actions under the
// linear contract: the agent picks the high action when
// m (xH - xL) < (1-c)^2 (S_L - S_H) with S_x the mixed perceived cost of
// the squared losses.
double flip_gap(double c, double kappa, double mu2) {
    std::vector<double> z = {1, 4, 9};
    std::vector<RiskMeasureSpec> types = {RiskMeasureSpec::expectation(),
                                          RiskMeasureSpec::semideviation(kappa)};
    std::vector<double> weights = {1.0 - mu2, mu2};
    double s_low = mixture_risk(types, weights, z, std::vector<double>{0.3, 0.4, 0.3});
    double s_high = mixture_risk(types, weights, z, std::vector<double>{0.5, 0.3, 0.2});
    return (1.0 - c) * (1.0 - c) * (s_low - s_high);
}

}  // namespace

TEST_CASE("agent objective on the ransomware scenario") {
    Scenario scenario = case_study_scenario();  // m = 0.28, premium = 1

    // zero coverage, risk-neutral population: mean squared loss plus costs
    Contract bare = TabularContract{{0, 0, 0}};
    CHECK(agent_objective(scenario, TypeDistribution{{1.0, 0.0}}, bare, 1.0) ==
          doctest::Approx(3.5 + 0.28).epsilon(1e-12));

    // halved losses scale the perceived cost by (1-c)^2 = 0.25
    CHECK(agent_objective(scenario, TypeDistribution{{0.0, 1.0}}, *scenario.contract, 1.0) ==
          doctest::Approx(0.25 * 4.75 + 1.0 + 0.28).epsilon(1e-12));

    // risk-neutral mixture reduces to a plain expectation
    Contract half = TabularContract{{0.5, 1.0, 1.5}};
    std::vector<double> residual = {0.25, 1.0, 2.25};
    double direct = expectation(residual, density(scenario.model, 0.0));
    CHECK(agent_objective(scenario, TypeDistribution{{1.0, 0.0}}, half, 0.0) ==
          doctest::Approx(direct).epsilon(1e-12));

    CHECK_THROWS_AS(agent_objective(scenario, scenario.mu0, bare, 0.5), std::invalid_argument);
}

TEST_CASE("agent best response flips with the semideviation share") {
    Scenario scenario = case_study_scenario();
    const Contract& contract = *scenario.contract;

    // enumeration oracle: compare the two actions directly
    CHECK(flip_gap(0.5, 1.0, 0.1) < 0.28);
    CHECK(flip_gap(0.5, 1.0, 0.6) > 0.28);
    CHECK(agent_best_response(scenario, TypeDistribution{{0.9, 0.1}}, contract) == 0.0);
    CHECK(agent_best_response(scenario, TypeDistribution{{0.4, 0.6}}, contract) == 1.0);

    // an expensive investment is never taken when coverage is negligible
    CaseStudyParams heavy;
    heavy.investment_cost = 10.0;
    heavy.coverage = 0.01;
    Scenario costly = case_study_scenario(heavy);
    for (double mu2 : {0.0, 0.5, 1.0})
        CHECK(agent_best_response(costly, TypeDistribution{{1.0 - mu2, mu2}},
                                  *costly.contract) == 0.0);
}

TEST_CASE("coverage never hurts the agent") {
    Scenario scenario = tabular_scenario(2.0);
    Rng rng(1234);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> w(3), w_more(3);
        for (std::size_t k = 0; k < 3; ++k) {
            double xi = scenario.model.grid.points[k];
            w[k] = rng.next_double() * xi;
            w_more[k] = w[k] + rng.next_double() * (xi - w[k]);
        }
        double mu2 = rng.next_double();
        TypeDistribution mu{{1.0 - mu2, mu2}};
        double x = rng.uniform_int(0, 1);
        CHECK(agent_objective(scenario, mu, TabularContract{w_more}, x) <=
              agent_objective(scenario, mu, TabularContract{w}, x) + 1e-12);
    }
}

TEST_CASE("principal objective conventions") {
    Scenario scenario = case_study_scenario();

    // zero coverage, no design move: plain expected loss
    Contract bare = TabularContract{{0, 0, 0}};
    CHECK(principal_objective(scenario, bare, 0.0, scenario.mu0) ==
          doctest::Approx(2.0).epsilon(1e-12));

    // linear-contract convention: covered loss minus premium
    CHECK(principal_stage_cost(scenario, *scenario.contract, 1.0) ==
          doctest::Approx(0.5 * 1.7 - 1.0).epsilon(1e-12));

    // the design term adds gamma W1
    Scenario moved = scenario;
    moved.mu0 = TypeDistribution{{0.0, 1.0}};
    moved.gamma = 2.0;
    CHECK(principal_objective(moved, bare, 0.0, TypeDistribution{{1.0, 0.0}}) -
              principal_stage_cost(moved, bare, 0.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("benchmark solve: slack threshold leaves losses uncovered") {
    Scenario scenario = tabular_scenario(1e6);
    SolveReport report = solve_full_info(scenario, scenario.mu0);
    const auto& w = std::get<TabularContract>(report.contract).coverage;
    for (double e : w) CHECK(e == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.action == 1.0);  // the high action minimizes the expected loss
    CHECK(report.alpha == 0.0);
    CHECK(report.objective == doctest::Approx(1.7).epsilon(1e-9));
}

TEST_CASE("benchmark solve: binding threshold and enumeration cross-check") {
    Scenario scenario = tabular_scenario(2.0);
    TypeDistribution mu{{0.9, 0.1}};
    SolveReport report = solve_full_info(scenario, mu);
    const auto& w = std::get<TabularContract>(report.contract).coverage;

    double perceived = agent_objective(scenario, mu, report.contract, report.action);
    CHECK(perceived <= scenario.u_bar + 1e-9);
    CHECK(scenario.u_bar - perceived <= 1e-9);  // binding
    bool some_coverage = false;
    for (double e : w) some_coverage = some_coverage || e > 1e-6;
    CHECK(some_coverage);

    // exhaustive oracle: per-coordinate grids and both actions
    double best = 1e300;
    const int steps = 24;
    for (double x : {0.0, 1.0}) {
        for (int i0 = 0; i0 <= steps; ++i0)
            for (int i1 = 0; i1 <= steps; ++i1)
                for (int i2 = 0; i2 <= steps; ++i2) {
                    std::vector<double> trial = {1.0 * i0 / steps, 2.0 * i1 / steps,
                                                 3.0 * i2 / steps};
                    Contract c = TabularContract{trial};
                    if (agent_objective(scenario, mu, c, x) > scenario.u_bar) continue;
                    best = std::min(best, principal_stage_cost(scenario, c, x));
                }
    }
    CHECK(principal_stage_cost(scenario, report.contract, report.action) <= best + 1e-6);
    CHECK(report.objective >= 1.7 - 1e-9);  // never below the bare expected loss
}

TEST_CASE("benchmark solve: interior coverage equalizes the multiplier") {
    Scenario scenario = tabular_scenario(0.9);
    TypeDistribution mu{{1.0, 0.0}};
    SolveReport report = solve_full_info(scenario, mu);
    const auto& w = std::get<TabularContract>(report.contract).coverage;

    // with a risk-neutral population the optimal residuals are equal:
    // r = sqrt(U_bar - m xH) at the high action
    double r = std::sqrt(scenario.u_bar - 0.28);
    CHECK(report.action == 1.0);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(w[k] == doctest::Approx(scenario.model.grid.points[k] - r).epsilon(1e-6));
    CHECK(report.alpha == doctest::Approx(1.0 / (2.0 * r)).epsilon(1e-5));
    CHECK(report.alpha_residual_norm <= 1e-6);

    // shadow price of the threshold: d(cost)/d(U_bar) = -alpha
    double h = 1e-5;
    Scenario up = scenario, down = scenario;
    up.u_bar += h;
    down.u_bar -= h;
    double shadow = -(solve_full_info(up, mu).objective - solve_full_info(down, mu).objective) /
                    (2 * h);
    CHECK(shadow == doctest::Approx(report.alpha).epsilon(0.05));
}

TEST_CASE("multiplier recovery on the mixed population") {
    Scenario scenario = tabular_scenario(2.0);
    TypeDistribution mu{{0.9, 0.1}};
    SolveReport report = solve_full_info(scenario, mu);
    CHECK(report.alpha > 0.0);

    double h = 1e-5;
    Scenario up = scenario, down = scenario;
    up.u_bar += h;
    down.u_bar -= h;
    double shadow = -(solve_full_info(up, mu).objective - solve_full_info(down, mu).objective) /
                    (2 * h);
    CHECK(shadow == doctest::Approx(report.alpha).epsilon(0.05));

    // slack threshold: complementary slackness
    Scenario slack = tabular_scenario(1e6);
    IrMultiplier ir =
        recover_ir_multiplier(slack, mu, TabularContract{{0, 0, 0}}, 1.0);
    CHECK(ir.alpha == 0.0);
    CHECK(ir.method == "slack");
}

TEST_CASE("infeasible thresholds raise with the minimal achievable cost") {
    // pinned contract: the premium alone exceeds the threshold
    Scenario pinned = case_study_scenario();
    pinned.u_bar = 0.5;
    CHECK_THROWS_AS(solve_full_info(pinned, pinned.mu0), InfeasibleError);

    // tabular search: investment cost alone exceeds the threshold
    Scenario scenario = tabular_scenario(0.2);
    scenario.actions = ActionSet::discrete({1.0});
    try {
        solve_full_info(scenario, scenario.mu0);
        FAIL("expected infeasibility");
    } catch (const InfeasibleError& e) {
        CHECK(e.min_achievable() == doctest::Approx(0.28).epsilon(1e-12));
    }
}

TEST_CASE("hidden-action design: a prohibitive design cost keeps the baseline mix") {
    Scenario scenario = case_study_scenario();
    scenario.gamma = 1e6;
    SolveReport report = solve_hidden_action(scenario);
    CHECK(report.mu.weights[0] == scenario.mu0.weights[0]);
    CHECK(report.mu.weights[1] == scenario.mu0.weights[1]);
    CHECK(report.action == 0.0);  // baseline mix leaves the agent at the low action
    CHECK(report.flags.size() >= 2);
}

TEST_CASE("hidden-action design: a cheap design moves the mix past the flip") {
    CaseStudyParams params;
    params.gamma = 0.01;
    Scenario scenario = case_study_scenario(params);
    SolveReport report = solve_hidden_action(scenario);

    double flip = 2.0 / 7.0;  // root of (1-c)^2 (1.1 + 0.07 mu2) = 0.28
    CHECK(report.mu.weights[1] > flip);
    CHECK(report.action == 1.0);

    // enumeration oracle on the type-mix grid
    double best = 1e300;
    for (int i = 0; i <= 100; ++i) {
        double t = i / 100.0;
        TypeDistribution mu{{1.0 - t, t}};
        double x = agent_best_response(scenario, mu, *scenario.contract);
        if (agent_objective(scenario, mu, *scenario.contract, x) > scenario.u_bar) continue;
        best = std::min(best,
                        principal_stage_cost(scenario, *scenario.contract, x) +
                            scenario.gamma * w1(mu, scenario.mu0));
    }
    CHECK(report.objective <= best + 1e-9);

    // incentive compatibility is exact at the incumbent
    CHECK(agent_best_response(scenario, report.mu, report.contract) == report.action);
}

TEST_CASE("hidden-action design over tabular coverage dominates no benchmark") {
    Scenario scenario = tabular_scenario(2.0);
    SolveReport hidden = solve_hidden_action(scenario, {.mu_grid_step = 0.05});
    CHECK(agent_best_response(scenario, hidden.mu, hidden.contract) == hidden.action);
    SolveReport bench = solve_full_info(scenario, hidden.mu);
    CHECK(bench.objective <= hidden.objective + 1e-9);
}
