#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "riskdesign/case_study.hpp"
#include "riskdesign/contract_solvers.hpp"
#include "riskdesign/errors.hpp"
#include "riskdesign/moral_hazard.hpp"
#include "riskdesign/numerics.hpp"
#include "riskdesign/transport.hpp"

using namespace riskdesign;

namespace {

// Re-solves the frozen stationarity systems at perturbed raw weights and
// differences the gap; the independent oracle for the sensitivity formula.
std::vector<double> gradient_fd_oracle(const Scenario& scenario, const TypeDistribution& mu) {
    SensitivityBase base = sensitivity_base(scenario, mu);
    const double eps = 1e-5;
    std::vector<double> grad(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        std::vector<double> up = mu.weights, down = mu.weights;
        up[i] += eps;
        down[i] -= eps;
        double t_up = resolve_benchmark_action(scenario, base, up) -
                      resolve_agent_action(scenario, base, up);
        double t_down = resolve_benchmark_action(scenario, base, down) -
                        resolve_agent_action(scenario, base, down);
        grad[i] = (t_up - t_down) / (2 * eps);
    }
    return grad;
}

}  // namespace

TEST_CASE("intensity on the ransomware scenario: positive then removed by design") {
    Scenario scenario = case_study_scenario();
    ImhReport before = imh(scenario, TypeDistribution{{0.9, 0.1}});
    CHECK(before.benchmark_action == 1.0);
    CHECK(before.agent_action == 0.0);
    CHECK(before.intensity == 1.0);

    ImhReport after = imh(scenario, TypeDistribution{{0.4, 0.6}});
    CHECK(after.benchmark_action == 1.0);
    CHECK(after.agent_action == 1.0);
    CHECK(after.intensity == 0.0);
}

TEST_CASE("aligned objectives leave no gap") {
    // identity perception, zero coverage, no investment cost: both sides
    // minimize the same expected loss
    Scenario scenario{OutcomeModel{OutcomeGrid{{1, 2, 3}},
                                   {1.0 / 3, 1.0 / 3, 1.0 / 3},
                                   ActionFamily::linear({0.3, 0.4, 0.3}, {0.5, 0.3, 0.2})},
                      TypeSpace{{RiskMeasureSpec::expectation()}},
                      TypeDistribution{{1.0}},
                      DisutilitySpec{DisutilityShape::Identity, 1.0, 0.0},
                      2.5,
                      1.0,
                      ActionSet::discrete({0.0, 1.0}),
                      TabularContract{{0, 0, 0}}};
    ImhReport report = imh(scenario, scenario.mu0);
    CHECK(report.intensity == 0.0);
    CHECK(report.benchmark_action == report.agent_action);
}

TEST_CASE("stationarity values on the interpolated family") {
    Scenario scenario = case_study_scenario();
    scenario.actions = ActionSet::interval(0.0, 1.0);
    Contract bare = TabularContract{{0, 0, 0}};

    // insurer term alone: d/dx E[xi] = 0.2*1 - 0.1*2 - 0.1*3
    CHECK(benchmark_stationarity(scenario, scenario.mu0.weights, bare, 0.5, 0.0) ==
          doctest::Approx(-0.3).epsilon(1e-12));

    // agent term: d/dx E[xi^2] + m with the risk-neutral population
    std::vector<double> neutral = {1.0, 0.0};
    CHECK(agent_stationarity(scenario, neutral, bare, 0.5) ==
          doctest::Approx(-1.1 + 0.28).epsilon(1e-12));
}

TEST_CASE("smooth scenario: interior optima satisfy their stationarity") {
    Scenario scenario = smooth_sensitivity_scenario(2);
    SensitivityBase base = sensitivity_base(scenario, scenario.mu0);

    CHECK(base.x_agent == doctest::Approx(7.0 / 24.0).epsilon(1e-6));
    CHECK(base.x_star > base.x_agent);  // the insurer wants more investment
    CHECK(agent_stationarity(scenario, scenario.mu0.weights, base.contract, base.x_agent) ==
          doctest::Approx(0.0).epsilon(1e-6));
    CHECK(benchmark_stationarity(scenario, scenario.mu0.weights, base.contract, base.x_star,
                                 base.alpha) == doctest::Approx(0.0).epsilon(1e-6));

    // participation binds at the benchmark action
    double perceived =
        agent_objective(scenario, scenario.mu0, base.contract, base.x_star);
    CHECK(std::abs(scenario.u_bar - perceived) <= 1e-9);
}

TEST_CASE("sensitivity formula matches the re-solve oracle (2 types)") {
    Scenario scenario = smooth_sensitivity_scenario(2);
    std::vector<double> grad = imh_gradient(scenario, scenario.mu0);
    std::vector<double> oracle = gradient_fd_oracle(scenario, scenario.mu0);
    REQUIRE(grad.size() == 2);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        double scale = std::max({std::abs(grad[i]), std::abs(oracle[i]), 1e-4});
        CHECK(std::abs(grad[i] - oracle[i]) <= 1e-3 * scale);
    }
    // the semideviation component is negative: shifting weight to the
    // risk-averse type closes the gap
    CHECK(grad[1] < 0.0);
    // analytic reduction for this scenario: grad_2 = (x_agent - x_star)/mu_2
    SensitivityBase base = sensitivity_base(scenario, scenario.mu0);
    CHECK(grad[1] ==
          doctest::Approx((base.x_agent - base.x_star) / scenario.mu0.weights[1]).epsilon(1e-4));
}

TEST_CASE("sensitivity formula matches the re-solve oracle (3 types)") {
    Scenario scenario = smooth_sensitivity_scenario(3);
    std::vector<double> grad = imh_gradient(scenario, scenario.mu0);
    std::vector<double> oracle = gradient_fd_oracle(scenario, scenario.mu0);
    REQUIRE(grad.size() == 3);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        double scale = std::max({std::abs(grad[i]), std::abs(oracle[i]), 1e-4});
        CHECK(std::abs(grad[i] - oracle[i]) <= 1e-3 * scale);
    }
    CHECK(grad[1] < 0.0);
    CHECK(grad[2] < 0.0);
    CHECK(std::abs(grad[0]) <= 1e-6);
}

TEST_CASE("identical types make the gap constant on the simplex") {
    Scenario scenario = smooth_sensitivity_scenario(2);
    scenario.types = TypeSpace{{RiskMeasureSpec::semideviation(0.6),
                                RiskMeasureSpec::semideviation(0.6)}};
    scenario.mu0 = TypeDistribution{{0.5, 0.5}};
    std::vector<double> grad = imh_gradient(scenario, scenario.mu0);
    // zero-sum projection vanishes: no simplex direction changes the gap
    double mean = (grad[0] + grad[1]) / 2.0;
    CHECK(std::abs(grad[0] - mean) <= 1e-6);
    CHECK(std::abs(grad[1] - mean) <= 1e-6);
}

TEST_CASE("gradient preconditions are enforced") {
    // discrete actions: no smooth parameterization
    Scenario discrete = case_study_scenario();
    CHECK_THROWS_AS(imh_gradient(discrete, discrete.mu0), UnsupportedError);

    // boundary benchmark action: slack threshold sends the insurer to an end
    Scenario boundary = smooth_sensitivity_scenario(2);
    boundary.u_bar = 50.0;
    CHECK_THROWS_AS(imh_gradient(boundary, boundary.mu0), NumericalError);
}

TEST_CASE("mitigating directions: resolved cases") {
    auto d1 = mitigating_direction(std::vector<double>{1, -1}, std::vector<double>{1, 0});
    REQUIRE(d1.has_value());
    CHECK((*d1)[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK((*d1)[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    // flat gradient: conventional direction
    auto d2 = mitigating_direction(std::vector<double>{0, 0}, std::vector<double>{0, 0});
    REQUIRE(d2.has_value());
    CHECK((*d2)[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK((*d2)[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    // gradient positively parallel to the negated potential: blocked
    auto d3 = mitigating_direction(std::vector<double>{-1, 1}, std::vector<double>{1, -1});
    CHECK_FALSE(d3.has_value());
}

TEST_CASE("mitigating directions agree with a planar enumeration oracle") {
    // orthonormal basis of the zero-sum plane in R^3
    const double s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0);
    std::vector<double> e1 = {s2, -s2, 0.0};
    std::vector<double> e2 = {s6, s6, -2.0 * s6};
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<double> g(3), b(3);
        for (int k = 0; k < 3; ++k) {
            g[k] = rng.uniform(-2, 2);
            b[k] = rng.uniform(-2, 2);
        }
        auto dir = mitigating_direction(g, b);
        bool oracle_exists = false;
        for (int deg = 0; deg < 360; ++deg) {
            double a = deg * 3.14159265358979323846 / 180.0;
            double dg = 0.0, db = 0.0;
            for (int k = 0; k < 3; ++k) {
                double d = std::cos(a) * e1[k] + std::sin(a) * e2[k];
                dg += d * g[k];
                db += d * b[k];
            }
            if (dg <= 1e-12 && db <= 1e-12) {
                oracle_exists = true;
                break;
            }
        }
        CHECK(dir.has_value() == oracle_exists);
        if (dir) {
            double sum_d = 0.0, norm = 0.0, dg = 0.0, db = 0.0;
            for (int k = 0; k < 3; ++k) {
                sum_d += (*dir)[k];
                norm += (*dir)[k] * (*dir)[k];
                dg += (*dir)[k] * g[k];
                db += (*dir)[k] * b[k];
            }
            CHECK(std::abs(sum_d) <= 1e-12);
            CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(dg <= 1e-9);
            CHECK(db <= 1e-9);
        }
    }
}

TEST_CASE("design step lowers the gap and the design cost") {
    Scenario scenario = smooth_sensitivity_scenario(2);
    scenario.mu0 = TypeDistribution{{0.35, 0.65}};  // keep the W1 term away from its kink
    TypeDistribution mu{{0.398, 0.602}};

    ImhReport report = imh(scenario, mu);
    REQUIRE(report.grad_available);
    REQUIRE(report.direction.has_value());

    DesignStepReport step = design_step(scenario, mu, *report.direction, 1e-3);
    CHECK(step.accepted);
    CHECK(step.intensity_after <= step.intensity_before + 1e-12);
    double db = dot(*report.direction, report.dual_potential);
    if (db <= 1e-12) CHECK(step.w1_after <= step.w1_before + 1e-9);
}

TEST_CASE("design step edge behavior") {
    Scenario scenario = smooth_sensitivity_scenario(2);
    TypeDistribution mu{{0.398, 0.602}};
    scenario.mu0 = TypeDistribution{{0.35, 0.65}};

    // zero step: identical before/after
    std::vector<double> d = {-1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    DesignStepReport still = design_step(scenario, mu, d, 0.0);
    CHECK(still.no_op);
    CHECK(still.accepted);
    CHECK(still.intensity_after == still.intensity_before);
    CHECK(still.w1_after == still.w1_before);

    // a direction that raises the gap collapses to a failure report
    std::vector<double> bad = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    DesignStepReport fail = design_step(scenario, mu, bad, 1e-3);
    CHECK_FALSE(fail.accepted);
    CHECK(fail.mu_after == fail.mu_before);

    CHECK_THROWS_AS(design_step(scenario, mu, std::vector<double>{0.5, 0.6}, 1e-3),
                    std::invalid_argument);
}

TEST_CASE("frozen re-solves reproduce the base actions") {
    Scenario scenario = smooth_sensitivity_scenario(3);
    SensitivityBase base = sensitivity_base(scenario, scenario.mu0);
    CHECK(resolve_benchmark_action(scenario, base, scenario.mu0.weights) ==
          doctest::Approx(base.x_star).epsilon(1e-7));
    CHECK(resolve_agent_action(scenario, base, scenario.mu0.weights) ==
          doctest::Approx(base.x_agent).epsilon(1e-7));
}

TEST_CASE("analytic action derivatives match finite differences per measure") {
    // exercise every envelope branch of the analytic derivative
    Scenario scenario = smooth_sensitivity_scenario(2);
    scenario.types = TypeSpace{{RiskMeasureSpec::expectation(),
                                RiskMeasureSpec::semideviation(0.8),
                                RiskMeasureSpec::avar(0.5)}};
    scenario.mu0 = TypeDistribution{{0.3, 0.4, 0.3}};
    const Contract& contract = *scenario.contract;

    Rng rng(41);
    for (int i = 0; i < 25; ++i) {
        double x = rng.uniform(0.05, 0.95);
        double analytic = agent_stationarity(scenario, scenario.mu0.weights, contract, x);
        double h = 1e-6;
        double fd = (agent_objective_raw(scenario, scenario.mu0.weights, contract, x + h) -
                     agent_objective_raw(scenario, scenario.mu0.weights, contract, x - h)) /
                    (2 * h);
        CHECK(analytic == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("table families drive the solvers") {
    Scenario scenario{OutcomeModel{OutcomeGrid{{1, 2, 3}},
                                   {1.0 / 3, 1.0 / 3, 1.0 / 3},
                                   ActionFamily::table({0.0, 1.0},
                                                       {{0.3, 0.4, 0.3}, {0.5, 0.3, 0.2}})},
                      TypeSpace{{RiskMeasureSpec::expectation(),
                                 RiskMeasureSpec::semideviation(1.0)}},
                      TypeDistribution{{0.9, 0.1}},
                      DisutilitySpec{DisutilityShape::Quadratic, 2.0, 0.28},
                      2.0,
                      1.0,
                      ActionSet::discrete({0.0, 1.0}),
                      std::nullopt};
    scenario.validate();
    SolveReport report = solve_full_info(scenario, scenario.mu0);
    CHECK(report.ir_slack >= -1e-9);
    CHECK(report.ir_slack <= 1e-9);  // binding, as in the interpolated twin
    // rows match the interpolated family at the endpoints, so the solve does too
    Scenario twin = case_study_scenario();
    twin.contract.reset();
    twin.u_bar = 2.0;
    SolveReport twin_report = solve_full_info(twin, scenario.mu0);
    CHECK(report.objective == doctest::Approx(twin_report.objective).epsilon(1e-9));
    CHECK(report.action == twin_report.action);
}
