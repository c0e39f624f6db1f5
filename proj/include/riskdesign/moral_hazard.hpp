#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskdesign/contract_solvers.hpp"
#include "riskdesign/core_model.hpp"
#include "riskdesign/transport.hpp"

namespace riskdesign {

/// Frozen quantities for the action-sensitivity system: the benchmark
/// contract, its IR multiplier, and the two stationary actions. The
/// sensitivity formula differentiates the stationarity conditions with the
/// contract and multiplier held fixed; re-solving them is exposed separately
/// as a diagnostic.
struct SensitivityBase {
    Contract contract;
    double alpha = 0.0;
    double x_star = 0.0;
    double x_agent = 0.0;
};

struct ImhReport {
    double benchmark_action = 0.0;
    double agent_action = 0.0;
    double intensity = 0.0;  // benchmark_action - agent_action
    bool grad_available = false;
    std::vector<double> grad;
    std::string grad_error;
    std::vector<double> dual_potential;  // b* of the design-cost term
    std::optional<std::vector<double>> direction;
    SolveReport benchmark;
};

struct DesignStepReport {
    bool accepted = false;
    bool no_op = false;
    double step_requested = 0.0;
    double step_used = 0.0;
    int halvings = 0;
    double intensity_before = 0.0;
    double intensity_after = 0.0;
    double w1_before = 0.0;
    double w1_after = 0.0;
    std::vector<double> mu_before;
    std::vector<double> mu_after;
};

/// Derivative of the agent's mixture objective in the action,
/// d/dx [ sum_i weights_i rho_i[U(w, x)] ] with U = g(xi - w) + m x.
double agent_stationarity(const Scenario& scenario, std::span<const double> weights,
                          const Contract& contract, double x);

/// Derivative in the action of the benchmark Lagrangian: the insurer's stage
/// cost term plus alpha times the agent term.
double benchmark_stationarity(const Scenario& scenario, std::span<const double> weights,
                              const Contract& contract, double x, double alpha);

/// Solves the benchmark and the agent response at mu and packages the frozen
/// sensitivity system.
SensitivityBase sensitivity_base(const Scenario& scenario, const TypeDistribution& mu);

/// Re-solves the benchmark stationarity root for perturbed raw weights with
/// the frozen contract and multiplier (the oracle counterpart of the
/// sensitivity formula).
double resolve_benchmark_action(const Scenario& scenario, const SensitivityBase& base,
                                std::span<const double> weights);

double resolve_agent_action(const Scenario& scenario, const SensitivityBase& base,
                            std::span<const double> weights);

/// Gradient of the intensity of moral hazard in the type weights: component
/// i is J2^{-1} dH2/dmu_i at the agent action minus J1^{-1} dH1/dmu_i at the
/// benchmark action, with Jacobians and partials by central differences and
/// raw (unnormalized) coordinate perturbations. Requires a smooth action
/// family and interior, isolated optima; violations raise NumericalError /
/// UnsupportedError naming the failed precondition.
std::vector<double> imh_gradient(const Scenario& scenario, const TypeDistribution& mu);

/// Benchmark action, exact agent response at the benchmark contract, their
/// gap, the design-cost dual potential, and (when the sensitivity
/// preconditions hold) the gradient and a mitigating direction.
ImhReport imh(const Scenario& scenario, const TypeDistribution& mu);

/// Zero-sum unit direction d with d'grad <= 0 and d'b_star <= 0, or nullopt
/// exactly when the zero-sum projections of grad and -b_star are positively
/// parallel (no direction can lower both the intensity and the design cost
/// to first order).
std::optional<std::vector<double>> mitigating_direction(std::span<const double> grad,
                                                        std::span<const double> b_star);

/// Applies mu' = project(mu + c dmu), re-solves the intensity on both sides,
/// and halves the step (up to 20 times) while the intensity increases.
DesignStepReport design_step(const Scenario& scenario, const TypeDistribution& mu,
                             std::span<const double> dmu, double c_step);

}  // namespace riskdesign
