#pragma once

#include <span>
#include <string>
#include <vector>

#include "riskdesign/core_model.hpp"

namespace riskdesign {

/// Result of a contract solve. `objective` is the full principal cost
/// including the Wasserstein design term at the reported distribution.
struct SolveReport {
    Contract contract;
    double action = 0.0;
    double objective = 0.0;
    double ir_slack = 0.0;
    double alpha = 0.0;               // IR multiplier
    double beta = 0.0;                // IC multiplier (not estimated; IC is nested)
    double alpha_residual_norm = 0.0;
    TypeDistribution mu;
    std::vector<std::string> flags;
};

struct IrMultiplier {
    double alpha = 0.0;
    double residual_norm = 0.0;
    bool clamped = false;
    std::string method;  // "slack" | "interior_lsq" | "kkt_action" | "shadow_price"
};

struct HiddenSolveOptions {
    double mu_grid_step = 0.01;
    int refine_rounds = 2;  // each round shrinks the local grid step by 10x
};

/// Population-perceived cost of the contract at action x:
///   sum_i mu_i rho_i[ g(xi - w(xi)) ] + premium + m x.
double agent_objective(const Scenario& scenario, const TypeDistribution& mu,
                       const Contract& contract, double x);

/// Raw-coordinate variant used by sensitivity probes; `weights` need not be
/// a probability vector.
double agent_objective_raw(const Scenario& scenario, std::span<const double> weights,
                           const Contract& contract, double x);

/// argmin of agent_objective over the scenario's action set. Discrete sets
/// are enumerated; intervals use a 1001-point scan refined by golden
/// section. Ties resolve toward the smallest action.
double agent_best_response(const Scenario& scenario, const TypeDistribution& mu,
                           const Contract& contract);

/// Insurer cost without the design term: E[w + xi] for tabular plans,
/// E[c xi] - premium for linear ones.
double principal_stage_cost(const Scenario& scenario, const Contract& contract, double x);

/// Full principal cost: stage cost plus gamma W1(mu, mu0).
double principal_objective(const Scenario& scenario, const Contract& contract, double x,
                           const TypeDistribution& mu);

/// Benchmark with observable action: minimizes the principal cost subject to
/// participation only. Scenarios that pin a contract optimize the action
/// alone; otherwise the search runs over tabular coverage and the action.
/// Throws InfeasibleError when even full coverage cannot meet the threshold.
SolveReport solve_full_info(const Scenario& scenario, const TypeDistribution& mu);

/// Hidden-action design problem: minimizes the principal cost over coverage
/// and the type distribution with the action pinned to the agent's exact
/// best response. Desk-scale search: simplex grid over mu (refined locally)
/// with a nested coverage solve per candidate.
SolveReport solve_hidden_action(const Scenario& scenario, const HiddenSolveOptions& options = {});

/// Recovers the IR multiplier from the stationarity structure at (mu,
/// contract, x): complementary slackness when the constraint is slack, a
/// least-squares fit of the pointwise coverage stationarity when optimized
/// coverage has interior coordinates, the action-KKT ratio for pinned
/// contracts on smooth action intervals, and a finite-difference shadow
/// price of the threshold otherwise.
IrMultiplier recover_ir_multiplier(const Scenario& scenario, const TypeDistribution& mu,
                                   const Contract& contract, double x);

}  // namespace riskdesign
