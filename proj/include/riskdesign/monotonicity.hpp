#pragma once

#include <string>
#include <vector>

#include "riskdesign/core_model.hpp"

namespace riskdesign {

enum class CheckStatus { Pass, Fail, Inconclusive };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Fail;
    std::vector<double> values;
    std::vector<std::string> notes;
};

struct DiagnosticOptions {
    double x_step = 1e-4;          // central step for action derivatives
    double pointwise_step = 1e-6;  // step for the pointwise stationarity probe
};

/// First-order residual of incentive compatibility: the derivative of the
/// agent's mixture objective in the action (zero at interior responses).
double foc_ic_residual(const Scenario& scenario, const TypeDistribution& mu,
                       const Contract& contract, double x);

/// Per-grid-point residual of the pointwise coverage stationarity
///   -p = dU/dw * E_mu[ alpha pi + beta d/dx pi ],  pi = zeta-bar * p,
/// with densities taken against the reference row. Zero rows indicate
/// contracts consistent with the first-order optimality system.
std::vector<double> foc_pointwise_residual(const Scenario& scenario, const TypeDistribution& mu,
                                           const Contract& contract, double x, double alpha,
                                           double beta, const DiagnosticOptions& options = {});

/// Growth of total density mass in the action: d/dx of the grid sums of the
/// outcome density (against the reference row) and of each type's envelope
/// density. Passes when all are strictly positive.
CheckResult check_mass_growth(const Scenario& scenario, const TypeDistribution& mu,
                              const Contract& contract, double x,
                              const DiagnosticOptions& options = {});

/// Severe-loss avoidance: the population mean of d/dx zeta-bar must be
/// nondecreasing across the grid. Envelope kinks inside the probe window
/// make the check inconclusive.
CheckResult check_severe_loss_avoidance(const Scenario& scenario, const TypeDistribution& mu,
                                        const Contract& contract, double x,
                                        const DiagnosticOptions& options = {});

/// Risk-sensitive likelihood-ratio monotonicity: E_mu[zeta-bar] * (alpha +
/// beta * (dp/dx)/p) must be nondecreasing across the grid.
CheckResult check_risk_sensitive_mlr(const Scenario& scenario, const TypeDistribution& mu,
                                     const Contract& contract, double x, double alpha, double beta);

/// Classic monotone likelihood ratio: (dp/dx)/p nondecreasing at x.
bool check_mlr(const OutcomeModel& model, double x);

/// check_mlr with the raw ratios and both orientations reported.
CheckResult mlr_diagnostic(const OutcomeModel& model, double x);

/// Coverage plan nondecreasing in the loss (tolerance 1e-12).
bool check_monotone_contract(const TabularContract& contract);

}  // namespace riskdesign
