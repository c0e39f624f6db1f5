#pragma once

#include <functional>
#include <span>
#include <vector>

#include "riskdesign/core_model.hpp"

namespace riskdesign {

/// Classification of every grid point relative to the envelope maximizer of
/// one type (below / at / above the semideviation mean or AVaR quantile).
/// Two equal signatures mean the envelope is the same piecewise-constant
/// function, so frozen-indicator calculus applies between the two points.
struct EnvelopeSignature {
    std::vector<int> classes;
    bool tie = false;

    bool operator==(const EnvelopeSignature&) const = default;
};

EnvelopeSignature envelope_signature(const RiskMeasureSpec& spec, std::span<const double> z,
                                     std::span<const double> probs);

/// Envelope density of each type at the contract's residual cost row under
/// the probability row of action x.
std::vector<EnvelopeDensity> envelope_rows(const Scenario& scenario, const Contract& contract,
                                           double x);

struct DxResult {
    double value = 0.0;
    bool used_finite_difference = false;  // envelope tie forced the fallback
};

/// d/dx of sum_i weights[i] rho_i[ g(xi - w(xi)) ] at action x. Analytic
/// while each type's envelope indicators are locally constant; falls back to
/// a central finite difference (step 1e-6) at ties.
DxResult risk_mixture_dx(const Scenario& scenario, std::span<const double> weights,
                         const Contract& contract, double x);

/// d/dx of the insurer's stage cost at the contract (coverage-plus-loss for
/// tabular plans, covered-loss-minus-premium for linear ones).
double stage_cost_dx(const Scenario& scenario, const Contract& contract, double x);

/// Central difference that degrades to a second-order one-sided stencil
/// near the bounds of the admissible interval.
double safe_dx(const std::function<double(double)>& f, double x, double h, double lo, double hi);

}  // namespace riskdesign
