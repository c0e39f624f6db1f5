#pragma once

#include <span>
#include <string>
#include <vector>

namespace riskdesign {

enum class RiskKind { Expectation, AbsSemiDeviation, AverageValueAtRisk };

/// A coherent risk measure acting on discrete random costs.
///
/// Supported measures:
///   Expectation            rho[Z] = E[Z]
///   AbsSemiDeviation(k)    rho[Z] = E[Z] + k E[(Z - E[Z])+],  k in (0,1]
///   AverageValueAtRisk(a)  rho[Z] = min_t { t + E[(Z - t)+] / a },  a in (0,1]
///
/// The semideviation weight is restricted to (0,1]; beyond 1 the measure
/// loses monotonicity and stops being coherent.
struct RiskMeasureSpec {
    RiskKind kind = RiskKind::Expectation;
    double kappa = 1.0;
    double alpha = 1.0;

    static RiskMeasureSpec expectation() { return {RiskKind::Expectation, 1.0, 1.0}; }
    static RiskMeasureSpec semideviation(double kappa) {
        return {RiskKind::AbsSemiDeviation, kappa, 1.0};
    }
    static RiskMeasureSpec avar(double alpha) {
        return {RiskKind::AverageValueAtRisk, 1.0, alpha};
    }

    void validate() const;
    std::string kind_name() const;
};

/// Maximizing density of the dual representation rho[Z] = max { E[zeta Z] }
/// over the measure's risk envelope. Weights are relative to the current
/// probability row: zeta >= 0 and E_probs[zeta] = 1.
///
/// `tie` is set when the maximizer is not unique (an outcome sits exactly at
/// the semideviation mean or at the AVaR quantile with splittable mass).
struct EnvelopeDensity {
    std::vector<double> weights;
    bool tie = false;
};

struct EnvelopeLpResult {
    EnvelopeDensity density;
    double objective = 0.0;
};

double evaluate(const RiskMeasureSpec& spec, std::span<const double> z,
                std::span<const double> probs);

/// Closed-form maximizer of the dual representation.
///   Expectation:      zeta = 1
///   AbsSemiDeviation: zeta = 1 + kappa (h - E[h]),  h = 1{Z > E[Z]}
///   AVaR:             zeta = 1/alpha on {Z > t*}, fractional weight at
///                     Z = t* so that E[zeta] = 1, zero below
/// where t* is the smallest outcome with P(Z > t*) <= alpha.
EnvelopeDensity envelope_density(const RiskMeasureSpec& spec, std::span<const double> z,
                                 std::span<const double> probs);

/// Solves the envelope maximization directly as a small dense linear
/// program. Serves as the independent oracle for envelope_density: the
/// objective value must agree with evaluate() up to LP tolerance.
EnvelopeLpResult envelope_lp_oracle(const RiskMeasureSpec& spec, std::span<const double> z,
                                    std::span<const double> probs);

/// Population-weighted risk:  sum_i weights[i] * rho_{types[i]}[Z].
double mixture_risk(std::span<const RiskMeasureSpec> types, std::span<const double> weights,
                    std::span<const double> z, std::span<const double> probs);

}  // namespace riskdesign
