#pragma once

#include <optional>
#include <string>

#include "riskdesign/core_model.hpp"

namespace riskdesign {

/// Parameters of the built-in linear-contract ransomware scenario: coverage
/// fraction, premium, semideviation weight of the risk-averse type,
/// investment cost, and the baseline share of the risk-averse type.
struct CaseStudyParams {
    double coverage = 0.5;
    double premium = 1.0;
    double kappa = 1.0;
    double investment_cost = 0.28;
    double mu2_baseline = 0.1;
    double gamma = 2.0;

    void validate() const;
};

/// The built-in scenario: losses (1, 2, 3), probability rows (0.3, 0.4, 0.3)
/// and (0.5, 0.3, 0.2) at the low/high investment, quadratic loss
/// perception, an expectation type and a semideviation type, and the pinned
/// linear contract. The participation threshold is the uninsured perceived
/// cost at the high investment, so indifference occurs exactly at the
/// maximal premium.
Scenario case_study_scenario(const CaseStudyParams& params = {});

/// Smooth variant used for sensitivity analysis: the same grid with an
/// action interval, a probability family chosen so both the benchmark and
/// the agent stationarity have interior isolated roots, and a pinned
/// tabular contract. n_types selects two types (expectation,
/// semideviation(1)) or three (adding semideviation(0.4)).
Scenario smooth_sensitivity_scenario(int n_types = 2);

struct CaseStudyReport {
    CaseStudyParams params;

    // participation
    double premium_bound_formula = 0.0;     // (2c - c^2)(3.5 + 1.25 kappa mu2)
    double premium_bound_bruteforce = 0.0;  // uninsured minus insured cost at x_H, zero premium
    bool bounds_agree = false;
    bool participation_ok = false;
    double indifference_gap_at_bound = 0.0;  // IR residual when the premium is set to the bound

    // incentive flip
    double printed_ic_threshold_rhs = 0.0;  // 1.1 c^2 + 0.6 kappa c^2 mu2 (as printed elsewhere)
    double oracle_flip_rhs_at_baseline = 0.0;  // (1-c)^2 (1.1 + 0.07 kappa mu2)
    bool thresholds_disagree = false;
    std::string threshold_note;
    std::optional<double> mu2_flip_threshold;         // algebraic root, if inside [0, 1]
    std::optional<double> mu2_flip_threshold_search;  // bisection on the actual best response
    double best_response_at_baseline = 0.0;

    // intensity before/after the minimal design move
    std::optional<double> imh_before;
    std::optional<double> mu2_design;
    std::optional<double> imh_after;

    // per-type decomposition of the uninsured perceived cost at x_H
    std::vector<double> type_mean;
    std::vector<double> type_deviation_addon;
};

CaseStudyReport run_case_study(const CaseStudyParams& params = {});

}  // namespace riskdesign
