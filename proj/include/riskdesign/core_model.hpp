#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "riskdesign/risk_measures.hpp"

namespace riskdesign {

/// Ordered loss levels xi_1 < ... < xi_m (monetary units).
struct OutcomeGrid {
    std::vector<double> points;

    explicit OutcomeGrid(std::vector<double> pts);
    std::size_t size() const { return points.size(); }
};

enum class FamilyKind { Table, Linear };

/// Action-parameterized probability rows over the grid. Either a table of
/// rows aligned with a discrete action list, or the linear interpolation
/// p(x) = (1-x) low + x high on x in [0,1].
struct ActionFamily {
    FamilyKind kind = FamilyKind::Linear;
    std::vector<double> actions;             // Table: declared action values
    std::vector<std::vector<double>> rows;   // Table: one simplex row per action
    std::vector<double> low, high;           // Linear: endpoint rows

    static ActionFamily table(std::vector<double> actions, std::vector<std::vector<double>> rows);
    static ActionFamily linear(std::vector<double> low, std::vector<double> high);
};

struct OutcomeModel {
    OutcomeGrid grid;
    std::vector<double> reference_probs;
    ActionFamily family;

    OutcomeModel(OutcomeGrid g, std::vector<double> reference, ActionFamily fam);
};

/// Probability row of the outcome model at action x.
std::vector<double> density(const OutcomeModel& model, double x);

/// Derivative of the probability row with respect to the action. Exact for
/// the linear family; finite differences on the action grid for tables with
/// at least two equispaced actions.
std::vector<double> density_dx(const OutcomeModel& model, double x);

/// sum_k values_k probs_k with a length check.
double expectation(std::span<const double> values, std::span<const double> probs);

/// Ordered risk preference types; the position index defines the ground
/// metric |i - j| used by the transport module.
struct TypeSpace {
    std::vector<RiskMeasureSpec> types;

    explicit TypeSpace(std::vector<RiskMeasureSpec> t);
    std::size_t size() const { return types.size(); }
};

struct TypeDistribution {
    std::vector<double> weights{1.0};  // default: a single-type point mass

    TypeDistribution() = default;
    explicit TypeDistribution(std::vector<double> w);
    std::size_t size() const { return weights.size(); }
};

enum class DisutilityShape { Identity, Quadratic, Power };

/// Shape of the agent's random cost U = g(xi - w(xi)) + m x with g convex
/// and nondecreasing on the loss range.
struct DisutilitySpec {
    DisutilityShape shape = DisutilityShape::Quadratic;
    double power = 2.0;           // exponent for the Power shape
    double investment_cost = 0.0; // m >= 0

    void validate() const;
    double g(double t) const;
    double g_prime(double t) const;
};

struct TabularContract {
    std::vector<double> coverage;
};

struct LinearContract {
    double coverage_fraction = 0.5;  // strictly inside (0, 1)
    double premium = 1.0;            // > 0
};

using Contract = std::variant<TabularContract, LinearContract>;

/// Throws unless coverage respects 0 <= w(xi_k) <= xi_k (tabular) or the
/// linear parameter ranges.
void validate_contract(const Contract& contract, const OutcomeGrid& grid);

/// Coverage amount per grid point implied by the contract.
std::vector<double> coverage_row(const Contract& contract, const OutcomeGrid& grid);

/// Per-grid-point perceived cost g(xi - w(xi)); premium and investment cost
/// enter separately as deterministic shifts.
std::vector<double> residual_cost_row(const OutcomeGrid& grid, const Contract& contract,
                                      const DisutilitySpec& disutility);

/// Premium paid by the agent under the contract (zero for tabular plans).
double contract_premium(const Contract& contract);

enum class ActionSetKind { Discrete, Interval };

struct ActionSet {
    ActionSetKind kind = ActionSetKind::Discrete;
    std::vector<double> values;  // Discrete
    double lo = 0.0, hi = 1.0;   // Interval

    static ActionSet discrete(std::vector<double> values);
    static ActionSet interval(double lo, double hi);
    bool contains(double x, double tol = 1e-12) const;
};

/// A complete design problem instance: outcome model, typed population,
/// disutility shape, participation threshold, design cost weight, and the
/// admissible actions. A scenario may pin a fixed contract (the linear
/// ransomware preset does); solvers then optimize over the remaining
/// degrees of freedom only.
struct Scenario {
    OutcomeModel model;
    TypeSpace types;
    TypeDistribution mu0;
    DisutilitySpec disutility;
    double u_bar = 1.0;
    double gamma = 1.0;
    ActionSet actions;
    std::optional<Contract> contract;

    void validate() const;
};

}  // namespace riskdesign
