#include "riskdesign/core_model.hpp"

#include <cmath>
#include <stdexcept>

#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"

namespace riskdesign {

namespace {

void check_row(const std::vector<double>& row, std::size_t m, const char* what) {
    if (row.size() != m)
        throw std::invalid_argument(std::string(what) + ": row length does not match the grid");
    if (!is_simplex(row))
        throw std::invalid_argument(std::string(what) + ": row is not a probability row");
}

}  // namespace

OutcomeGrid::OutcomeGrid(std::vector<double> pts) : points(std::move(pts)) {
    if (points.size() < 2) throw std::invalid_argument("outcome grid needs at least 2 points");
    for (std::size_t k = 0; k + 1 < points.size(); ++k)
        if (!(points[k] < points[k + 1]))
            throw std::invalid_argument("outcome grid must be strictly increasing");
    for (double p : points)
        if (!std::isfinite(p)) throw std::invalid_argument("outcome grid has non-finite point");
}

ActionFamily ActionFamily::table(std::vector<double> actions,
                                 std::vector<std::vector<double>> rows) {
    ActionFamily fam;
    fam.kind = FamilyKind::Table;
    fam.actions = std::move(actions);
    fam.rows = std::move(rows);
    if (fam.actions.empty() || fam.actions.size() != fam.rows.size())
        throw std::invalid_argument("table family: one probability row per action required");
    for (std::size_t i = 0; i + 1 < fam.actions.size(); ++i)
        if (!(fam.actions[i] < fam.actions[i + 1]))
            throw std::invalid_argument("table family: actions must be strictly increasing");
    return fam;
}

ActionFamily ActionFamily::linear(std::vector<double> low, std::vector<double> high) {
    ActionFamily fam;
    fam.kind = FamilyKind::Linear;
    fam.low = std::move(low);
    fam.high = std::move(high);
    if (fam.low.size() != fam.high.size())
        throw std::invalid_argument("linear family: endpoint rows differ in length");
    return fam;
}

OutcomeModel::OutcomeModel(OutcomeGrid g, std::vector<double> reference, ActionFamily fam)
    : grid(std::move(g)), reference_probs(std::move(reference)), family(std::move(fam)) {
    const std::size_t m = grid.size();
    check_row(reference_probs, m, "outcome model reference");
    if (family.kind == FamilyKind::Table) {
        for (const auto& row : family.rows) check_row(row, m, "outcome model table");
    } else {
        check_row(family.low, m, "outcome model low endpoint");
        check_row(family.high, m, "outcome model high endpoint");
    }
}

std::vector<double> density(const OutcomeModel& model, double x) {
    if (model.family.kind == FamilyKind::Table) {
        for (std::size_t i = 0; i < model.family.actions.size(); ++i)
            if (std::abs(model.family.actions[i] - x) <= 1e-12) return model.family.rows[i];
        throw std::invalid_argument("density: action is not in the declared table");
    }
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("density: linear family requires x in [0, 1]");
    std::vector<double> row(model.grid.size());
    for (std::size_t k = 0; k < row.size(); ++k)
        row[k] = (1.0 - x) * model.family.low[k] + x * model.family.high[k];
    return row;
}

std::vector<double> density_dx(const OutcomeModel& model, double x) {
    if (model.family.kind == FamilyKind::Linear) {
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument("density_dx: linear family requires x in [0, 1]");
        std::vector<double> row(model.grid.size());
        for (std::size_t k = 0; k < row.size(); ++k)
            row[k] = model.family.high[k] - model.family.low[k];
        return row;
    }
    const auto& actions = model.family.actions;
    if (actions.size() < 2)
        throw UnsupportedError("density_dx: derivative undefined for an isolated discrete action");
    double step = actions[1] - actions[0];
    for (std::size_t i = 0; i + 1 < actions.size(); ++i)
        if (std::abs((actions[i + 1] - actions[i]) - step) > 1e-9)
            throw UnsupportedError("density_dx: table actions are not equispaced");
    std::size_t idx = actions.size();
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (std::abs(actions[i] - x) <= 1e-12) idx = i;
    if (idx == actions.size())
        throw std::invalid_argument("density_dx: action is not in the declared table");

    std::size_t lo = idx == 0 ? 0 : idx - 1;
    std::size_t hi = idx + 1 == actions.size() ? idx : idx + 1;
    double span = actions[hi] - actions[lo];
    std::vector<double> row(model.grid.size());
    for (std::size_t k = 0; k < row.size(); ++k)
        row[k] = (model.family.rows[hi][k] - model.family.rows[lo][k]) / span;
    return row;
}

double expectation(std::span<const double> values, std::span<const double> probs) {
    return dot(values, probs);
}

TypeSpace::TypeSpace(std::vector<RiskMeasureSpec> t) : types(std::move(t)) {
    if (types.empty()) throw std::invalid_argument("type space must contain at least one type");
    for (const auto& spec : types) spec.validate();
}

TypeDistribution::TypeDistribution(std::vector<double> w) : weights(std::move(w)) {
    if (weights.empty()) throw std::invalid_argument("type distribution is empty");
    if (!is_simplex(weights))
        throw std::invalid_argument("type distribution is not on the simplex");
}

void DisutilitySpec::validate() const {
    if (shape == DisutilityShape::Power && !(power >= 1.0))
        throw std::invalid_argument("disutility power must be >= 1 to stay convex");
    if (!(investment_cost >= 0.0) || !std::isfinite(investment_cost))
        throw std::invalid_argument("investment cost must be finite and nonnegative");
}

double DisutilitySpec::g(double t) const {
    switch (shape) {
        case DisutilityShape::Identity:
            return t;
        case DisutilityShape::Quadratic:
            return t * t;
        case DisutilityShape::Power:
            return std::pow(t, power);
    }
    return t;
}

double DisutilitySpec::g_prime(double t) const {
    switch (shape) {
        case DisutilityShape::Identity:
            return 1.0;
        case DisutilityShape::Quadratic:
            return 2.0 * t;
        case DisutilityShape::Power:
            return power * std::pow(t, power - 1.0);
    }
    return 1.0;
}

void validate_contract(const Contract& contract, const OutcomeGrid& grid) {
    if (const auto* tab = std::get_if<TabularContract>(&contract)) {
        if (tab->coverage.size() != grid.size())
            throw std::invalid_argument("tabular contract length does not match the grid");
        for (std::size_t k = 0; k < grid.size(); ++k) {
            double w = tab->coverage[k];
            if (!(w >= 0.0) || !(w <= grid.points[k]))
                throw std::invalid_argument(
                    "tabular contract: coverage must satisfy 0 <= w <= loss at every grid point");
        }
        return;
    }
    const auto& lin = std::get<LinearContract>(contract);
    if (!(lin.coverage_fraction > 0.0 && lin.coverage_fraction < 1.0))
        throw std::invalid_argument("linear contract: coverage fraction must lie strictly in (0, 1)");
    if (!(lin.premium > 0.0))
        throw std::invalid_argument("linear contract: premium must be positive");
}

std::vector<double> coverage_row(const Contract& contract, const OutcomeGrid& grid) {
    if (const auto* tab = std::get_if<TabularContract>(&contract)) return tab->coverage;
    const auto& lin = std::get<LinearContract>(contract);
    std::vector<double> row(grid.size());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = lin.coverage_fraction * grid.points[k];
    return row;
}

std::vector<double> residual_cost_row(const OutcomeGrid& grid, const Contract& contract,
                                      const DisutilitySpec& disutility) {
    std::vector<double> w = coverage_row(contract, grid);
    std::vector<double> row(grid.size());
    for (std::size_t k = 0; k < row.size(); ++k)
        row[k] = disutility.g(grid.points[k] - w[k]);
    return row;
}

double contract_premium(const Contract& contract) {
    if (const auto* lin = std::get_if<LinearContract>(&contract)) return lin->premium;
    return 0.0;
}

ActionSet ActionSet::discrete(std::vector<double> values) {
    ActionSet s;
    s.kind = ActionSetKind::Discrete;
    s.values = std::move(values);
    if (s.values.empty()) throw std::invalid_argument("discrete action set is empty");
    for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
        if (!(s.values[i] < s.values[i + 1]))
            throw std::invalid_argument("discrete action set must be strictly increasing");
    return s;
}

ActionSet ActionSet::interval(double lo, double hi) {
    ActionSet s;
    s.kind = ActionSetKind::Interval;
    s.lo = lo;
    s.hi = hi;
    if (!(lo <= hi)) throw std::invalid_argument("action interval is empty");
    return s;
}

bool ActionSet::contains(double x, double tol) const {
    if (kind == ActionSetKind::Interval) return x >= lo - tol && x <= hi + tol;
    for (double v : values)
        if (std::abs(v - x) <= tol) return true;
    return false;
}

void Scenario::validate() const {
    disutility.validate();
    if (types.size() != mu0.size())
        throw std::invalid_argument("scenario: baseline distribution dimension differs from types");
    if (!(u_bar > 0.0) || !std::isfinite(u_bar))
        throw std::invalid_argument("scenario: participation threshold must be finite and positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("scenario: design cost weight must be finite and positive");
    if (model.family.kind == FamilyKind::Table) {
        if (actions.kind != ActionSetKind::Discrete)
            throw std::invalid_argument("scenario: table families need a discrete action set");
        for (double x : actions.values)
            (void)density(model, x);  // every declared action must resolve to a row
    } else {
        if (actions.kind == ActionSetKind::Interval) {
            if (actions.lo < 0.0 || actions.hi > 1.0)
                throw std::invalid_argument("scenario: linear family actions must stay in [0, 1]");
        } else {
            for (double x : actions.values)
                if (x < 0.0 || x > 1.0)
                    throw std::invalid_argument("scenario: linear family actions must stay in [0, 1]");
        }
    }
    if (contract) validate_contract(*contract, model.grid);
}

}  // namespace riskdesign
