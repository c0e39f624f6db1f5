#include "riskdesign/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"
#include "riskdesign/simplex_lp.hpp"

namespace riskdesign {

namespace {

void check_inputs(std::span<const double> z, std::span<const double> probs) {
    if (z.size() != probs.size())
        throw std::invalid_argument("risk measure: cost and probability rows differ in length");
    if (z.empty()) throw std::invalid_argument("risk measure: empty cost row");
    if (!is_simplex(probs, 1e-9))
        throw std::invalid_argument("risk measure: probabilities are not on the simplex");
}

double value_scale(std::span<const double> z) {
    double scale = 1.0;
    for (double v : z) scale = std::max(scale, std::abs(v));
    return scale;
}

/// Smallest outcome value t* with P(Z > t*) <= alpha, over atoms with
/// positive probability.
double avar_quantile(std::span<const double> z, std::span<const double> probs, double alpha) {
    std::vector<std::size_t> order(z.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });

    const double tol = 1e-12 * value_scale(z);
    double below = 0.0;  // P(Z <= current value)
    for (std::size_t pos = 0; pos < order.size();) {
        double value = z[order[pos]];
        double at_value = 0.0;
        while (pos < order.size() && z[order[pos]] <= value + tol) {
            at_value += probs[order[pos]];
            ++pos;
        }
        below += at_value;
        if (at_value > 0.0 && 1.0 - below <= alpha + 1e-15) return value;
    }
    throw NumericalError("internal: AVaR quantile not found");
}

}  // namespace

void RiskMeasureSpec::validate() const {
    switch (kind) {
        case RiskKind::Expectation:
            return;
        case RiskKind::AbsSemiDeviation:
            if (!(kappa > 0.0 && kappa <= 1.0))
                throw std::invalid_argument("semideviation weight must lie in (0, 1]");
            return;
        case RiskKind::AverageValueAtRisk:
            if (!(alpha > 0.0 && alpha <= 1.0))
                throw std::invalid_argument("AVaR tail level must lie in (0, 1]");
            return;
    }
    throw std::invalid_argument("unknown risk measure kind");
}

std::string RiskMeasureSpec::kind_name() const {
    switch (kind) {
        case RiskKind::Expectation:
            return "expectation";
        case RiskKind::AbsSemiDeviation:
            return "semideviation";
        case RiskKind::AverageValueAtRisk:
            return "avar";
    }
    return "unknown";
}

double evaluate(const RiskMeasureSpec& spec, std::span<const double> z,
                std::span<const double> probs) {
    spec.validate();
    check_inputs(z, probs);
    switch (spec.kind) {
        case RiskKind::Expectation:
            return dot(z, probs);
        case RiskKind::AbsSemiDeviation: {
            double mean = dot(z, probs);
            double upper = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k)
                upper += probs[k] * std::max(0.0, z[k] - mean);
            return mean + spec.kappa * upper;
        }
        case RiskKind::AverageValueAtRisk: {
            double t = avar_quantile(z, probs, spec.alpha);
            double excess = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k)
                excess += probs[k] * std::max(0.0, z[k] - t);
            return t + excess / spec.alpha;
        }
    }
    throw std::invalid_argument("unknown risk measure kind");
}

EnvelopeDensity envelope_density(const RiskMeasureSpec& spec, std::span<const double> z,
                                 std::span<const double> probs) {
    spec.validate();
    check_inputs(z, probs);
    const std::size_t m = z.size();
    EnvelopeDensity out;
    out.weights.assign(m, 1.0);

    switch (spec.kind) {
        case RiskKind::Expectation:
            return out;
        case RiskKind::AbsSemiDeviation: {
            double mean = dot(z, probs);
            const double tol = 1e-12 * value_scale(z);
            double h_mean = 0.0;
            std::vector<double> h(m, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                if (z[k] > mean + tol) h[k] = 1.0;
                if (probs[k] > 0.0 && std::abs(z[k] - mean) <= tol) out.tie = true;
                h_mean += probs[k] * h[k];
            }
            for (std::size_t k = 0; k < m; ++k)
                out.weights[k] = 1.0 + spec.kappa * (h[k] - h_mean);
            return out;
        }
        case RiskKind::AverageValueAtRisk: {
            double t = avar_quantile(z, probs, spec.alpha);
            const double tol = 1e-12 * value_scale(z);
            double tail = 0.0, boundary = 0.0;
            std::size_t boundary_atoms = 0;
            for (std::size_t k = 0; k < m; ++k) {
                if (z[k] > t + tol)
                    tail += probs[k];
                else if (z[k] >= t - tol) {
                    boundary += probs[k];
                    if (probs[k] > 0.0) ++boundary_atoms;
                }
            }
            double residual = 1.0 - tail / spec.alpha;  // in [0, boundary/alpha]
            double boundary_weight = boundary > 0.0 ? residual / boundary : 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                if (z[k] > t + tol)
                    out.weights[k] = 1.0 / spec.alpha;
                else if (z[k] >= t - tol)
                    out.weights[k] = boundary_weight;
                else
                    out.weights[k] = 0.0;
            }
            // The split across boundary atoms is free whenever the shared
            // weight is strictly between its bounds.
            out.tie = boundary_atoms >= 2 && boundary_weight > tol &&
                      boundary_weight < 1.0 / spec.alpha - tol;
            return out;
        }
    }
    throw std::invalid_argument("unknown risk measure kind");
}

EnvelopeLpResult envelope_lp_oracle(const RiskMeasureSpec& spec, std::span<const double> z,
                                    std::span<const double> probs) {
    spec.validate();
    check_inputs(z, probs);
    const std::size_t m = z.size();
    EnvelopeLpResult out;

    auto require_optimal = [](const LpResult& lp) {
        if (lp.status != LpStatus::Optimal)
            throw NumericalError("internal: risk envelope LP did not solve (envelope is never empty)");
    };

    switch (spec.kind) {
        case RiskKind::Expectation:
        case RiskKind::AverageValueAtRisk: {
            // max sum_k probs_k z_k zeta_k  s.t.  zeta_k <= cap, E[zeta] = 1.
            double cap = spec.kind == RiskKind::Expectation ? 1.0 : 1.0 / spec.alpha;
            std::vector<std::vector<double>> A;
            std::vector<double> b;
            for (std::size_t k = 0; k < m; ++k) {
                std::vector<double> row(m, 0.0);
                row[k] = 1.0;
                A.push_back(row);
                b.push_back(cap);
            }
            std::vector<double> prow(probs.begin(), probs.end());
            A.push_back(prow);
            b.push_back(1.0);
            for (auto& v : prow) v = -v;
            A.push_back(prow);
            b.push_back(-1.0);

            std::vector<double> c(m);
            for (std::size_t k = 0; k < m; ++k) c[k] = probs[k] * z[k];
            LpResult lp = lp_solve_max(A, b, c);
            require_optimal(lp);
            out.density.weights = lp.x;
            out.objective = lp.objective;
            return out;
        }
        case RiskKind::AbsSemiDeviation: {
            // Envelope parameterized as zeta = 1 + h - E[h] with 0 <= h <= kappa:
            // max E[Z] + sum_k probs_k (z_k - E[Z]) h_k.
            double mean = dot(z, probs);
            std::vector<std::vector<double>> A;
            std::vector<double> b;
            for (std::size_t k = 0; k < m; ++k) {
                std::vector<double> row(m, 0.0);
                row[k] = 1.0;
                A.push_back(row);
                b.push_back(spec.kappa);
            }
            std::vector<double> c(m);
            for (std::size_t k = 0; k < m; ++k) c[k] = probs[k] * (z[k] - mean);
            LpResult lp = lp_solve_max(A, b, c);
            require_optimal(lp);
            double h_mean = dot(lp.x, probs);
            out.density.weights.assign(m, 0.0);
            for (std::size_t k = 0; k < m; ++k)
                out.density.weights[k] = 1.0 + lp.x[k] - h_mean;
            out.objective = mean + lp.objective;
            return out;
        }
    }
    throw std::invalid_argument("unknown risk measure kind");
}

double mixture_risk(std::span<const RiskMeasureSpec> types, std::span<const double> weights,
                    std::span<const double> z, std::span<const double> probs) {
    if (types.size() != weights.size())
        throw std::invalid_argument("mixture_risk: type and weight dimensions differ");
    double total = 0.0;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (weights[i] == 0.0) continue;
        total += weights[i] * evaluate(types[i], z, probs);
    }
    return total;
}

}  // namespace riskdesign
