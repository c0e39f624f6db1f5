#include "riskdesign/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"

namespace riskdesign {

namespace {

double value_scale(std::span<const double> z) {
    double scale = 1.0;
    for (double v : z) scale = std::max(scale, std::abs(v));
    return scale;
}

// Smallest atom value with P(Z > value) <= alpha.
double avar_quantile_value(const RiskMeasureSpec& spec, std::span<const double> z,
                           std::span<const double> probs) {
    std::vector<std::size_t> order(z.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    const double tol = 1e-12 * value_scale(z);
    double below = 0.0;
    for (std::size_t pos = 0; pos < order.size();) {
        double value = z[order[pos]];
        double at_value = 0.0;
        while (pos < order.size() && z[order[pos]] <= value + tol) {
            at_value += probs[order[pos]];
            ++pos;
        }
        below += at_value;
        if (at_value > 0.0 && 1.0 - below <= spec.alpha + 1e-15) return value;
    }
    return z[order.back()];
}

}  // namespace

EnvelopeSignature envelope_signature(const RiskMeasureSpec& spec, std::span<const double> z,
                                     std::span<const double> probs) {
    EnvelopeSignature sig;
    sig.classes.assign(z.size(), 0);
    const double tol = 1e-12 * value_scale(z);
    switch (spec.kind) {
        case RiskKind::Expectation:
            return sig;
        case RiskKind::AbsSemiDeviation: {
            double mean = dot(z, probs);
            for (std::size_t k = 0; k < z.size(); ++k) {
                if (z[k] > mean + tol)
                    sig.classes[k] = 2;
                else if (z[k] >= mean - tol)
                    sig.classes[k] = 1;
                if (probs[k] > 0.0 && sig.classes[k] == 1) sig.tie = true;
            }
            return sig;
        }
        case RiskKind::AverageValueAtRisk: {
            double t = avar_quantile_value(spec, z, probs);
            for (std::size_t k = 0; k < z.size(); ++k) {
                if (z[k] > t + tol)
                    sig.classes[k] = 2;
                else if (z[k] >= t - tol)
                    sig.classes[k] = 1;
            }
            sig.tie = envelope_density(spec, z, probs).tie;
            return sig;
        }
    }
    return sig;
}

std::vector<EnvelopeDensity> envelope_rows(const Scenario& scenario, const Contract& contract,
                                           double x) {
    std::vector<double> z = residual_cost_row(scenario.model.grid, contract, scenario.disutility);
    std::vector<double> q = density(scenario.model, x);
    std::vector<EnvelopeDensity> rows;
    rows.reserve(scenario.types.size());
    for (const auto& type : scenario.types.types) rows.push_back(envelope_density(type, z, q));
    return rows;
}

DxResult risk_mixture_dx(const Scenario& scenario, std::span<const double> weights,
                         const Contract& contract, double x) {
    if (scenario.model.family.kind != FamilyKind::Linear)
        throw UnsupportedError("risk_mixture_dx: the action family has no smooth parameterization");
    std::vector<double> z = residual_cost_row(scenario.model.grid, contract, scenario.disutility);
    std::vector<double> q = density(scenario.model, x);
    std::vector<double> dq = density_dx(scenario.model, x);
    const std::size_t m = z.size();

    DxResult out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const RiskMeasureSpec& spec = scenario.types.types[i];
        EnvelopeSignature sig = envelope_signature(spec, z, q);
        if (sig.tie) {
            // Kink: differentiate the value numerically instead.
            double h = 1e-6;
            auto f = [&](double xx) {
                return evaluate(spec, z, density(scenario.model, xx));
            };
            out.value += weights[i] * safe_dx(f, x, h, 0.0, 1.0);
            out.used_finite_difference = true;
            continue;
        }
        switch (spec.kind) {
            case RiskKind::Expectation:
                out.value += weights[i] * dot(z, dq);
                break;
            case RiskKind::AbsSemiDeviation: {
                double mean = dot(z, q);
                double mean_dx = dot(z, dq);
                double h_mass = 0.0, upper_dx = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    if (sig.classes[k] == 2) {
                        h_mass += q[k];
                        upper_dx += dq[k] * (z[k] - mean);
                    }
                }
                out.value += weights[i] *
                             (mean_dx + spec.kappa * (upper_dx - h_mass * mean_dx));
                break;
            }
            case RiskKind::AverageValueAtRisk: {
                double t = avar_quantile_value(spec, z, q);
                double excess_dx = 0.0;
                for (std::size_t k = 0; k < m; ++k)
                    excess_dx += dq[k] * std::max(0.0, z[k] - t);
                out.value += weights[i] * excess_dx / spec.alpha;
                break;
            }
        }
    }
    return out;
}

double stage_cost_dx(const Scenario& scenario, const Contract& contract, double x) {
    std::vector<double> dq = density_dx(scenario.model, x);
    const auto& grid = scenario.model.grid;
    if (const auto* lin = std::get_if<LinearContract>(&contract)) {
        double total = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k)
            total += dq[k] * lin->coverage_fraction * grid.points[k];
        return total;
    }
    const auto& tab = std::get<TabularContract>(contract);
    double total = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        total += dq[k] * (tab.coverage[k] + grid.points[k]);
    return total;
}

double safe_dx(const std::function<double(double)>& f, double x, double h, double lo, double hi) {
    if (x - h >= lo && x + h <= hi) return (f(x + h) - f(x - h)) / (2.0 * h);
    if (x + h > hi)  // backward second-order stencil
        return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
}

}  // namespace riskdesign
