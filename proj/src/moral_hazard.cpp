#include "riskdesign/moral_hazard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskdesign/derivatives.hpp"
#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"

namespace riskdesign {

namespace {

constexpr double kMuStep = 1e-5;       // raw-coordinate perturbation for dH/dmu_i
constexpr double kJacobianStep = 1e-5; // action perturbation for dH/dx
constexpr double kInteriorMargin = 1e-6;

void require_smooth_interval(const Scenario& scenario) {
    if (scenario.model.family.kind != FamilyKind::Linear)
        throw UnsupportedError("sensitivity requires the smooth (linear) action family");
    if (scenario.actions.kind != ActionSetKind::Interval)
        throw UnsupportedError("sensitivity requires an interval action set");
}

double find_stationary_root(const std::function<double(double)>& h, double center, double lo,
                            double hi, const char* what) {
    // Expand a bracket around the known root until the stationarity changes
    // sign; the optima are isolated so a small bracket suffices.
    for (double radius = 1e-3; radius <= (hi - lo); radius *= 2.0) {
        double a = std::max(lo, center - radius);
        double b = std::min(hi, center + radius);
        double ha = h(a), hb = h(b);
        if (ha == 0.0) return a;
        if (hb == 0.0) return b;
        if ((ha > 0.0) != (hb > 0.0)) return bisect_root(h, a, b, 1e-13);
        if (a == lo && b == hi) break;
    }
    throw NumericalError(std::string(what) + ": stationarity root lost under perturbation");
}

}  // namespace

double agent_stationarity(const Scenario& scenario, std::span<const double> weights,
                          const Contract& contract, double x) {
    DxResult dx = risk_mixture_dx(scenario, weights, contract, x);
    double weight_mass = sum(weights);
    return dx.value + scenario.disutility.investment_cost * weight_mass;
}

double benchmark_stationarity(const Scenario& scenario, std::span<const double> weights,
                              const Contract& contract, double x, double alpha) {
    return stage_cost_dx(scenario, contract, x) +
           alpha * agent_stationarity(scenario, weights, contract, x);
}

SensitivityBase sensitivity_base(const Scenario& scenario, const TypeDistribution& mu) {
    SolveReport report = solve_full_info(scenario, mu);
    SensitivityBase base;
    base.contract = report.contract;
    base.alpha = report.alpha;
    base.x_star = report.action;
    base.x_agent = agent_best_response(scenario, mu, report.contract);
    return base;
}

double resolve_benchmark_action(const Scenario& scenario, const SensitivityBase& base,
                                std::span<const double> weights) {
    require_smooth_interval(scenario);
    auto h = [&](double x) {
        return benchmark_stationarity(scenario, weights, base.contract, x, base.alpha);
    };
    return find_stationary_root(h, base.x_star, scenario.actions.lo, scenario.actions.hi,
                                "benchmark action");
}

double resolve_agent_action(const Scenario& scenario, const SensitivityBase& base,
                            std::span<const double> weights) {
    require_smooth_interval(scenario);
    auto h = [&](double x) { return agent_stationarity(scenario, weights, base.contract, x); };
    return find_stationary_root(h, base.x_agent, scenario.actions.lo, scenario.actions.hi,
                                "agent action");
}

std::vector<double> imh_gradient(const Scenario& scenario, const TypeDistribution& mu) {
    require_smooth_interval(scenario);
    SensitivityBase base = sensitivity_base(scenario, mu);
    const double lo = scenario.actions.lo, hi = scenario.actions.hi;
    if (base.x_star < lo + kInteriorMargin || base.x_star > hi - kInteriorMargin)
        throw NumericalError("imh_gradient: benchmark action lies on the boundary");
    if (base.x_agent < lo + kInteriorMargin || base.x_agent > hi - kInteriorMargin)
        throw NumericalError("imh_gradient: agent action lies on the boundary");

    const std::size_t n = mu.size();
    auto h1 = [&](std::span<const double> weights, double x) {
        return benchmark_stationarity(scenario, weights, base.contract, x, base.alpha);
    };
    auto h2 = [&](std::span<const double> weights, double x) {
        return agent_stationarity(scenario, weights, base.contract, x);
    };

    double density_lo = std::max(lo, 0.0), density_hi = std::min(hi, 1.0);
    double j1 = safe_dx([&](double x) { return h1(mu.weights, x); }, base.x_star, kJacobianStep,
                        density_lo, density_hi);
    double j2 = safe_dx([&](double x) { return h2(mu.weights, x); }, base.x_agent, kJacobianStep,
                        density_lo, density_hi);
    if (std::abs(j1) <= 1e-8)
        throw NumericalError("imh_gradient: benchmark stationarity Jacobian is degenerate");
    if (std::abs(j2) <= 1e-8)
        throw NumericalError("imh_gradient: agent stationarity Jacobian is degenerate");

    std::vector<double> grad(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> up(mu.weights), down(mu.weights);
        up[i] += kMuStep;
        down[i] -= kMuStep;
        double dh1 = (h1(up, base.x_star) - h1(down, base.x_star)) / (2.0 * kMuStep);
        double dh2 = (h2(up, base.x_agent) - h2(down, base.x_agent)) / (2.0 * kMuStep);
        grad[i] = dh2 / j2 - dh1 / j1;
    }
    return grad;
}

ImhReport imh(const Scenario& scenario, const TypeDistribution& mu) {
    ImhReport report;
    report.benchmark = solve_full_info(scenario, mu);
    report.benchmark_action = report.benchmark.action;
    report.agent_action = agent_best_response(scenario, mu, report.benchmark.contract);
    report.intensity = report.benchmark_action - report.agent_action;
    report.dual_potential = w1_dual(mu, scenario.mu0).b;
    try {
        report.grad = imh_gradient(scenario, mu);
        report.grad_available = true;
        report.direction = mitigating_direction(report.grad, report.dual_potential);
    } catch (const UnsupportedError& e) {
        report.grad_error = e.what();
    } catch (const NumericalError& e) {
        report.grad_error = e.what();
    }
    return report;
}

std::optional<std::vector<double>> mitigating_direction(std::span<const double> grad,
                                                        std::span<const double> b_star) {
    if (grad.size() != b_star.size())
        throw std::invalid_argument("mitigating_direction: dimension mismatch");
    const std::size_t n = grad.size();
    if (n < 2) return std::nullopt;  // no zero-sum direction exists

    auto project = [n](std::span<const double> v) {
        double mean = sum(v) / static_cast<double>(n);
        std::vector<double> out(v.begin(), v.end());
        for (auto& e : out) e -= mean;
        return out;
    };
    auto norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double e : v) s += e * e;
        return std::sqrt(s);
    };

    std::vector<double> g = project(grad);
    std::vector<double> b = project(b_star);
    double ng = norm(g), nb = norm(b);
    const double tol = 1e-12;

    if (ng <= tol) {
        std::vector<double> d(n, 0.0);
        d[0] = -1.0 / std::sqrt(2.0);
        d[1] = 1.0 / std::sqrt(2.0);
        if (dot(d, b) > tol)
            for (auto& e : d) e = -e;
        return d;
    }
    if (nb <= tol) {
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] / ng;
        return d;
    }

    std::vector<double> bisector(n);
    double nbis = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        bisector[i] = g[i] / ng + b[i] / nb;
        nbis += bisector[i] * bisector[i];
    }
    nbis = std::sqrt(nbis);
    if (nbis <= 1e-9) return std::nullopt;  // grad positively parallel to -b*

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = -bisector[i] / nbis;
    return d;
}

DesignStepReport design_step(const Scenario& scenario, const TypeDistribution& mu,
                             std::span<const double> dmu, double c_step) {
    if (dmu.size() != mu.size())
        throw std::invalid_argument("design_step: direction dimension mismatch");
    if (std::abs(sum(dmu)) > 1e-9)
        throw std::invalid_argument("design_step: direction must sum to zero");
    if (!(c_step >= 0.0)) throw std::invalid_argument("design_step: step must be nonnegative");

    DesignStepReport report;
    report.step_requested = c_step;
    report.mu_before = mu.weights;
    report.intensity_before = imh(scenario, mu).intensity;
    report.w1_before = w1(mu, scenario.mu0);

    if (c_step == 0.0) {
        report.no_op = true;
        report.accepted = true;
        report.step_used = 0.0;
        report.mu_after = mu.weights;
        report.intensity_after = report.intensity_before;
        report.w1_after = report.w1_before;
        return report;
    }

    double c = c_step;
    for (int halving = 0; halving <= 20; ++halving) {
        if (c < 1e-12) break;  // step collapse
        std::vector<double> shifted(mu.weights);
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += c * dmu[i];
        TypeDistribution mu_next = project_simplex(shifted);
        double intensity_next = imh(scenario, mu_next).intensity;
        if (intensity_next <= report.intensity_before + 1e-12) {
            report.accepted = true;
            report.step_used = c;
            report.halvings = halving;
            report.mu_after = mu_next.weights;
            report.intensity_after = intensity_next;
            report.w1_after = w1(mu_next, scenario.mu0);
            return report;
        }
        c /= 2.0;
    }
    report.accepted = false;
    report.step_used = c;
    report.halvings = 20;
    report.mu_after = mu.weights;
    report.intensity_after = report.intensity_before;
    report.w1_after = report.w1_before;
    return report;
}

}  // namespace riskdesign
