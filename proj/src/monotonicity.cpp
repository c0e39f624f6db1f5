#include "riskdesign/monotonicity.hpp"

#include <cmath>

#include "riskdesign/derivatives.hpp"
#include "riskdesign/moral_hazard.hpp"
#include "riskdesign/numerics.hpp"

namespace riskdesign {

namespace {

// Envelope row of one type at the contract's residual costs under action x.
EnvelopeDensity type_envelope(const Scenario& scenario, const Contract& contract,
                              const RiskMeasureSpec& type, double x) {
    std::vector<double> z = residual_cost_row(scenario.model.grid, contract, scenario.disutility);
    return envelope_density(type, z, density(scenario.model, x));
}

EnvelopeSignature type_signature(const Scenario& scenario, const Contract& contract,
                                 const RiskMeasureSpec& type, double x) {
    std::vector<double> z = residual_cost_row(scenario.model.grid, contract, scenario.disutility);
    return envelope_signature(type, z, density(scenario.model, x));
}

std::pair<double, double> probe_window(const Scenario& scenario, double x, double h) {
    double lo = 0.0, hi = 1.0;
    if (scenario.actions.kind == ActionSetKind::Interval) {
        lo = std::max(lo, scenario.actions.lo);
        hi = std::min(hi, scenario.actions.hi);
    }
    double a = x - h, b = x + h;
    if (a < lo) {
        a = lo;
        b = std::min(hi, lo + 2.0 * h);
    } else if (b > hi) {
        b = hi;
        a = std::max(lo, hi - 2.0 * h);
    }
    return {a, b};
}

}  // namespace

double foc_ic_residual(const Scenario& scenario, const TypeDistribution& mu,
                       const Contract& contract, double x) {
    return agent_stationarity(scenario, mu.weights, contract, x);
}

std::vector<double> foc_pointwise_residual(const Scenario& scenario, const TypeDistribution& mu,
                                           const Contract& contract, double x, double alpha,
                                           double beta, const DiagnosticOptions& options) {
    validate_contract(contract, scenario.model.grid);
    const auto& grid = scenario.model.grid;
    const auto& ref = scenario.model.reference_probs;
    std::vector<double> q = density(scenario.model, x);
    std::vector<double> w = coverage_row(contract, grid);
    std::vector<double> z = residual_cost_row(grid, contract, scenario.disutility);

    std::vector<EnvelopeDensity> envelopes;
    for (const auto& type : scenario.types.types)
        envelopes.push_back(envelope_density(type, z, q));

    auto pi_at = [&](std::size_t i, std::size_t k, double xx) {
        std::vector<double> qq = density(scenario.model, xx);
        EnvelopeDensity env = envelope_density(scenario.types.types[i], z, qq);
        return env.weights[k] * qq[k] / ref[k];
    };

    std::vector<double> residual(grid.size(), 0.0);
    auto [lo, hi] = probe_window(scenario, x, options.pointwise_step);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (ref[k] <= 0.0) {
            residual[k] = 0.0;  // outside the reference support
            continue;
        }
        double p_k = q[k] / ref[k];
        double du_dw = -scenario.disutility.g_prime(grid.points[k] - w[k]);
        double expectation_term = 0.0;
        for (std::size_t i = 0; i < scenario.types.size(); ++i) {
            double term = alpha * envelopes[i].weights[k] * p_k;
            if (beta != 0.0) {
                double dpi = safe_dx([&](double xx) { return pi_at(i, k, xx); }, x,
                                     options.pointwise_step, lo, hi);
                term += beta * dpi;
            }
            expectation_term += mu.weights[i] * term;
        }
        residual[k] = -p_k - du_dw * expectation_term;
    }
    return residual;
}

CheckResult check_mass_growth(const Scenario& scenario, const TypeDistribution& mu,
                              const Contract& contract, double x,
                              const DiagnosticOptions& options) {
    (void)mu;
    CheckResult out;
    out.name = "mass_growth";
    const auto& ref = scenario.model.reference_probs;
    std::vector<double> dq = density_dx(scenario.model, x);

    double density_mass_dx = 0.0;
    bool support_gap = false;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        if (ref[k] <= 0.0) {
            support_gap = true;
            continue;
        }
        density_mass_dx += dq[k] / ref[k];
    }
    if (support_gap) out.notes.push_back("grid points outside the reference support were skipped");
    out.values.push_back(density_mass_dx);

    bool pass = density_mass_dx > 0.0;
    auto [lo, hi] = probe_window(scenario, x, options.x_step);
    for (const auto& type : scenario.types.types) {
        double envelope_mass_dx = safe_dx(
            [&](double xx) {
                EnvelopeDensity env = type_envelope(scenario, contract, type, xx);
                return sum(env.weights);
            },
            x, options.x_step, lo, hi);
        out.values.push_back(envelope_mass_dx);
        pass = pass && envelope_mass_dx > 0.0;
    }
    out.status = pass ? CheckStatus::Pass : CheckStatus::Fail;
    return out;
}

CheckResult check_severe_loss_avoidance(const Scenario& scenario, const TypeDistribution& mu,
                                        const Contract& contract, double x,
                                        const DiagnosticOptions& options) {
    CheckResult out;
    out.name = "severe_loss_avoidance";
    const auto& grid = scenario.model.grid;
    auto [lo, hi] = probe_window(scenario, x, options.x_step);

    bool kink = false;
    for (const auto& type : scenario.types.types) {
        EnvelopeSignature a = type_signature(scenario, contract, type, lo);
        EnvelopeSignature b = type_signature(scenario, contract, type, hi);
        if (!(a == b) || a.tie || b.tie) kink = true;
    }

    std::vector<double> mean_denv(grid.size(), 0.0);
    for (std::size_t i = 0; i < scenario.types.size(); ++i) {
        EnvelopeDensity env_lo = type_envelope(scenario, contract, scenario.types.types[i], lo);
        EnvelopeDensity env_hi = type_envelope(scenario, contract, scenario.types.types[i], hi);
        for (std::size_t k = 0; k < grid.size(); ++k)
            mean_denv[k] += mu.weights[i] * (env_hi.weights[k] - env_lo.weights[k]) / (hi - lo);
    }

    bool pass = true;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        double slope = (mean_denv[k + 1] - mean_denv[k]) / (grid.points[k + 1] - grid.points[k]);
        out.values.push_back(slope);
        pass = pass && slope >= -1e-8;
    }
    if (kink) {
        out.status = CheckStatus::Inconclusive;
        out.notes.push_back("envelope indicators change inside the probe window");
    } else {
        out.status = pass ? CheckStatus::Pass : CheckStatus::Fail;
    }
    return out;
}

CheckResult check_risk_sensitive_mlr(const Scenario& scenario, const TypeDistribution& mu,
                                     const Contract& contract, double x, double alpha,
                                     double beta) {
    CheckResult out;
    out.name = "risk_sensitive_mlr";
    const auto& grid = scenario.model.grid;
    std::vector<double> q = density(scenario.model, x);
    std::vector<double> dq = density_dx(scenario.model, x);
    std::vector<double> z = residual_cost_row(grid, contract, scenario.disutility);

    std::vector<double> e_bar(grid.size(), 0.0);
    for (std::size_t i = 0; i < scenario.types.size(); ++i) {
        EnvelopeDensity env = envelope_density(scenario.types.types[i], z, q);
        for (std::size_t k = 0; k < grid.size(); ++k)
            e_bar[k] += mu.weights[i] * env.weights[k];
    }

    std::vector<double> kept;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (q[k] <= 1e-15) {
            out.notes.push_back("zero-probability grid point " + std::to_string(k) + " excluded");
            continue;
        }
        kept.push_back(e_bar[k] * (alpha + beta * dq[k] / q[k]));
    }
    out.values = kept;
    bool pass = true;
    for (std::size_t k = 0; k + 1 < kept.size(); ++k)
        pass = pass && kept[k + 1] - kept[k] >= -1e-9;
    out.status = pass ? CheckStatus::Pass : CheckStatus::Fail;
    return out;
}

bool check_mlr(const OutcomeModel& model, double x) {
    std::vector<double> q = density(model, x);
    std::vector<double> dq = density_dx(model, x);
    double previous = 0.0;
    bool have_previous = false;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] <= 1e-15) continue;
        double ratio = dq[k] / q[k];
        if (have_previous && ratio < previous - 1e-9) return false;
        previous = ratio;
        have_previous = true;
    }
    return true;
}

CheckResult mlr_diagnostic(const OutcomeModel& model, double x) {
    CheckResult out;
    out.name = "mlr";
    std::vector<double> q = density(model, x);
    std::vector<double> dq = density_dx(model, x);
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] <= 1e-15) {
            out.notes.push_back("zero-probability grid point " + std::to_string(k) + " excluded");
            continue;
        }
        out.values.push_back(dq[k] / q[k]);
    }
    bool nondecreasing = true, nonincreasing = true;
    for (std::size_t k = 0; k + 1 < out.values.size(); ++k) {
        if (out.values[k + 1] < out.values[k] - 1e-9) nondecreasing = false;
        if (out.values[k + 1] > out.values[k] + 1e-9) nonincreasing = false;
    }
    out.status = nondecreasing ? CheckStatus::Pass : CheckStatus::Fail;
    out.notes.push_back(std::string("reversed orientation: ") +
                        (nonincreasing ? "pass" : "fail"));
    return out;
}

bool check_monotone_contract(const TabularContract& contract) {
    for (std::size_t k = 0; k + 1 < contract.coverage.size(); ++k)
        if (contract.coverage[k + 1] < contract.coverage[k] - 1e-12) return false;
    return true;
}

}  // namespace riskdesign
