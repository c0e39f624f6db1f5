#include "riskdesign/contract_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskdesign/derivatives.hpp"
#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"
#include "riskdesign/transport.hpp"

namespace riskdesign {

namespace {

constexpr double kIrTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> action_candidates(const ActionSet& actions, int interval_points = 1001) {
    if (actions.kind == ActionSetKind::Discrete) return actions.values;
    std::vector<double> xs(interval_points);
    for (int i = 0; i < interval_points; ++i)
        xs[i] = actions.lo +
                (actions.hi - actions.lo) * static_cast<double>(i) / (interval_points - 1);
    return xs;
}

double agent_cost_at(const Scenario& scenario, std::span<const double> weights,
                     const std::vector<double>& residual_row, double x) {
    std::vector<double> q = density(scenario.model, x);
    return mixture_risk(scenario.types.types, weights, residual_row, q) +
           scenario.disutility.investment_cost * x;
}

/// Smallest feasible action search on an interval when the stage cost is
/// affine in x (linear families): the constrained optimum sits either at an
/// interval end or on the participation boundary.
double pinned_interval_action(const Scenario& scenario, const TypeDistribution& mu,
                              const Contract& contract) {
    const double lo = scenario.actions.lo, hi = scenario.actions.hi;
    auto cost = [&](double x) { return agent_objective(scenario, mu, contract, x); };
    const double u_bar = scenario.u_bar;

    const int n_scan = 1001;
    std::vector<bool> feasible(n_scan);
    std::vector<double> xs(n_scan);
    bool any = false;
    for (int i = 0; i < n_scan; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / (n_scan - 1);
        feasible[i] = cost(xs[i]) <= u_bar + kIrTol;
        any = any || feasible[i];
    }
    if (!any) {
        double best = kInf;
        for (double x : xs) best = std::min(best, cost(x));
        throw InfeasibleError(
            "participation threshold cannot be met at the pinned contract; minimal perceived cost " +
                format_double(best),
            best);
    }

    double slope = stage_cost_dx(scenario, contract, (lo + hi) / 2.0);
    auto boundary_near = [&](int i_bad, int i_good) {
        if (cost(xs[i_good]) - u_bar >= 0.0) return xs[i_good];  // boundary within tolerance
        double root = bisect_root([&](double x) { return cost(x) - u_bar; }, std::min(xs[i_bad], xs[i_good]),
                                  std::max(xs[i_bad], xs[i_good]));
        // keep the feasible side
        if (cost(root) > u_bar + kIrTol) {
            double step = (xs[i_good] > xs[i_bad]) ? 1e-12 : -1e-12;
            while (cost(root) > u_bar + kIrTol) root += step;
        }
        return root;
    };

    if (std::abs(slope) <= 1e-14) {  // any feasible action works; take the smallest
        for (int i = 0; i < n_scan; ++i)
            if (feasible[i]) return (i > 0 && !feasible[i - 1]) ? boundary_near(i - 1, i) : xs[i];
    }
    if (slope > 0.0) {  // smallest feasible action
        for (int i = 0; i < n_scan; ++i) {
            if (!feasible[i]) continue;
            return (i > 0 && !feasible[i - 1]) ? boundary_near(i - 1, i) : xs[i];
        }
    }
    // largest feasible action
    for (int i = n_scan - 1; i >= 0; --i) {
        if (!feasible[i]) continue;
        return (i + 1 < n_scan && !feasible[i + 1]) ? boundary_near(i + 1, i) : xs[i];
    }
    throw NumericalError("internal: feasible action lost during refinement");
}

struct CoverageSolution {
    std::vector<double> w;
    double stage_cost = kInf;
    double agent_cost = kInf;
    bool feasible = false;
};

class CoverageProblem {
public:
    CoverageProblem(const Scenario& scenario, std::span<const double> weights, double x)
        : scenario_(scenario),
          weights_(weights.begin(), weights.end()),
          x_(x),
          q_(density(scenario.model, x)),
          grid_(scenario.model.grid.points) {}

    double perceived(const std::vector<double>& w) const {
        std::vector<double> z(grid_.size());
        for (std::size_t k = 0; k < z.size(); ++k)
            z[k] = scenario_.disutility.g(grid_[k] - w[k]);
        return mixture_risk(scenario_.types.types, weights_, z, q_) +
               scenario_.disutility.investment_cost * x_;
    }

    double stage(const std::vector<double>& w) const {
        double total = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k) total += q_[k] * (w[k] + grid_[k]);
        return total;
    }

    bool feasible(const std::vector<double>& w) const {
        return perceived(w) <= scenario_.u_bar + kIrTol;
    }

    // Smallest value of coordinate k keeping the plan feasible, others fixed.
    // Returns xi_k when even full coverage of the point cannot restore
    // feasibility (caller decides what that means).
    double min_feasible_coordinate(std::vector<double> w, std::size_t k) const {
        w[k] = 0.0;
        if (feasible(w)) return 0.0;
        w[k] = grid_[k];
        if (!feasible(w)) return grid_[k];
        if (perceived(w) - scenario_.u_bar >= 0.0) return grid_[k];  // boundary within tolerance
        double root = bisect_root(
            [&](double t) {
                w[k] = t;
                return perceived(w) - scenario_.u_bar;
            },
            0.0, grid_[k]);
        w[k] = root;
        while (!feasible(w)) {
            root = std::min(grid_[k], root + 1e-12);
            w[k] = root;
            if (root >= grid_[k]) break;
        }
        return root;
    }

    CoverageSolution solve() const {
        const std::size_t m = grid_.size();
        CoverageSolution best;

        std::vector<double> full = grid_;
        if (!feasible(full)) return best;  // even full coverage fails

        std::vector<double> zero(m, 0.0);
        if (feasible(zero)) {
            best.w = zero;
            best.feasible = true;
            best.stage_cost = stage(zero);
            best.agent_cost = perceived(zero);
            return best;
        }

        std::vector<std::vector<double>> starts = {zero, halves(), full};
        for (auto& start : starts) {
            std::vector<double> w = make_feasible(start);
            descend(w);
            consider(best, w);
        }
        // The multiplier-equalizing polish lands exactly on interior optima;
        // prefer it whenever it ties the incumbent.
        std::vector<double> polished;
        if (equalized_polish(best.w, polished) && feasible(polished) &&
            stage(polished) <= best.stage_cost + 1e-9) {
            best.w = polished;
            best.stage_cost = stage(polished);
            best.agent_cost = perceived(polished);
            best.feasible = true;
        }
        return best;
    }

private:
    std::vector<double> halves() const {
        std::vector<double> w(grid_.size());
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = grid_[k] / 2.0;
        return w;
    }

    std::vector<double> make_feasible(std::vector<double> w) const {
        for (std::size_t back = grid_.size(); back-- > 0 && !feasible(w);)
            w[back] = min_feasible_coordinate(w, back);
        return w;
    }

    void consider(CoverageSolution& best, const std::vector<double>& w) const {
        if (!feasible(w)) return;
        double cost = stage(w);
        bool better = cost < best.stage_cost - 1e-9;
        if (!better && cost <= best.stage_cost + 1e-9 && best.feasible)
            better = std::lexicographical_compare(w.begin(), w.end(), best.w.begin(), best.w.end());
        if (!best.feasible || better) {
            best.w = w;
            best.feasible = true;
            best.stage_cost = cost;
            best.agent_cost = perceived(w);
        }
    }

    void descend(std::vector<double>& w) const {
        const std::size_t m = grid_.size();
        double previous = stage(w);
        for (int round = 0; round < 200; ++round) {
            for (std::size_t k = 0; k < m; ++k) w[k] = min_feasible_coordinate(w, k);
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t k = 0; k < m; ++k)
                    if (j != k) exchange(w, j, k);
            double cost = stage(w);
            if (previous - cost <= 1e-10) break;
            previous = cost;
        }
    }

    // Moves along the participation surface: fixes w_j = t, restores
    // feasibility through w_k, and keeps the cheapest t.
    void exchange(std::vector<double>& w, std::size_t j, std::size_t k) const {
        auto cost_at = [&](double t) {
            std::vector<double> trial = w;
            trial[j] = t;
            trial[k] = min_feasible_coordinate(trial, k);
            if (!feasible(trial)) return kInf;
            return stage(trial);
        };
        const int n_scan = 33;
        double best_t = w[j], best_cost = stage(w);
        for (int i = 0; i < n_scan; ++i) {
            double t = grid_[j] * static_cast<double>(i) / (n_scan - 1);
            double c = cost_at(t);
            if (c < best_cost - 1e-12) {
                best_cost = c;
                best_t = t;
            }
        }
        double span = grid_[j] / (n_scan - 1);
        double lo = std::max(0.0, best_t - span), hi = std::min(grid_[j], best_t + span);
        double refined = golden_section_min([&](double t) { return cost_at(t); }, lo, hi, 1e-9);
        if (cost_at(refined) < best_cost - 1e-12) best_t = refined;
        if (cost_at(best_t) < stage(w) - 1e-12) {
            w[j] = best_t;
            w[k] = min_feasible_coordinate(w, k);
        }
    }

    // KKT polish: at an all-interior optimum the multiplier equalizes
    // alpha * E_mu[zeta_k] * g'(xi_k - w_k) = 1 across coordinates. The
    // residuals r_k = (g')^{-1}(1 / (alpha E_k)) define a curve w(alpha);
    // the threshold pins alpha. Envelope means are refreshed by fixed point.
    bool equalized_polish(const std::vector<double>& seed, std::vector<double>& out) const {
        if (seed.empty()) return false;
        const auto& dis = scenario_.disutility;
        if (dis.shape == DisutilityShape::Identity) return false;
        auto g_prime_inv = [&](double y) {
            if (dis.shape == DisutilityShape::Quadratic) return y / 2.0;
            return std::pow(y / dis.power, 1.0 / (dis.power - 1.0));
        };

        std::vector<double> w = seed;
        for (int iter = 0; iter < 50; ++iter) {
            std::vector<double> z(grid_.size());
            for (std::size_t k = 0; k < z.size(); ++k) z[k] = dis.g(grid_[k] - w[k]);
            std::vector<double> e_bar(grid_.size(), 0.0);
            for (std::size_t i = 0; i < scenario_.types.size(); ++i) {
                EnvelopeDensity env = envelope_density(scenario_.types.types[i], z, q_);
                for (std::size_t k = 0; k < e_bar.size(); ++k)
                    e_bar[k] += weights_[i] * env.weights[k];
            }
            auto coverage_for = [&](double alpha) {
                std::vector<double> trial(grid_.size());
                for (std::size_t k = 0; k < trial.size(); ++k) {
                    double r = e_bar[k] > 1e-15 ? g_prime_inv(1.0 / (alpha * e_bar[k])) : grid_[k];
                    trial[k] = std::clamp(grid_[k] - r, 0.0, grid_[k]);
                }
                return trial;
            };
            double lo = 1e-9, hi = 1.0;
            while (perceived(coverage_for(hi)) > scenario_.u_bar && hi < 1e12) hi *= 2.0;
            if (perceived(coverage_for(lo)) < scenario_.u_bar || hi >= 1e12) return false;
            double alpha = bisect_root(
                [&](double a) { return perceived(coverage_for(a)) - scenario_.u_bar; }, lo, hi,
                1e-14);
            std::vector<double> next = coverage_for(alpha);
            double delta = 0.0;
            for (std::size_t k = 0; k < next.size(); ++k)
                delta = std::max(delta, std::abs(next[k] - w[k]));
            w = next;
            if (delta <= 1e-12) break;
        }
        if (!feasible(w)) {
            // nudge onto the feasible side coordinate by coordinate
            for (std::size_t k = grid_.size(); k-- > 0 && !feasible(w);)
                w[k] = min_feasible_coordinate(w, k);
        }
        if (!feasible(w)) return false;
        out = w;
        return true;
    }

    const Scenario& scenario_;
    std::vector<double> weights_;
    double x_;
    std::vector<double> q_;
    const std::vector<double>& grid_;
};

struct FullInfoCore {
    Contract contract;
    double action = 0.0;
    double stage_cost = 0.0;
    double agent_cost = 0.0;
};

FullInfoCore solve_full_info_core(const Scenario& scenario, const TypeDistribution& mu) {
    scenario.validate();
    if (scenario.types.size() != mu.size())
        throw std::invalid_argument("solve_full_info: distribution dimension mismatch");

    FullInfoCore core;
    if (scenario.contract) {
        core.contract = *scenario.contract;
        if (scenario.actions.kind == ActionSetKind::Discrete) {
            double best_cost = kInf, best_x = 0.0;
            bool found = false;
            double min_perceived = kInf;
            for (double x : scenario.actions.values) {
                double perceived = agent_objective(scenario, mu, core.contract, x);
                min_perceived = std::min(min_perceived, perceived);
                if (perceived > scenario.u_bar + kIrTol) continue;
                double cost = principal_stage_cost(scenario, core.contract, x);
                if (!found || cost < best_cost - 1e-15) {
                    best_cost = cost;
                    best_x = x;
                    found = true;
                }
            }
            if (!found)
                throw InfeasibleError(
                    "participation threshold cannot be met at the pinned contract; minimal "
                    "perceived cost " +
                        format_double(min_perceived),
                    min_perceived);
            core.action = best_x;
        } else {
            core.action = pinned_interval_action(scenario, mu, core.contract);
        }
        core.stage_cost = principal_stage_cost(scenario, core.contract, core.action);
        core.agent_cost = agent_objective(scenario, mu, core.contract, core.action);
        return core;
    }

    // Tabular search over (coverage, action).
    auto coverage_cost = [&](double x) -> CoverageSolution {
        return CoverageProblem(scenario, mu.weights, x).solve();
    };

    std::vector<double> xs = scenario.actions.kind == ActionSetKind::Discrete
                                 ? scenario.actions.values
                                 : action_candidates(scenario.actions, 65);
    double best_obj = kInf;
    CoverageSolution best_cov;
    double best_x = 0.0;
    bool found = false;
    double min_perceived = kInf;
    for (double x : xs) {
        min_perceived =
            std::min(min_perceived, scenario.disutility.investment_cost * x);  // full coverage cost
        CoverageSolution cov = coverage_cost(x);
        if (!cov.feasible) continue;
        if (!found || cov.stage_cost < best_obj - 1e-12) {
            best_obj = cov.stage_cost;
            best_cov = cov;
            best_x = x;
            found = true;
        }
    }
    if (found && scenario.actions.kind == ActionSetKind::Interval) {
        double span = (scenario.actions.hi - scenario.actions.lo) / 64.0;
        double lo = std::max(scenario.actions.lo, best_x - span);
        double hi = std::min(scenario.actions.hi, best_x + span);
        double refined = golden_section_min(
            [&](double x) {
                CoverageSolution cov = coverage_cost(x);
                return cov.feasible ? cov.stage_cost : kInf;
            },
            lo, hi, 1e-6);
        CoverageSolution cov = coverage_cost(refined);
        if (cov.feasible && cov.stage_cost < best_obj - 1e-12) {
            best_obj = cov.stage_cost;
            best_cov = cov;
            best_x = refined;
        }
    }
    if (!found)
        throw InfeasibleError(
            "participation threshold cannot be met even under full coverage; minimal perceived "
            "cost " +
                format_double(min_perceived),
            min_perceived);
    core.contract = TabularContract{best_cov.w};
    core.action = best_x;
    core.stage_cost = best_cov.stage_cost;
    core.agent_cost = best_cov.agent_cost;
    return core;
}

}  // namespace

double agent_objective_raw(const Scenario& scenario, std::span<const double> weights,
                           const Contract& contract, double x) {
    if (weights.size() != scenario.types.size())
        throw std::invalid_argument("agent_objective: weight dimension mismatch");
    validate_contract(contract, scenario.model.grid);
    std::vector<double> row = residual_cost_row(scenario.model.grid, contract, scenario.disutility);
    return agent_cost_at(scenario, weights, row, x) + contract_premium(contract);
}

double agent_objective(const Scenario& scenario, const TypeDistribution& mu,
                       const Contract& contract, double x) {
    if (!scenario.actions.contains(x, 1e-9))
        throw std::invalid_argument("agent_objective: action outside the declared set");
    return agent_objective_raw(scenario, mu.weights, contract, x);
}

double agent_best_response(const Scenario& scenario, const TypeDistribution& mu,
                           const Contract& contract) {
    if (mu.size() != scenario.types.size())
        throw std::invalid_argument("agent_best_response: distribution dimension mismatch");
    validate_contract(contract, scenario.model.grid);
    std::vector<double> row = residual_cost_row(scenario.model.grid, contract, scenario.disutility);
    double premium = contract_premium(contract);
    auto cost = [&](double x) { return agent_cost_at(scenario, mu.weights, row, x) + premium; };

    if (scenario.actions.kind == ActionSetKind::Discrete) {
        double best_x = scenario.actions.values.front();
        double best = cost(best_x);
        for (double x : scenario.actions.values) {
            double c = cost(x);
            if (c < best) {
                best = c;
                best_x = x;
            }
        }
        return best_x;
    }

    std::vector<double> xs = action_candidates(scenario.actions);
    std::size_t best_i = 0;
    double best = cost(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double c = cost(xs[i]);
        if (c < best) {
            best = c;
            best_i = i;
        }
    }
    double lo = best_i == 0 ? xs[0] : xs[best_i - 1];
    double hi = best_i + 1 == xs.size() ? xs.back() : xs[best_i + 1];
    return golden_section_min(cost, lo, hi, 1e-8);
}

double principal_stage_cost(const Scenario& scenario, const Contract& contract, double x) {
    std::vector<double> q = density(scenario.model, x);
    const auto& grid = scenario.model.grid;
    if (const auto* lin = std::get_if<LinearContract>(&contract)) {
        double covered = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k)
            covered += q[k] * lin->coverage_fraction * grid.points[k];
        return covered - lin->premium;
    }
    const auto& tab = std::get<TabularContract>(contract);
    double total = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        total += q[k] * (tab.coverage[k] + grid.points[k]);
    return total;
}

double principal_objective(const Scenario& scenario, const Contract& contract, double x,
                           const TypeDistribution& mu) {
    validate_contract(contract, scenario.model.grid);
    return principal_stage_cost(scenario, contract, x) + scenario.gamma * w1(mu, scenario.mu0);
}

SolveReport solve_full_info(const Scenario& scenario, const TypeDistribution& mu) {
    FullInfoCore core = solve_full_info_core(scenario, mu);
    SolveReport report{.contract = core.contract,
                       .action = core.action,
                       .objective = core.stage_cost + scenario.gamma * w1(mu, scenario.mu0),
                       .ir_slack = scenario.u_bar - core.agent_cost,
                       .alpha = 0.0,
                       .beta = 0.0,
                       .alpha_residual_norm = 0.0,
                       .mu = mu,
                       .flags = {}};
    IrMultiplier ir = recover_ir_multiplier(scenario, mu, core.contract, core.action);
    report.alpha = ir.alpha;
    report.alpha_residual_norm = ir.residual_norm;
    report.flags.push_back("alpha_method:" + ir.method);
    if (ir.clamped) report.flags.push_back("alpha_clamped_to_zero");
    if (report.ir_slack > 1e-9) report.flags.push_back("ir_slack_at_optimum");
    for (const auto& env : envelope_rows(scenario, core.contract, core.action))
        if (env.tie) {
            report.flags.push_back("envelope_tie");
            break;
        }
    return report;
}

namespace {

std::vector<std::vector<double>> simplex_grid(std::size_t n, double step) {
    std::vector<std::vector<double>> out;
    int levels = static_cast<int>(std::round(1.0 / step));
    if (n == 1) {
        out.push_back({1.0});
        return out;
    }
    if (n == 2) {
        for (int i = 0; i <= levels; ++i) {
            double t = static_cast<double>(i) / levels;
            out.push_back({1.0 - t, t});
        }
        return out;
    }
    if (n == 3) {
        for (int i = 0; i <= levels; ++i)
            for (int j = 0; j + i <= levels; ++j) {
                double a = static_cast<double>(i) / levels;
                double b = static_cast<double>(j) / levels;
                out.push_back({1.0 - a - b, a, b});
            }
        return out;
    }
    throw UnsupportedError("hidden-action solve enumerates at most 3 types");
}

struct HiddenCandidate {
    bool valid = false;
    Contract contract;
    double action = 0.0;
    double stage = kInf;
    double agent_cost = kInf;
};

HiddenCandidate hidden_inner(const Scenario& scenario, const TypeDistribution& mu) {
    HiddenCandidate best;
    if (scenario.contract) {
        double x = agent_best_response(scenario, mu, *scenario.contract);
        double perceived = agent_objective_raw(scenario, mu.weights, *scenario.contract, x);
        if (perceived > scenario.u_bar + kIrTol) return best;
        best.valid = true;
        best.contract = *scenario.contract;
        best.action = x;
        best.stage = principal_stage_cost(scenario, *scenario.contract, x);
        best.agent_cost = perceived;
        return best;
    }

    std::vector<double> xs = scenario.actions.kind == ActionSetKind::Discrete
                                 ? scenario.actions.values
                                 : action_candidates(scenario.actions, 21);
    for (double x_target : xs) {
        CoverageSolution cov = CoverageProblem(scenario, mu.weights, x_target).solve();
        if (!cov.feasible) continue;
        Contract contract = TabularContract{cov.w};
        double x = agent_best_response(scenario, mu, contract);
        double perceived = agent_objective_raw(scenario, mu.weights, contract, x);
        if (perceived > scenario.u_bar + kIrTol) continue;  // agent would not participate
        double stage = principal_stage_cost(scenario, contract, x);
        if (!best.valid || stage < best.stage - 1e-12) {
            best.valid = true;
            best.contract = contract;
            best.action = x;
            best.stage = stage;
            best.agent_cost = perceived;
        }
    }
    if (!best.valid) return best;

    // Local coordinate polish on the principal cost with the best response
    // re-evaluated at every trial coverage.
    std::vector<double> w = std::get<TabularContract>(best.contract).coverage;
    const auto& grid = scenario.model.grid.points;
    auto evaluate_plan = [&](const std::vector<double>& plan) {
        Contract c = TabularContract{plan};
        double x = agent_best_response(scenario, mu, c);
        double perceived = agent_objective_raw(scenario, mu.weights, c, x);
        if (perceived > scenario.u_bar + kIrTol) return std::pair<double, double>(kInf, x);
        return std::pair<double, double>(principal_stage_cost(scenario, c, x), x);
    };
    for (int round = 0; round < 50; ++round) {
        bool improved = false;
        for (std::size_t k = 0; k < w.size(); ++k) {
            double best_t = w[k];
            double best_stage = evaluate_plan(w).first;
            const int n_scan = 17;
            for (int i = 0; i < n_scan; ++i) {
                double t = grid[k] * static_cast<double>(i) / (n_scan - 1);
                std::vector<double> trial = w;
                trial[k] = t;
                double stage = evaluate_plan(trial).first;
                if (stage < best_stage - 1e-12) {
                    best_stage = stage;
                    best_t = t;
                }
            }
            double span = grid[k] / (n_scan - 1);
            double refined = golden_section_min(
                [&](double t) {
                    std::vector<double> trial = w;
                    trial[k] = t;
                    return evaluate_plan(trial).first;
                },
                std::max(0.0, best_t - span), std::min(grid[k], best_t + span), 1e-9);
            std::vector<double> trial = w;
            trial[k] = refined;
            if (evaluate_plan(trial).first < best_stage - 1e-12) best_t = refined;
            if (best_t != w[k]) {
                w[k] = best_t;
                improved = true;
            }
        }
        if (!improved) break;
    }
    auto [stage, x] = evaluate_plan(w);
    if (stage < best.stage - 1e-12) {
        best.contract = TabularContract{w};
        best.action = x;
        best.stage = stage;
        best.agent_cost = agent_objective_raw(scenario, mu.weights, best.contract, x);
    }
    return best;
}

}  // namespace

SolveReport solve_hidden_action(const Scenario& scenario, const HiddenSolveOptions& options) {
    scenario.validate();
    const std::size_t n = scenario.types.size();

    std::vector<std::vector<double>> candidates;
    candidates.push_back(scenario.mu0.weights);  // first, so ties keep the baseline
    for (auto& mu : simplex_grid(n, options.mu_grid_step)) candidates.push_back(std::move(mu));

    struct Incumbent {
        bool valid = false;
        double objective = kInf;
        std::vector<double> mu;
        HiddenCandidate inner;
    } incumbent;

    auto try_mu = [&](const std::vector<double>& mu_raw) {
        TypeDistribution mu{mu_raw};
        HiddenCandidate inner = hidden_inner(scenario, mu);
        if (!inner.valid) return;
        double objective = inner.stage + scenario.gamma * w1(mu, scenario.mu0);
        if (!incumbent.valid || objective < incumbent.objective - 1e-12) {
            incumbent.valid = true;
            incumbent.objective = objective;
            incumbent.mu = mu_raw;
            incumbent.inner = inner;
        }
    };

    for (const auto& mu : candidates) try_mu(mu);
    if (!incumbent.valid)
        throw InfeasibleError("hidden-action design infeasible: no distribution admits participation",
                              kInf);

    // Local refinement around the incumbent, shrinking the grid step 10x per
    // round (zero-sum perturbations stay on the simplex via projection).
    double step = options.mu_grid_step;
    for (int round = 0; round < options.refine_rounds; ++round) {
        double fine = step / 10.0;
        std::vector<double> center = incumbent.mu;
        if (n == 2) {
            for (int i = -10; i <= 10; ++i) {
                double t = center[1] + fine * i;
                if (t < 0.0 || t > 1.0) continue;
                try_mu({1.0 - t, t});
            }
        } else if (n == 3) {
            for (int i = -10; i <= 10; ++i)
                for (int j = -10; j <= 10; ++j) {
                    double a = center[1] + fine * i;
                    double b = center[2] + fine * j;
                    if (a < 0.0 || b < 0.0 || a + b > 1.0) continue;
                    try_mu({1.0 - a - b, a, b});
                }
        }
        step = fine;
    }

    // Projected-gradient polish on the design term: the only smooth
    // mu-dependence of the objective is gamma W1, whose gradient is the dual
    // potential. Armijo acceptance re-evaluates the full objective, so
    // best-response jumps can only be crossed when they help.
    double pg_step = options.mu_grid_step;
    for (int iter = 0; iter < 20 && pg_step >= 1e-6; ++iter) {
        TypeDistribution mu_inc{incumbent.mu};
        DualPotential dual = w1_dual(mu_inc, scenario.mu0);
        std::vector<double> direction(n, 0.0);
        double mean = scenario.gamma * sum(dual.b) / static_cast<double>(n);
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            direction[i] = -(scenario.gamma * dual.b[i] - mean);
            norm += direction[i] * direction[i];
        }
        if (std::sqrt(norm) <= 1e-12) break;
        double before = incumbent.objective;
        std::vector<double> shifted(incumbent.mu);
        for (std::size_t i = 0; i < n; ++i) shifted[i] += pg_step * direction[i];
        try_mu(project_simplex(shifted).weights);
        if (incumbent.objective >= before - 1e-12) pg_step /= 2.0;  // Armijo backtrack
    }

    TypeDistribution mu_star{incumbent.mu};
    SolveReport report{.contract = incumbent.inner.contract,
                       .action = incumbent.inner.action,
                       .objective = incumbent.objective,
                       .ir_slack = scenario.u_bar - incumbent.inner.agent_cost,
                       .alpha = 0.0,
                       .beta = 0.0,
                       .alpha_residual_norm = 0.0,
                       .mu = mu_star,
                       .flags = {"ic_nested_best_response", "beta_not_estimated"}};
    IrMultiplier ir =
        recover_ir_multiplier(scenario, mu_star, incumbent.inner.contract, incumbent.inner.action);
    report.alpha = ir.alpha;
    report.alpha_residual_norm = ir.residual_norm;
    report.flags.push_back("alpha_method:" + ir.method);
    return report;
}

IrMultiplier recover_ir_multiplier(const Scenario& scenario, const TypeDistribution& mu,
                                   const Contract& contract, double x) {
    IrMultiplier out;
    double perceived = agent_objective_raw(scenario, mu.weights, contract, x);
    double slack = scenario.u_bar - perceived;
    if (slack > 1e-7 * std::max(1.0, std::abs(scenario.u_bar))) {
        out.method = "slack";
        return out;
    }

    const auto& grid = scenario.model.grid;
    std::vector<double> q = density(scenario.model, x);
    std::vector<double> z = residual_cost_row(grid, contract, scenario.disutility);
    std::vector<double> w = coverage_row(contract, grid);
    std::vector<double> e_bar(grid.size(), 0.0);
    for (std::size_t i = 0; i < scenario.types.size(); ++i) {
        EnvelopeDensity env = envelope_density(scenario.types.types[i], z, q);
        for (std::size_t k = 0; k < grid.size(); ++k)
            e_bar[k] += mu.weights[i] * env.weights[k];
    }

    auto pointwise_residual_norm = [&](double alpha, bool interior_only) {
        double norm = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (interior_only) {
                double margin = 1e-7 * grid.points[k];
                if (w[k] <= margin || w[k] >= grid.points[k] - margin) continue;
            }
            double p_k = scenario.model.reference_probs[k] > 0.0
                             ? q[k] / scenario.model.reference_probs[k]
                             : 0.0;
            double gp = scenario.disutility.g_prime(grid.points[k] - w[k]);
            double r = -p_k + alpha * e_bar[k] * gp * p_k;
            norm += r * r;
        }
        return std::sqrt(norm);
    };

    const bool optimized_coverage = !scenario.contract.has_value();
    if (optimized_coverage) {
        double num = 0.0, den = 0.0;
        bool has_interior = false;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            double margin = 1e-7 * grid.points[k];
            if (w[k] <= margin || w[k] >= grid.points[k] - margin) continue;
            has_interior = true;
            double p_k = scenario.model.reference_probs[k] > 0.0
                             ? q[k] / scenario.model.reference_probs[k]
                             : 0.0;
            double b = e_bar[k] * scenario.disutility.g_prime(grid.points[k] - w[k]) * p_k;
            num += p_k * b;
            den += b * b;
        }
        if (has_interior && den > 1e-15) {
            out.alpha = num / den;
            out.method = "interior_lsq";
            if (out.alpha < 0.0) {
                out.alpha = 0.0;
                out.clamped = true;
            }
            out.residual_norm = pointwise_residual_norm(out.alpha, true);
            return out;
        }
    } else if (scenario.actions.kind == ActionSetKind::Interval &&
               scenario.model.family.kind == FamilyKind::Linear &&
               x > scenario.actions.lo + 1e-9 && x < scenario.actions.hi - 1e-9) {
        DxResult agent_dx = risk_mixture_dx(scenario, mu.weights, contract, x);
        double a_prime = agent_dx.value + scenario.disutility.investment_cost;
        if (std::abs(a_prime) > 1e-10) {
            out.alpha = -stage_cost_dx(scenario, contract, x) / a_prime;
            out.method = "kkt_action";
            if (out.alpha < 0.0) {
                out.alpha = 0.0;
                out.clamped = true;
            }
            out.residual_norm = pointwise_residual_norm(out.alpha, false);
            return out;
        }
    }

    // Shadow price of the participation threshold by central differences.
    double h = 1e-5 * std::max(1.0, std::abs(scenario.u_bar));
    auto objective_at = [&](double u) {
        Scenario perturbed = scenario;
        perturbed.u_bar = u;
        return solve_full_info_core(perturbed, mu).stage_cost;
    };
    out.alpha = -(objective_at(scenario.u_bar + h) - objective_at(scenario.u_bar - h)) / (2.0 * h);
    out.method = "shadow_price";
    if (out.alpha < 0.0) {
        out.alpha = 0.0;
        out.clamped = true;
    }
    out.residual_norm = pointwise_residual_norm(out.alpha, false);
    return out;
}

}  // namespace riskdesign
