#include "riskdesign/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "riskdesign/errors.hpp"
#include "riskdesign/numerics.hpp"
#include "riskdesign/simplex_lp.hpp"

namespace riskdesign {

double w1(const TypeDistribution& mu, const TypeDistribution& mu0) {
    if (mu.size() != mu0.size())
        throw std::invalid_argument("w1: distributions differ in dimension");
    double cum = 0.0, total = 0.0;
    for (std::size_t k = 0; k + 1 < mu.size(); ++k) {
        cum += mu.weights[k] - mu0.weights[k];
        total += std::abs(cum);
    }
    return total;
}

DualPotential w1_dual(const TypeDistribution& mu, const TypeDistribution& mu0) {
    if (mu.size() != mu0.size())
        throw std::invalid_argument("w1_dual: distributions differ in dimension");
    const std::size_t n = mu.size();
    DualPotential out;
    out.b.assign(n, 0.0);
    if (n == 1) return out;

    // Normalize b_n = 0 and substitute y_i = b_i + (n-1-i) >= 0. The
    // Lipschitz constraints |b_i - b_j| <= |i - j| become
    //   y_i - y_j <= 2 (j - i)   and   y_j <= y_i           for i < j < n-1,
    //   y_i <= 2 (n-1-i)                                    against b_n.
    const std::size_t nv = n - 1;
    std::vector<std::vector<double>> A;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < nv; ++i) {
        std::vector<double> row(nv, 0.0);
        row[i] = 1.0;
        A.push_back(row);
        rhs.push_back(2.0 * static_cast<double>(n - 1 - i));
    }
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = i + 1; j < nv; ++j) {
            std::vector<double> row(nv, 0.0);
            row[i] = 1.0;
            row[j] = -1.0;
            A.push_back(row);
            rhs.push_back(2.0 * static_cast<double>(j - i));
            std::vector<double> rev(nv, 0.0);
            rev[i] = -1.0;
            rev[j] = 1.0;
            A.push_back(rev);
            rhs.push_back(0.0);
        }
    }

    std::vector<double> c(nv), diff(n);
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff[i] = mu.weights[i] - mu0.weights[i];
    for (std::size_t i = 0; i < nv; ++i) {
        c[i] = diff[i];
        shift += diff[i] * static_cast<double>(n - 1 - i);
    }

    LpResult lp = lp_solve_max(A, rhs, c);
    if (lp.status != LpStatus::Optimal)
        throw NumericalError("internal: transport dual LP did not solve (set B is compact)");
    for (std::size_t i = 0; i < nv; ++i)
        out.b[i] = lp.x[i] - static_cast<double>(n - 1 - i);
    out.value = lp.objective - shift;
    return out;
}

TypeDistribution project_simplex(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("project_simplex: empty input");
    for (double e : v)
        if (!std::isfinite(e)) throw std::invalid_argument("project_simplex: non-finite entry");

    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double running = 0.0, tau = 0.0;
    std::size_t support = 0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        running += sorted[j];
        double candidate = (running - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) {
            tau = candidate;
            support = j + 1;
        }
    }
    (void)support;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - tau);
    // Absorb the rounding residue into the largest coordinate so the result
    // is an exact simplex point.
    double total = sum(out);
    auto it = std::max_element(out.begin(), out.end());
    *it += 1.0 - total;
    return TypeDistribution(out);
}

}  // namespace riskdesign
