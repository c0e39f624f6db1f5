#include "riskdesign/simplex_lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace riskdesign {

namespace {

constexpr double kEps = 1e-9;

class Tableau {
public:
    Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
            const std::vector<double>& c)
        : m_(A.size()), n_(c.size()) {
        for (const auto& row : A)
            if (row.size() != n_) throw std::invalid_argument("lp_solve_max: ragged matrix");
        if (b.size() != m_) throw std::invalid_argument("lp_solve_max: rhs length mismatch");

        // Columns: n structural, m slack, then one artificial per negative row.
        std::size_t art = 0;
        for (double bi : b)
            if (bi < 0.0) ++art;
        ncols_ = n_ + m_ + art;
        rows_.assign(m_, std::vector<double>(ncols_ + 1, 0.0));
        basis_.assign(m_, 0);
        artificial_start_ = n_ + m_;

        std::size_t next_art = artificial_start_;
        for (std::size_t i = 0; i < m_; ++i) {
            double sign = (b[i] < 0.0) ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign * A[i][j];
            rows_[i][n_ + i] = sign;  // slack
            rows_[i].back() = sign * b[i];
            if (sign < 0.0) {
                rows_[i][next_art] = 1.0;
                basis_[i] = next_art++;
            } else {
                basis_[i] = n_ + i;
            }
        }
        cost_ = c;
    }

    LpResult solve() {
        if (artificial_start_ < ncols_) {
            // Phase 1: minimize the sum of artificial variables.
            std::vector<double> reduced(ncols_ + 1, 0.0);
            for (std::size_t j = artificial_start_; j < ncols_; ++j) reduced[j] = 1.0;
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] >= artificial_start_)
                    for (std::size_t j = 0; j <= ncols_; ++j) reduced[j] -= rows_[i][j];
            if (!iterate(reduced, artificial_start_)) return {LpStatus::Infeasible, {}, 0.0};
            if (-reduced.back() > kEps) return {LpStatus::Infeasible, {}, 0.0};
            expel_artificials();
        }

        // Phase 2: minimize -c'x over structural and slack columns only;
        // artificial columns must never re-enter the basis.
        std::vector<double> reduced(ncols_ + 1, 0.0);
        for (std::size_t j = 0; j < n_; ++j) reduced[j] = -cost_[j];
        for (std::size_t i = 0; i < m_; ++i) {
            double cb = reduced[basis_[i]];
            if (cb != 0.0)
                for (std::size_t j = 0; j <= ncols_; ++j) reduced[j] -= cb * rows_[i][j];
        }
        if (!iterate(reduced, artificial_start_)) return {LpStatus::Unbounded, {}, 0.0};

        LpResult result;
        result.status = LpStatus::Optimal;
        result.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) result.x[basis_[i]] = rows_[i].back();
        result.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) result.objective += cost_[j] * result.x[j];
        return result;
    }

private:
    // Runs simplex iterations with Bland's rule on columns [0, col_limit).
    // Returns false when the problem is unbounded in the current phase.
    bool iterate(std::vector<double>& reduced, std::size_t col_limit) {
        for (;;) {
            std::size_t enter = col_limit;
            for (std::size_t j = 0; j < col_limit; ++j) {
                if (reduced[j] < -kEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == col_limit) return true;  // optimal

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (rows_[i][enter] > kEps) {
                    double ratio = rows_[i].back() / rows_[i][enter];
                    if (ratio < best_ratio - kEps ||
                        (ratio < best_ratio + kEps &&
                         (leave == m_ || basis_[i] < basis_[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m_) return false;  // unbounded direction
            pivot(leave, enter, reduced);
        }
    }

    void pivot(std::size_t r, std::size_t s, std::vector<double>& reduced) {
        double inv = 1.0 / rows_[r][s];
        for (std::size_t j = 0; j <= ncols_; ++j) rows_[r][j] *= inv;
        rows_[r][s] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double factor = rows_[i][s];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j <= ncols_; ++j) rows_[i][j] -= factor * rows_[r][j];
            rows_[i][s] = 0.0;
        }
        double factor = reduced[s];
        if (factor != 0.0) {
            for (std::size_t j = 0; j <= ncols_; ++j) reduced[j] -= factor * rows_[r][j];
            reduced[s] = 0.0;
        }
        basis_[r] = s;
    }

    // After phase 1, pivot any artificial still in the basis onto a real
    // column; rows that are entirely zero are redundant and can stay (the
    // artificial remains basic at level zero and never re-enters).
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < artificial_start_) continue;
            for (std::size_t j = 0; j < artificial_start_; ++j) {
                if (std::abs(rows_[i][j]) > kEps) {
                    std::vector<double> dummy(ncols_ + 1, 0.0);
                    pivot(i, j, dummy);
                    break;
                }
            }
        }
    }

    std::size_t m_, n_, ncols_;
    std::size_t artificial_start_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
};

}  // namespace

LpResult lp_solve_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                      const std::vector<double>& c) {
    return Tableau(A, b, c).solve();
}

}  // namespace riskdesign
