#pragma once

#include <vector>

namespace riskdesign {

/// Outcome of a linear program solve.
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

/// Solves  max c'x  s.t.  A x <= b,  x >= 0  with a dense two-phase tableau
/// simplex. Pivoting uses Bland's rule throughout, so the returned vertex is
/// deterministic and cycling cannot occur. Intended for the small envelope
/// and transport duals (tens of rows), not for large programs.
LpResult lp_solve_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                      const std::vector<double>& c);

}  // namespace riskdesign
