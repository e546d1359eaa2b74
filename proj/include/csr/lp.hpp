#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csr/linalg.hpp"

namespace csr {

struct LpSolverParams {
  double duality_gap_tol = 1e-8;
  double feasibility_tol = 1e-8;
  std::size_t max_iterations = 100;

  void validate() const;
};

enum class LpStatus { Optimal, MaxIterations, Infeasible, Unbounded };

const char* lp_status_name(LpStatus s);

struct LpSolution {
  std::vector<double> primal;          // x, length n
  std::vector<double> dual;            // λ, one per original equality row
  std::vector<double> reduced_costs;   // s = c − Aᵀλ
  double primal_objective = 0.0;       // cᵀx
  double dual_objective = 0.0;         // bᵀλ
  // max(|cᵀx − bᵀλ|, xᵀs) / (1 + |cᵀx|)
  double gap = 0.0;
  double primal_residual = 0.0;        // ‖Ax − b‖₂
  double dual_residual = 0.0;          // ‖Aᵀλ + s − c‖₂
  std::size_t iterations = 0;
  std::size_t rows_dropped = 0;        // linearly dependent equality rows removed
  LpStatus status = LpStatus::MaxIterations;
};

// Solves   min cᵀx  s.t.  A x = b,  x ≥ 0
// with a Mehrotra predictor-corrector primal-dual interior-point method.
// Dependent equality rows are removed first (Infeasible if inconsistent).
// Each step solves the normal equations A·diag(x/s)·Aᵀ by dense Cholesky.
// Stops Optimal when ‖Ax−b‖ ≤ ftol(1+‖b‖), ‖Aᵀλ+s−c‖ ≤ ftol(1+‖c‖) and
// gap ≤ gap_tol. Divergent iterates are reported as Infeasible (dual ray) or
// Unbounded (primal ray).
LpSolution lp_primal_dual_solve(std::span<const double> c, const RealMatrix& a_eq,
                                std::span<const double> b_eq, const LpSolverParams& params = {});

}  // namespace csr
