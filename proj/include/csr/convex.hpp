#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "csr/lp.hpp"
#include "csr/pursuit.hpp"
#include "csr/sensing.hpp"
#include "csr/signal.hpp"

namespace csr {

// η(u) = Σ_k |u_k|, the ℓ1 concentration of a transform-domain vector.
double concentration_measure(const Spectrum& u);
double concentration_measure(std::span<const Complex> u);

struct GradientParams {
  std::optional<double> delta_init;   // unset: max |y|
  std::optional<double> delta_min;    // unset: delta_init · 1e-5
  double shrink_factor = 3.1622776601683795;  // √10
  std::size_t inner_max_iterations = 200;     // sweeps per Δ level
  std::size_t oscillation_window = 2;
  // Two consecutive sweep corrections whose angle exceeds this count as a
  // reversal. oscillation_window − 1 reversals in a row end the Δ level.
  double oscillation_angle_deg = 170.0;
  double step = 1.0;
  bool parallel = true;

  void validate() const;
};

struct GradientRecovery {
  TimeSignal signal;
  double initial_concentration = 0.0;       // η of the zero-filled start
  std::vector<double> level_concentration;  // η at the end of each Δ level
  std::size_t sweeps = 0;
};

// Missing-sample recovery by descent on the spectrum's ℓ1 concentration.
//
// Unobserved samples start at zero; observed ones are never modified. Each
// sweep evaluates, for every missing sample and separately for its real and
// imaginary part, the concentration difference
//   g = [η(dft(x with part + Δ)) − η(dft(x with part − Δ))] / √N
// against the current signal, then applies part ← part − step·g to all
// missing samples at once (Jacobi order, so the per-sample evaluations are
// independent and run in parallel). The difference is not divided by 2Δ: it
// already shrinks with Δ, which keeps corrections on the scale of Δ. When
// the sweep corrections reverse direction (see oscillation_angle_deg), Δ is
// divided by shrink_factor; recovery ends once Δ < delta_min. A level that
// ends with higher η than the previous level is rolled back, so η at level
// boundaries never increases.
GradientRecovery adaptive_gradient(const Measurements& y, std::size_t length,
                                   const GradientParams& params = {});

struct BasisPursuitReport {
  LpSolution lp;
  double l1_norm = 0.0;               // Σ|u_k| on the dictionary's scale
  double constraint_violation = 0.0;  // ‖A u − y‖₂
  bool polished = false;              // support refit accepted (see below)
};

// Equality-constrained ℓ1 minimization min Σ|u_k| s.t. A u = y, for real u.
//
// Writes u = p − q with p, q ≥ 0 and stacks real and imaginary parts:
//   min 1ᵀ(p + q)  s.t.  [Re A; Im A](p − q) = [Re y; Im y]
// (2M equations, 2N variables) and solves it with lp_primal_dual_solve. The
// interior-point answer is then refit by least squares on the entries above
// 1e-6·max|u|; the refit replaces it when it stays feasible and its ℓ1 norm
// is no larger up to the gap tolerance, which removes the O(μ) interior
// noise off the support.
//
// Throws Infeasible when no real u reproduces y (e.g. complex amplitudes with
// enough measurements). A gap left open after max_iterations is returned with
// status MaxIterations.
RecoveryResult basis_pursuit_eq(const Dictionary& d, const Measurements& y,
                                const LpSolverParams& params = {},
                                BasisPursuitReport* report = nullptr);

}  // namespace csr
