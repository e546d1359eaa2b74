#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "csr/error.hpp"
#include "csr/linalg.hpp"
#include "csr/sensing.hpp"

namespace csr {

// When a greedy loop stops. At least one of max_atoms / residual_tol must be
// set. residual_tol is an absolute bound on ‖r‖₂.
struct StoppingRule {
  std::optional<std::size_t> max_atoms;
  std::optional<double> residual_tol;
  std::size_t max_iterations = 1000;

  void validate() const;
};

// Output shared by every recovery algorithm. Coefficients are on the
// unitary-DFT scale regardless of how the dictionary was normalized, so
// idft(coeffs) is the reconstructed time signal.
struct RecoveryResult {
  ComplexVector coeffs;
  std::vector<std::size_t> support;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  std::chrono::nanoseconds elapsed{0};
  // Ok, or the reason a run stopped without meeting its criterion
  // (ZeroDirection for gradient pursuit, MaxIterations for basis pursuit).
  ErrorCode status = ErrorCode::Ok;
};

// Snapshot handed to an observer after every iteration. `coeffs` is the full
// length-N iterate on the dictionary's own scale; `support` is in selection
// order.
struct IterationView {
  std::size_t iteration = 0;
  std::span<const std::size_t> support;
  std::span<const Complex> coeffs;
  std::span<const Complex> residual;
};
using IterationObserver = std::function<void(const IterationView&)>;

// argmax_i |g_i| over i not in `forbidden`; ties go to the lowest index.
std::size_t select_atom(std::span<const Complex> g, std::span<const std::size_t> forbidden);
std::size_t select_atom(std::span<const Complex> g, const std::vector<bool>& forbidden);

// Orthogonal matching pursuit. Each iteration correlates the residual with
// every atom, adds the best one, and refits all support coefficients by least
// squares from scratch.
RecoveryResult omp(const Dictionary& d, const Measurements& y, const StoppingRule& stop,
                   const IterationObserver& observer = {});

// Orthogonal least squares. Selection picks the atom whose inclusion gives the
// smallest least-squares residual. Candidates are scored against an
// incrementally maintained orthonormal basis of the current support: each
// candidate keeps its component orthogonal to that span, updated by one
// projection per accepted atom.
RecoveryResult ols(const Dictionary& d, const Measurements& y, const StoppingRule& stop,
                   const IterationObserver& observer = {});

struct GradientPursuitOptions {
  // Once atom selection ends (|Γ| = K, or ‖r‖ ≤ ε), keep taking gradient
  // steps on the fixed support until a step stops reducing ‖r‖₂² by more
  // than (stagnation_tol·‖y‖₂)², or max_iterations is reached.
  bool refine_on_final_support = true;
  double stagnation_tol = 1e-15;
};

// Gradient pursuit: OMP's selection, then one exact line search along the
// gradient A_Γᴴ r restricted to the support instead of a full refit.
RecoveryResult gradient_pursuit(const Dictionary& d, const Measurements& y,
                                const StoppingRule& stop, const GradientPursuitOptions& options = {},
                                const IterationObserver& observer = {});

}  // namespace csr
