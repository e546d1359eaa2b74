#pragma once

#include <cstddef>
#include <optional>
#include <variant>

#include "csr/pursuit.hpp"

namespace csr {

// Zero every entry with |v_i| ≤ √λ.
ComplexVector hard_threshold(std::span<const Complex> v, double lambda);

// Keep the K largest magnitudes; on ties the lower index is kept.
ComplexVector top_k_threshold(std::span<const Complex> v, std::size_t k);

struct LambdaThreshold {
  double lambda = 0.0;
};
struct TopK {
  std::size_t k = 1;
};

struct IhtParams {
  std::variant<LambdaThreshold, TopK> variant = TopK{};
  // unset: 0.99 / σ_max(A)², with σ_max² from spectral_norm_sq_estimate.
  std::optional<double> step;
  std::size_t max_iterations = 500;
  double convergence_tol = 1e-8;
  std::size_t power_iterations = 100;
  std::uint64_t power_seed = 0x5eed;

  void validate() const;
};

// Iterative hard thresholding from l⁰ = 0:
//   lⁿ⁺¹ = T(lⁿ + μ·Aᴴ(y − A lⁿ))
// Stops when ‖lⁿ⁺¹ − lⁿ‖₂ ≤ convergence_tol·(1 + ‖lⁿ‖₂) or after
// max_iterations (reported through `iterations`, not as an error).
RecoveryResult iht(const Dictionary& d, const Measurements& y, const IhtParams& params,
                   const IterationObserver& observer = {});

// Step the auto rule would pick for this dictionary.
double iht_auto_step(const Dictionary& d, const IhtParams& params);

}  // namespace csr
