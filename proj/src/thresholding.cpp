#include "csr/thresholding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "csr/kernels.hpp"

namespace csr {

ComplexVector hard_threshold(std::span<const Complex> v, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  const double cut = std::sqrt(lambda);
  ComplexVector out(v.begin(), v.end());
  for (auto& z : out) {
    if (std::abs(z) <= cut) z = 0.0;
  }
  return out;
}

ComplexVector top_k_threshold(std::span<const Complex> v, std::size_t k) {
  if (k < 1 || k > v.size()) {
    throw Error(ErrorCode::KOutOfRange,
                "K = " + std::to_string(k) + " outside [1, " + std::to_string(v.size()) + "]");
  }
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::abs(v[i]);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return mag[a] > mag[b] || (mag[a] == mag[b] && a < b);
                    });
  ComplexVector out(v.size());
  for (std::size_t j = 0; j < k; ++j) out[order[j]] = v[order[j]];
  return out;
}

void IhtParams::validate() const {
  if (const auto* l = std::get_if<LambdaThreshold>(&variant); l && !(l->lambda >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  }
  if (const auto* t = std::get_if<TopK>(&variant); t && t->k < 1) {
    throw Error(ErrorCode::KOutOfRange, "TopK needs K >= 1");
  }
  if (step && !(*step > 0.0)) throw Error(ErrorCode::InvalidArgument, "IHT step must be > 0");
  if (max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "IHT max_iterations must be >= 1");
  if (!(convergence_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "convergence_tol must be >= 0");
}

double iht_auto_step(const Dictionary& d, const IhtParams& params) {
  return 0.99 / spectral_norm_sq_estimate(d.atoms, params.power_iterations, params.power_seed);
}

RecoveryResult iht(const Dictionary& d, const Measurements& y, const IhtParams& params,
                   const IterationObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  params.validate();
  check_consistent(d, y);
  if (!all_finite(y.values)) throw Error(ErrorCode::NonFinite, "measurements contain NaN/Inf");
  const std::size_t n = d.cols();
  if (const auto* t = std::get_if<TopK>(&params.variant); t && t->k > n) {
    throw Error(ErrorCode::KOutOfRange, "TopK K exceeds dictionary width");
  }
  const double mu = params.step ? *params.step : iht_auto_step(d, params);

  auto threshold = [&](const ComplexVector& v) {
    if (const auto* l = std::get_if<LambdaThreshold>(&params.variant)) return hard_threshold(v, l->lambda);
    return top_k_threshold(v, std::get<TopK>(params.variant).k);
  };

  ComplexVector l(n);
  ComplexVector residual = y.values;
  ComplexVector grad(n);
  std::vector<std::size_t> support;
  std::size_t iter = 0;
  while (iter < params.max_iterations) {
    kernels::adjoint_multiply_parallel(d.atoms, residual, grad);
    ComplexVector next(n);
    for (std::size_t k = 0; k < n; ++k) next[k] = l[k] + mu * grad[k];
    next = threshold(next);

    double change_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) change_sq += std::norm(next[k] - l[k]);
    const double l_norm = norm2(l);
    l = std::move(next);
    residual = subtract(y.values, d.atoms.multiply(l));
    ++iter;

    if (observer) {
      support = support_of(l, 0.0);
      observer(IterationView{iter, support, l, residual});
    }
    if (std::sqrt(change_sq) <= params.convergence_tol * (1.0 + l_norm)) break;
  }

  RecoveryResult out;
  out.coeffs = d.to_spectrum_scale(l);
  out.support = support_of(l, 0.0);
  out.residual_norm = norm2(residual);
  out.iterations = iter;
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return out;
}

}  // namespace csr
