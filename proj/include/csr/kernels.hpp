#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; both evaluate each output element with the same operation
// order, so their results are bit-identical. Tests compare the two and the
// benchmark target times them.

#include <cstddef>
#include <span>

#include "csr/linalg.hpp"

namespace csr::kernels {

// out = Aᴴ r
void adjoint_multiply_serial(const ComplexMatrix& a, std::span<const Complex> r,
                             std::span<Complex> out);
void adjoint_multiply_parallel(const ComplexMatrix& a, std::span<const Complex> r,
                               std::span<Complex> out);

// Finite ℓ1 differences of a spectrum under single-sample perturbations.
//
// `spectrum` is the unitary DFT X of a length-N signal and `twiddle[t]` is
// e^{-j2πt/N}/√N. Perturbing time sample n by δ moves bin k to
// X_k + δ·twiddle[(k·n) mod N]. For each missing[i] = n:
//   out[i].real() = η(X | n.re + Δ) − η(X | n.re − Δ)
//   out[i].imag() = η(X | n.im + Δ) − η(X | n.im − Δ)
// with η the ℓ1 norm. The fast path is O(N) per sample instead of one DFT.
void concentration_differences_serial(std::span<const Complex> spectrum,
                                      std::span<const Complex> twiddle,
                                      std::span<const std::size_t> missing, double delta,
                                      std::span<Complex> out);
void concentration_differences_parallel(std::span<const Complex> spectrum,
                                        std::span<const Complex> twiddle,
                                        std::span<const std::size_t> missing, double delta,
                                        std::span<Complex> out);

// out = G·diag(d)·Gᵀ, symmetric rows×rows. Normal-equations matrix of the
// interior-point step.
void weighted_gram_serial(const RealMatrix& g, std::span<const double> d, RealMatrix& out);
void weighted_gram_parallel(const RealMatrix& g, std::span<const double> d, RealMatrix& out);

}  // namespace csr::kernels
