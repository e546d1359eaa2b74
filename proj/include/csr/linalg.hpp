#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace csr {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Dense row-major complex matrix. Entries are validated finite on
// construction and never change afterwards.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_rows(const std::vector<ComplexVector>& rows);
  static ComplexMatrix from_columns(const std::vector<ComplexVector>& cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }
  std::span<const Complex> row(std::size_t r) const noexcept {
    return {entries_.data() + r * cols_, cols_};
  }
  const std::vector<Complex>& entries() const noexcept { return entries_; }

  ComplexVector column(std::size_t c) const;
  ComplexMatrix select_columns(std::span<const std::size_t> cols) const;

  ComplexVector multiply(std::span<const Complex> x) const;
  // Computes Aᴴ r.
  ComplexVector adjoint_multiply(std::span<const Complex> r) const;

  double frobenius_norm() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

// Dense row-major real matrix, used by the LP solver.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) noexcept { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const noexcept { return {data.data() + r * cols, cols}; }
};

// ⟨a, b⟩ = Σ conj(a_i) b_i
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm2(std::span<const Complex> v) noexcept;
double norm2_sq(std::span<const Complex> v) noexcept;
double norm_inf(std::span<const Complex> v) noexcept;
ComplexVector subtract(std::span<const Complex> a, std::span<const Complex> b);
bool all_finite(std::span<const Complex> v) noexcept;

// Minimizes ‖Ax − b‖₂ by Householder QR. Columns are treated as linearly
// dependent when some |R_jj| < 1e-12 · ‖A‖_F, which raises RankDeficient.
ComplexVector least_squares_solve(const ComplexMatrix& a, std::span<const Complex> b);

// Power iteration on AᴴA from a seeded start vector. Returns the Rayleigh
// quotient ‖Av‖²/‖v‖² of the final iterate, a lower bound on σ_max(A)² that is
// nondecreasing in `iterations`.
double spectral_norm_sq_estimate(const ComplexMatrix& a, std::size_t iterations,
                                 std::uint64_t seed);

}  // namespace csr
