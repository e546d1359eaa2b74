#include "csr/linalg.hpp"

#include <cmath>
#include <string>

#include "csr/error.hpp"
#include "csr/kernels.hpp"
#include "csr/rng.hpp"

namespace csr {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix entries length " + std::to_string(entries_.size()) + " != " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  if (!all_finite(entries_)) throw Error(ErrorCode::NonFinite, "matrix has a NaN/Inf entry");
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols, std::vector<Complex>(rows * cols));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return ComplexMatrix(n, n, std::move(e));
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<ComplexVector>& rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows[0].size();
  std::vector<Complex> e;
  e.reserve(m * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    e.insert(e.end(), r.begin(), r.end());
  }
  return ComplexMatrix(m, n, std::move(e));
}

ComplexMatrix ComplexMatrix::from_columns(const std::vector<ComplexVector>& cols) {
  const std::size_t n = cols.size();
  const std::size_t m = n == 0 ? 0 : cols[0].size();
  std::vector<Complex> e(m * n);
  for (std::size_t c = 0; c < n; ++c) {
    if (cols[c].size() != m) throw Error(ErrorCode::DimensionMismatch, "ragged columns");
    for (std::size_t r = 0; r < m; ++r) e[r * n + c] = cols[c][r];
  }
  return ComplexMatrix(m, n, std::move(e));
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::select_columns(std::span<const std::size_t> cols) const {
  std::vector<Complex> e(rows_ * cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] >= cols_) throw Error(ErrorCode::DimensionMismatch, "column index out of range");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) e[r * cols.size() + j] = (*this)(r, cols[j]);
  }
  return ComplexMatrix(rows_, cols.size(), std::move(e));
}

ComplexVector ComplexMatrix::multiply(std::span<const Complex> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "A·x: x has wrong length");
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc = 0.0;
    const Complex* a = entries_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) acc += a[c] * x[c];
    out[r] = acc;
  }
  return out;
}

ComplexVector ComplexMatrix::adjoint_multiply(std::span<const Complex> r) const {
  if (r.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "Aᴴ·r: r has wrong length");
  ComplexVector out(cols_);
  kernels::adjoint_multiply_serial(*this, r, out);
  return out;
}

double ComplexMatrix::frobenius_norm() const noexcept { return norm2(entries_); }

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "inner product lengths differ");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2_sq(std::span<const Complex> v) noexcept {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

double norm2(std::span<const Complex> v) noexcept {
  // Scaled accumulation avoids overflow/underflow for extreme magnitudes.
  double scale = 0.0;
  for (const auto& z : v) scale = std::max({scale, std::abs(z.real()), std::abs(z.imag())});
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z / scale);
  return scale * std::sqrt(acc);
}

double norm_inf(std::span<const Complex> v) noexcept {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

ComplexVector subtract(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "subtract lengths differ");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

bool all_finite(std::span<const Complex> v) noexcept {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexVector least_squares_solve(const ComplexMatrix& a, std::span<const Complex> b) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  if (b.size() != m) throw Error(ErrorCode::DimensionMismatch, "b length != rows of A");
  if (k == 0 || m < k) {
    throw Error(ErrorCode::DimensionMismatch,
                "least squares needs rows >= cols >= 1, got " + std::to_string(m) + "x" +
                    std::to_string(k));
  }
  const double rank_tol = 1e-12 * a.frobenius_norm();

  // Column-major working copy; reflectors are applied in place.
  std::vector<ComplexVector> cols(k, ComplexVector(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < k; ++c) cols[c][r] = a(r, c);
  }
  ComplexVector rhs(b.begin(), b.end());
  std::vector<Complex> diag(k);
  std::vector<double> reflector_norm_sq(k);

  for (std::size_t j = 0; j < k; ++j) {
    ComplexVector& x = cols[j];
    double xnorm = 0.0;
    {
      std::span<const Complex> tail(x.data() + j, m - j);
      xnorm = norm2(tail);
    }
    if (!(xnorm > rank_tol)) {
      throw Error(ErrorCode::RankDeficient, "column " + std::to_string(j) + " is dependent");
    }
    const double x0abs = std::abs(x[j]);
    const Complex phase = x0abs > 0.0 ? x[j] / x0abs : Complex(1.0, 0.0);
    const Complex alpha = -phase * xnorm;

    // v = x - alpha e1 stored over x[j..m)
    x[j] -= alpha;
    double vnorm_sq = 0.0;
    for (std::size_t r = j; r < m; ++r) vnorm_sq += std::norm(x[r]);

    auto reflect = [&](ComplexVector& y) {
      Complex s = 0.0;
      for (std::size_t r = j; r < m; ++r) s += std::conj(x[r]) * y[r];
      s *= 2.0 / vnorm_sq;
      for (std::size_t r = j; r < m; ++r) y[r] -= s * x[r];
    };
    for (std::size_t c = j + 1; c < k; ++c) reflect(cols[c]);
    reflect(rhs);
    diag[j] = alpha;
    reflector_norm_sq[j] = vnorm_sq;
    if (std::abs(alpha) < rank_tol) {
      throw Error(ErrorCode::RankDeficient, "column " + std::to_string(j) + " is dependent");
    }
  }

  // Solves R z = (Qᴴ v)[0:k] for a right-hand side v already reflected in place.
  auto back_substitute = [&](const ComplexVector& qv) {
    ComplexVector z(k);
    for (std::size_t jj = k; jj-- > 0;) {
      Complex acc = qv[jj];
      for (std::size_t c = jj + 1; c < k; ++c) acc -= cols[c][jj] * z[c];
      z[jj] = acc / diag[jj];
    }
    return z;
  };
  auto apply_qh = [&](ComplexVector v) {
    for (std::size_t j = 0; j < k; ++j) {
      // Reflector j lives in cols[j][j..m); rows above j hold R.
      const ComplexVector& x = cols[j];
      Complex s = 0.0;
      for (std::size_t r = j; r < m; ++r) s += std::conj(x[r]) * v[r];
      s *= 2.0 / reflector_norm_sq[j];
      for (std::size_t r = j; r < m; ++r) v[r] -= s * x[r];
    }
    return v;
  };

  ComplexVector sol = back_substitute(rhs);
  // One step of iterative refinement against the original data.
  ComplexVector resid(b.begin(), b.end());
  for (std::size_t r = 0; r < m; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < k; ++c) acc += a(r, c) * sol[c];
    resid[r] -= acc;
  }
  const ComplexVector correction = back_substitute(apply_qh(std::move(resid)));
  for (std::size_t c = 0; c < k; ++c) sol[c] += correction[c];
  return sol;
}

double spectral_norm_sq_estimate(const ComplexMatrix& a, std::size_t iterations,
                                 std::uint64_t seed) {
  if (iterations == 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  if (a.frobenius_norm() == 0.0) throw Error(ErrorCode::ZeroMatrix, "spectral norm of zero matrix");

  CounterRng rng(seed);
  ComplexVector v(a.cols());
  for (auto& z : v) z = Complex(rng.uniform01() - 0.5, rng.uniform01() - 0.5);

  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const double vn = norm2(v);
    if (vn == 0.0) break;
    for (auto& z : v) z /= vn;
    const ComplexVector av = a.multiply(v);
    estimate = std::max(estimate, norm2_sq(av));
    v = a.adjoint_multiply(av);
  }
  return estimate;
}

}  // namespace csr
