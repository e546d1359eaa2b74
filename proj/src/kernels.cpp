#include "csr/kernels.hpp"

#include <cmath>
#include <vector>

#include "csr/error.hpp"

namespace csr::kernels {

namespace {

void check_adjoint(const ComplexMatrix& a, std::span<const Complex> r, std::span<Complex> out) {
  if (r.size() != a.rows() || out.size() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "adjoint_multiply: shape mismatch");
  }
}

// Columns [begin, end) of Aᴴr, accumulated row by row so each entry sees the
// rows in ascending order.
void adjoint_block(const ComplexMatrix& a, std::span<const Complex> r, std::span<Complex> out,
                   std::size_t begin, std::size_t end) {
  for (std::size_t k = begin; k < end; ++k) out[k] = 0.0;
  for (std::size_t m = 0; m < a.rows(); ++m) {
    const Complex rm = r[m];
    const auto row = a.row(m);
    for (std::size_t k = begin; k < end; ++k) out[k] += std::conj(row[k]) * rm;
  }
}

constexpr std::size_t kLanes = 4;

// Per-thread scratch for one sample's perturbation terms.
struct DifferenceScratch {
  std::vector<double> wr, wi;
  explicit DifferenceScratch(std::size_t n) : wr(n), wi(n) {}
};

// Sums use kLanes fixed partial accumulators so the loop vectorizes without
// reassociation; the order is the same on every call.
Complex differences_at(std::span<const double> xr, std::span<const double> xi,
                       std::span<const Complex> twiddle, std::size_t n, double delta,
                       DifferenceScratch& scratch) {
  const std::size_t len = xr.size();
  double* wr = scratch.wr.data();
  double* wi = scratch.wi.data();
  std::size_t t = 0;
  for (std::size_t k = 0; k < len; ++k) {
    wr[k] = twiddle[t].real() * delta;
    wi[k] = twiddle[t].imag() * delta;
    t += n;
    if (t >= len) t -= len;
  }
  double rp[kLanes] = {}, rm[kLanes] = {}, ip[kLanes] = {}, im[kLanes] = {};
  const std::size_t body = len - len % kLanes;
  for (std::size_t k = 0; k < body; k += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) {
      const double a = xr[k + j], b = xi[k + j], c = wr[k + j], d = wi[k + j];
      rp[j] += std::sqrt((a + c) * (a + c) + (b + d) * (b + d));
      rm[j] += std::sqrt((a - c) * (a - c) + (b - d) * (b - d));
      // j·w = (−d, c)
      ip[j] += std::sqrt((a - d) * (a - d) + (b + c) * (b + c));
      im[j] += std::sqrt((a + d) * (a + d) + (b - c) * (b - c));
    }
  }
  for (std::size_t k = body; k < len; ++k) {
    const double a = xr[k], b = xi[k], c = wr[k], d = wi[k];
    rp[0] += std::sqrt((a + c) * (a + c) + (b + d) * (b + d));
    rm[0] += std::sqrt((a - c) * (a - c) + (b - d) * (b - d));
    ip[0] += std::sqrt((a - d) * (a - d) + (b + c) * (b + c));
    im[0] += std::sqrt((a + d) * (a + d) + (b - c) * (b - c));
  }
  auto total = [](const double* v) { return (v[0] + v[1]) + (v[2] + v[3]); };
  return {total(rp) - total(rm), total(ip) - total(im)};
}

void split_parts(std::span<const Complex> x, std::vector<double>& re, std::vector<double>& im) {
  re.resize(x.size());
  im.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    re[k] = x[k].real();
    im[k] = x[k].imag();
  }
}

void check_differences(std::span<const Complex> spectrum, std::span<const Complex> twiddle,
                       std::span<const std::size_t> missing, std::span<Complex> out) {
  if (twiddle.size() != spectrum.size() || out.size() != missing.size()) {
    throw Error(ErrorCode::DimensionMismatch, "concentration_differences: shape mismatch");
  }
  for (auto n : missing) {
    if (n >= spectrum.size()) throw Error(ErrorCode::DimensionMismatch, "missing index out of range");
  }
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> d) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) acc += a[k] * d[k] * b[k];
  return acc;
}

void check_gram(const RealMatrix& g, std::span<const double> d, RealMatrix& out) {
  if (d.size() != g.cols) throw Error(ErrorCode::DimensionMismatch, "weighted_gram: d length");
  if (out.rows != g.rows || out.cols != g.rows) out = RealMatrix(g.rows, g.rows);
}

}  // namespace

void adjoint_multiply_serial(const ComplexMatrix& a, std::span<const Complex> r,
                             std::span<Complex> out) {
  check_adjoint(a, r, out);
  adjoint_block(a, r, out, 0, a.cols());
}

void adjoint_multiply_parallel(const ComplexMatrix& a, std::span<const Complex> r,
                               std::span<Complex> out) {
  check_adjoint(a, r, out);
  constexpr std::size_t kBlock = 64;
  const auto blocks = static_cast<long>((a.cols() + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(a.cols(), begin + kBlock);
    adjoint_block(a, r, out, begin, end);
  }
}

void concentration_differences_serial(std::span<const Complex> spectrum,
                                      std::span<const Complex> twiddle,
                                      std::span<const std::size_t> missing, double delta,
                                      std::span<Complex> out) {
  check_differences(spectrum, twiddle, missing, out);
  std::vector<double> xr, xi;
  split_parts(spectrum, xr, xi);
  DifferenceScratch scratch(spectrum.size());
  for (std::size_t i = 0; i < missing.size(); ++i) {
    out[i] = differences_at(xr, xi, twiddle, missing[i], delta, scratch);
  }
}

void concentration_differences_parallel(std::span<const Complex> spectrum,
                                        std::span<const Complex> twiddle,
                                        std::span<const std::size_t> missing, double delta,
                                        std::span<Complex> out) {
  check_differences(spectrum, twiddle, missing, out);
  std::vector<double> xr, xi;
  split_parts(spectrum, xr, xi);
  const auto count = static_cast<long>(missing.size());
#pragma omp parallel
  {
    DifferenceScratch scratch(spectrum.size());
#pragma omp for schedule(static)
    for (long i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] =
          differences_at(xr, xi, twiddle, missing[static_cast<std::size_t>(i)], delta, scratch);
    }
  }
}

void weighted_gram_serial(const RealMatrix& g, std::span<const double> d, RealMatrix& out) {
  check_gram(g, d, out);
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = weighted_dot(g.row(i), g.row(j), d);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

void weighted_gram_parallel(const RealMatrix& g, std::span<const double> d, RealMatrix& out) {
  check_gram(g, d, out);
  const auto rows = static_cast<long>(g.rows);
#pragma omp parallel for schedule(dynamic, 4)
  for (long il = 0; il < rows; ++il) {
    const auto i = static_cast<std::size_t>(il);
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = weighted_dot(g.row(i), g.row(j), d);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

}  // namespace csr::kernels
