#pragma once

// Instance builders shared by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "csr/error.hpp"
#include "csr/linalg.hpp"
#include "csr/rng.hpp"
#include "csr/sensing.hpp"
#include "csr/signal.hpp"
#include "oracles.hpp"

namespace testing_support {

// Error code thrown by fn, or Ok when it returns normally.
template <class F>
csr::ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const csr::Error& e) {
    return e.code();
  }
  return csr::ErrorCode::Ok;
}

inline csr::ComplexVector random_complex(std::size_t n, std::uint64_t seed) {
  csr::CounterRng rng(seed);
  csr::ComplexVector v(n);
  for (auto& z : v) z = csr::Complex(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
  return v;
}

inline csr::ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return csr::ComplexMatrix(rows, cols, random_complex(rows * cols, seed));
}

inline oracle::CCols columns_of(const csr::ComplexMatrix& a) {
  oracle::CCols out(a.cols(), oracle::CVec(a.rows()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out[c][r] = a(r, c);
  }
  return out;
}

// K distinct bins with real amplitudes of magnitude in [1, 2] and random sign.
inline csr::MultitoneSpec random_sparse_spec(std::size_t n, std::size_t k, std::uint64_t seed) {
  csr::CounterRng rng(seed);
  csr::MultitoneSpec spec{n, {}};
  std::vector<std::size_t> bins;
  while (bins.size() < k) {
    const std::size_t b = rng.bounded(n);
    if (std::find(bins.begin(), bins.end(), b) == bins.end()) bins.push_back(b);
  }
  for (auto b : bins) {
    const double mag = 1.0 + rng.uniform01();
    spec.components.push_back({b, rng.uniform01() < 0.5 ? -mag : mag});
  }
  return spec;
}

// Everything one recovery needs: truth, mask, measurements, normalized dictionary.
struct Instance {
  csr::MultitoneSpec spec;
  csr::TimeSignal truth;
  csr::Measurements y;
  csr::Dictionary d;
};

inline Instance make_instance(const csr::MultitoneSpec& spec, std::size_t m, std::uint64_t mask_seed,
                              bool normalize = true) {
  Instance in{spec, csr::generate_multitone(spec), {}, {}};
  const csr::SampleMask mask = csr::draw_mask(spec.length, m, mask_seed);
  in.y = csr::sample(in.truth, mask);
  in.d = csr::build_dictionary(spec.length, mask, normalize);
  return in;
}

// Residual y − A·v for a dictionary-scale coefficient vector.
inline csr::ComplexVector residual_of(const csr::Dictionary& d, const csr::Measurements& y,
                                      std::span<const csr::Complex> dict_coeffs) {
  return csr::subtract(y.values, d.atoms.multiply(dict_coeffs));
}

inline double max_abs_diff(std::span<const csr::Complex> a, std::span<const csr::Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Basis pursuit over real coefficients as a standard-form LP in (u⁺, u⁻),
// stacked real and imaginary rows; input for the vertex-enumeration oracle.
struct SplitLp {
  std::vector<double> c, b;
  std::vector<std::vector<double>> a;
};
inline SplitLp split_lp(const csr::Dictionary& d, const csr::Measurements& y) {
  const std::size_t m = d.rows(), n = d.cols();
  SplitLp lp{std::vector<double>(2 * n, 1.0), std::vector<double>(2 * m),
             std::vector<std::vector<double>>(2 * m, std::vector<double>(2 * n))};
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      lp.a[r][k] = d.atoms(r, k).real();
      lp.a[r][n + k] = -d.atoms(r, k).real();
      lp.a[m + r][k] = d.atoms(r, k).imag();
      lp.a[m + r][n + k] = -d.atoms(r, k).imag();
    }
    lp.b[r] = y.values[r].real();
    lp.b[m + r] = y.values[r].imag();
  }
  return lp;
}

}  // namespace testing_support
