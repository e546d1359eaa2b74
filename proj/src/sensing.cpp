#include "csr/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <string>

#include "csr/error.hpp"
#include "csr/rng.hpp"

namespace csr {

SampleMask::SampleMask(std::size_t length, std::vector<std::size_t> indices)
    : length_(length), indices_(std::move(indices)) {
  if (indices_.empty()) throw Error(ErrorCode::InvalidArgument, "mask must keep M >= 1 samples");
  if (indices_.size() > length_) throw Error(ErrorCode::MTooLarge, "mask has M > N");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= length_) {
      throw Error(ErrorCode::InvalidArgument, "mask index " + std::to_string(indices_[i]) +
                                                  " out of range for N = " + std::to_string(length_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "mask indices must be strictly increasing");
    }
  }
}

std::vector<std::size_t> SampleMask::missing() const {
  std::vector<std::size_t> out;
  out.reserve(length_ - indices_.size());
  std::size_t next = 0;
  for (std::size_t n = 0; n < length_; ++n) {
    if (next < indices_.size() && indices_[next] == n) {
      ++next;
    } else {
      out.push_back(n);
    }
  }
  return out;
}

ComplexVector Dictionary::to_spectrum_scale(std::span<const Complex> v) const {
  if (v.size() != cols()) throw Error(ErrorCode::DimensionMismatch, "coefficient length != N");
  ComplexVector u(v.begin(), v.end());
  if (normalized) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] /= column_norms[k];
  }
  return u;
}

ComplexVector Dictionary::to_dictionary_scale(std::span<const Complex> u) const {
  if (u.size() != cols()) throw Error(ErrorCode::DimensionMismatch, "coefficient length != N");
  ComplexVector v(u.begin(), u.end());
  if (normalized) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= column_norms[k];
  }
  return v;
}

SampleMask draw_mask(std::size_t length, std::size_t count, std::uint64_t seed) {
  if (count > length) {
    throw Error(ErrorCode::MTooLarge,
                "M = " + std::to_string(count) + " exceeds N = " + std::to_string(length));
  }
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "M must be >= 1");
  std::vector<std::size_t> pool(length);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  CounterRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.bounded(length - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return SampleMask(length, std::move(pool));
}

Measurements sample(const TimeSignal& x, const SampleMask& mask) {
  if (x.size() != mask.length()) {
    throw Error(ErrorCode::LengthMismatch, "signal length " + std::to_string(x.size()) +
                                               " != mask N " + std::to_string(mask.length()));
  }
  ComplexVector values;
  values.reserve(mask.count());
  for (auto idx : mask.indices()) values.push_back(x.samples()[idx]);
  return Measurements{mask, std::move(values)};
}

Dictionary build_dictionary(std::size_t length, const SampleMask& mask, bool normalize) {
  if (mask.length() != length) throw Error(ErrorCode::LengthMismatch, "mask N != dictionary N");
  const std::size_t m_rows = mask.count();
  const double scale = 1.0 / std::sqrt(static_cast<double>(length));
  std::vector<Complex> entries(m_rows * length);
  for (std::size_t m = 0; m < m_rows; ++m) {
    const std::size_t idx = mask.indices()[m];
    for (std::size_t k = 0; k < length; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * idx) % length) /
                           static_cast<double>(length);
      entries[m * length + k] = Complex(std::cos(angle), std::sin(angle)) * scale;
    }
  }
  std::vector<double> norms(length, 0.0);
  for (std::size_t m = 0; m < m_rows; ++m) {
    for (std::size_t k = 0; k < length; ++k) norms[k] += std::norm(entries[m * length + k]);
  }
  for (auto& v : norms) v = std::sqrt(v);
  if (normalize) {
    for (std::size_t m = 0; m < m_rows; ++m) {
      for (std::size_t k = 0; k < length; ++k) entries[m * length + k] /= norms[k];
    }
  }
  return Dictionary{mask, ComplexMatrix(m_rows, length, std::move(entries)), std::move(norms),
                    normalize};
}

double mutual_coherence(const ComplexMatrix& atoms) {
  const std::size_t n = atoms.cols();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "coherence needs >= 2 columns");
  std::vector<ComplexVector> cols(n);
  std::vector<double> norms(n);
  for (std::size_t k = 0; k < n; ++k) {
    cols[k] = atoms.column(k);
    norms[k] = norm2(cols[k]);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (norms[i] == 0.0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (norms[j] == 0.0) continue;
      const double c = std::abs(inner(cols[i], cols[j])) / (norms[i] * norms[j]);
      best = std::max(best, c);
    }
  }
  return std::min(best, 1.0);
}

double mutual_coherence(const Dictionary& d) { return mutual_coherence(d.atoms); }

void check_consistent(const Dictionary& d, const Measurements& y) {
  if (y.values.size() != d.rows() || !(y.mask == d.mask)) {
    throw Error(ErrorCode::DimensionMismatch, "measurements were not taken through this dictionary's mask");
  }
}

void write_mask_csv(std::ostream& out, const SampleMask& mask) {
  for (auto idx : mask.indices()) out << idx << '\n';
}

void write_mask_csv(const std::string& path, const SampleMask& mask) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_mask_csv(out, mask);
}

SampleMask read_mask_csv(std::istream& in, std::size_t length) {
  std::vector<std::size_t> indices;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(line, &used);
      if (used != line.size() || v < 0) throw std::invalid_argument("");
      indices.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "mask line " + std::to_string(line_no) + ": bad index");
    }
  }
  return SampleMask(length, std::move(indices));
}

SampleMask read_mask_csv(const std::string& path, std::size_t length) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_mask_csv(in, length);
}

}  // namespace csr
