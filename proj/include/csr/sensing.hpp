#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csr/linalg.hpp"
#include "csr/signal.hpp"

namespace csr {

// The observed time instants: M distinct, strictly increasing indices in [0, N).
class SampleMask {
 public:
  SampleMask() = default;
  SampleMask(std::size_t length, std::vector<std::size_t> indices);

  std::size_t length() const noexcept { return length_; }
  std::size_t count() const noexcept { return indices_.size(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  // Indices in [0, N) that are not observed, ascending.
  std::vector<std::size_t> missing() const;

  bool operator==(const SampleMask&) const = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::size_t> indices_;
};

struct Measurements {
  SampleMask mask;
  ComplexVector values;
};

// M×N partial inverse-DFT matrix: A[m][k] = N^{-1/2} e^{j2πk·idx_m/N}, with
// optional unit-norm column scaling. column_norms holds the norms before
// scaling, so a coefficient v on the scaled dictionary corresponds to
// v / column_norms[k] on the unitary-DFT scale.
struct Dictionary {
  SampleMask mask;
  ComplexMatrix atoms;
  std::vector<double> column_norms;
  bool normalized = false;

  std::size_t rows() const noexcept { return atoms.rows(); }
  std::size_t cols() const noexcept { return atoms.cols(); }

  // Dictionary-scale coefficients -> unitary-DFT scale, and back.
  ComplexVector to_spectrum_scale(std::span<const Complex> v) const;
  ComplexVector to_dictionary_scale(std::span<const Complex> u) const;
};

// M indices drawn uniformly without replacement by a seeded partial
// Fisher-Yates shuffle over CounterRng, returned sorted.
SampleMask draw_mask(std::size_t length, std::size_t count, std::uint64_t seed);

Measurements sample(const TimeSignal& x, const SampleMask& mask);

Dictionary build_dictionary(std::size_t length, const SampleMask& mask, bool normalize);

// Largest normalized inner product between distinct columns. Zero columns are
// skipped.
double mutual_coherence(const ComplexMatrix& atoms);
double mutual_coherence(const Dictionary& d);

// Throws DimensionMismatch unless y was taken through d's mask.
void check_consistent(const Dictionary& d, const Measurements& y);

// Mask CSV: one index per line, no header. N is not stored and must be given.
void write_mask_csv(std::ostream& out, const SampleMask& mask);
void write_mask_csv(const std::string& path, const SampleMask& mask);
SampleMask read_mask_csv(std::istream& in, std::size_t length);
SampleMask read_mask_csv(const std::string& path, std::size_t length);

}  // namespace csr
