#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "csr/linalg.hpp"

namespace csr {

struct Tone {
  std::size_t bin = 0;
  // The experiments use real amplitudes; complex values are accepted here but
  // basis pursuit's real-coefficient model does not cover them.
  Complex amplitude = 0.0;
};

// A sum of complex exponentials on the DFT grid:
//   x[n] = Σ_i A_i · exp(j2π k_i n / N),  n = 0..N-1
struct MultitoneSpec {
  std::size_t length = 0;
  std::vector<Tone> components;

  // Throws BinOutOfRange, DuplicateBin, NonFinite or InvalidArgument.
  void validate() const;
  std::vector<std::size_t> sorted_bins() const;
};

// Five tones at bins 28, 26, 6, 42, 90 with amplitudes 3.5, 1.5, 4.4, 1.8, 3.0
// over N = 512 samples. This is the signal every experiment here uses.
MultitoneSpec reference_multitone(std::size_t length = 512);

class TimeSignal {
 public:
  TimeSignal() = default;
  explicit TimeSignal(ComplexVector samples);
  std::size_t size() const noexcept { return samples_.size(); }
  const ComplexVector& samples() const noexcept { return samples_; }

 private:
  ComplexVector samples_;
};

class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(ComplexVector coeffs);
  std::size_t size() const noexcept { return coeffs_.size(); }
  const ComplexVector& coeffs() const noexcept { return coeffs_; }

 private:
  ComplexVector coeffs_;
};

TimeSignal generate_multitone(const MultitoneSpec& spec);

// Unitary DFT: X[k] = N^{-1/2} Σ_n x[n] e^{-j2πkn/N}. Radix-2 FFT for powers of
// two, direct summation otherwise.
Spectrum dft(const TimeSignal& x);
TimeSignal idft(const Spectrum& u);

// O(N²) summation for any N. Also the reference the FFT is checked against.
ComplexVector dft_direct(std::span<const Complex> x, bool inverse);

// {k : |u_k| > threshold}, ascending.
std::vector<std::size_t> support_of(const Spectrum& u, double threshold);
std::vector<std::size_t> support_of(std::span<const Complex> coeffs, double threshold);

// Two columns `re,im`, one row per sample, no header, 17 significant digits.
void write_signal_csv(std::ostream& out, const TimeSignal& x);
void write_signal_csv(const std::string& path, const TimeSignal& x);
TimeSignal read_signal_csv(std::istream& in);
TimeSignal read_signal_csv(const std::string& path);

}  // namespace csr
