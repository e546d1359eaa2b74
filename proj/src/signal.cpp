#include "csr/signal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "csr/error.hpp"

namespace csr {

namespace {

Complex unit_root(std::size_t t, std::size_t n, double sign) {
  const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

// In-place iterative radix-2 FFT, unnormalized. sign = -1 forward, +1 inverse.
void fft_radix2(ComplexVector& a, double sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  ComplexVector twiddle(n / 2);
  for (std::size_t t = 0; t < n / 2; ++t) twiddle[t] = unit_root(t, n, sign);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = a[start + k];
        const Complex v = a[start + k + half] * twiddle[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

ComplexVector transform(std::span<const Complex> x, bool inverse) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "transform of empty signal");
  if (!std::has_single_bit(n)) return dft_direct(x, inverse);
  ComplexVector a(x.begin(), x.end());
  fft_radix2(a, inverse ? 1.0 : -1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : a) z *= scale;
  return a;
}

}  // namespace

void MultitoneSpec::validate() const {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "signal length must be >= 1");
  if (components.size() > length) {
    throw Error(ErrorCode::InvalidArgument, "more components than samples");
  }
  std::vector<bool> seen(length, false);
  for (const auto& tone : components) {
    if (tone.bin >= length) {
      throw Error(ErrorCode::BinOutOfRange,
                  "bin " + std::to_string(tone.bin) + " >= N = " + std::to_string(length));
    }
    if (seen[tone.bin]) throw Error(ErrorCode::DuplicateBin, "bin " + std::to_string(tone.bin));
    seen[tone.bin] = true;
    if (!std::isfinite(tone.amplitude.real()) || !std::isfinite(tone.amplitude.imag())) {
      throw Error(ErrorCode::NonFinite, "amplitude of bin " + std::to_string(tone.bin));
    }
  }
}

std::vector<std::size_t> MultitoneSpec::sorted_bins() const {
  std::vector<std::size_t> bins;
  bins.reserve(components.size());
  for (const auto& tone : components) bins.push_back(tone.bin);
  std::sort(bins.begin(), bins.end());
  return bins;
}

MultitoneSpec reference_multitone(std::size_t length) {
  return MultitoneSpec{length, {{28, 3.5}, {26, 1.5}, {6, 4.4}, {42, 1.8}, {90, 3.0}}};
}

TimeSignal::TimeSignal(ComplexVector samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "time signal must have N >= 1");
}

Spectrum::Spectrum(ComplexVector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "spectrum must have N >= 1");
}

TimeSignal generate_multitone(const MultitoneSpec& spec) {
  spec.validate();
  const std::size_t n_len = spec.length;
  ComplexVector samples(n_len);
  for (std::size_t n = 0; n < n_len; ++n) {
    Complex acc = 0.0;
    for (const auto& tone : spec.components) {
      // Reduce k·n modulo N first so the phase is exact for large n.
      acc += tone.amplitude * unit_root((tone.bin * n) % n_len, n_len, 1.0);
    }
    samples[n] = acc;
  }
  return TimeSignal(std::move(samples));
}

ComplexVector dft_direct(std::span<const Complex> x, bool inverse) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "transform of empty signal");
  const double sign = inverse ? 1.0 : -1.0;
  ComplexVector roots(n);
  for (std::size_t t = 0; t < n; ++t) roots[t] = unit_root(t, n, sign);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += x[j] * roots[(k * j) % n];
    out[k] = acc * scale;
  }
  return out;
}

Spectrum dft(const TimeSignal& x) { return Spectrum(transform(x.samples(), false)); }

TimeSignal idft(const Spectrum& u) { return TimeSignal(transform(u.coeffs(), true)); }

std::vector<std::size_t> support_of(std::span<const Complex> coeffs, double threshold) {
  if (!(threshold >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be >= 0");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (std::abs(coeffs[k]) > threshold) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> support_of(const Spectrum& u, double threshold) {
  return support_of(u.coeffs(), threshold);
}

void write_signal_csv(std::ostream& out, const TimeSignal& x) {
  out << std::setprecision(17);
  for (const auto& z : x.samples()) out << z.real() << ',' << z.imag() << '\n';
}

void write_signal_csv(const std::string& path, const TimeSignal& x) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_signal_csv(out, x);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

TimeSignal read_signal_csv(std::istream& in) {
  ComplexVector samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected re,im");
    }
    try {
      std::size_t used_re = 0, used_im = 0;
      const std::string re_text = line.substr(0, comma);
      const std::string im_text = line.substr(comma + 1);
      const double re = std::stod(re_text, &used_re);
      const double im = std::stod(im_text, &used_im);
      if (used_re != re_text.size() || used_im != im_text.size()) throw std::invalid_argument("");
      samples.emplace_back(re, im);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad number");
    }
  }
  if (!all_finite(samples)) throw Error(ErrorCode::NonFinite, "signal CSV has NaN/Inf");
  return TimeSignal(std::move(samples));
}

TimeSignal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_signal_csv(in);
}

}  // namespace csr
