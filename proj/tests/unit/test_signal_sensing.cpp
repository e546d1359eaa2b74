#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "csr/sensing.hpp"
#include "csr/signal.hpp"
#include "helpers.hpp"

using namespace csr;
using testing_support::code_of;
using testing_support::columns_of;
using testing_support::max_abs_diff;
using testing_support::random_complex;

namespace {

const double kSqrt512 = std::sqrt(512.0);

// Direct evaluation of the multitone sum at one instant.
Complex tone_sum(const MultitoneSpec& spec, std::size_t n) {
  Complex s = 0.0;
  for (const auto& t : spec.components) {
    s += t.amplitude *
         std::polar(1.0, 2.0 * std::numbers::pi * double((t.bin * n) % spec.length) / double(spec.length));
  }
  return s;
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("generate: DC tone, empty spec, reference signal at n = 0") {
  const TimeSignal dc = generate_multitone({4, {{0, 1.0}}});
  for (auto z : dc.samples()) CHECK(z == Complex(1.0, 0.0));

  const TimeSignal empty = generate_multitone({8, {}});
  CHECK(empty.size() == 8);
  for (auto z : empty.samples()) CHECK(z == Complex(0.0, 0.0));

  const TimeSignal ref = generate_multitone(reference_multitone());
  CHECK(ref.size() == 512);
  CHECK(std::abs(ref.samples()[0] - Complex(14.2, 0.0)) < 1e-12);
}

TEST_CASE("generate matches direct evaluation at every instant") {
  const MultitoneSpec spec = reference_multitone();
  const TimeSignal x = generate_multitone(spec);
  for (std::size_t n = 0; n < 512; ++n) CHECK(std::abs(x.samples()[n] - tone_sum(spec, n)) < 1e-12);
}

TEST_CASE("spec validation") {
  CHECK(code_of([] { generate_multitone({8, {{3, 1.0}, {3, 2.0}}}); }) == ErrorCode::DuplicateBin);
  CHECK(code_of([] { generate_multitone({8, {{8, 1.0}}}); }) == ErrorCode::BinOutOfRange);
  CHECK(code_of([] { generate_multitone({0, {}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { generate_multitone({4, {{1, std::nan("")}}}); }) == ErrorCode::NonFinite);
  CHECK(reference_multitone().sorted_bins() == std::vector<std::size_t>{6, 26, 28, 42, 90});
}

TEST_CASE("dft: delta gives a flat spectrum, zero gives zero") {
  const Spectrum s = dft(TimeSignal({1.0, 0.0, 0.0, 0.0}));
  for (auto z : s.coeffs()) CHECK(std::abs(z - Complex(0.5, 0.0)) < 1e-15);
  const Spectrum z = dft(TimeSignal(ComplexVector(16)));
  for (auto v : z.coeffs()) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("dft of a single tone is a spike matching the naive oracle") {
  const TimeSignal x = generate_multitone({512, {{6, 4.4}}});
  const Spectrum s = dft(x);
  const oracle::CVec ref = oracle::naive_dft(x.samples(), false);
  CHECK(max_abs_diff(s.coeffs(), ref) < 1e-9);
  CHECK(std::abs(s.coeffs()[6]) == doctest::Approx(4.4 * kSqrt512).epsilon(1e-12));
  for (std::size_t k = 0; k < 512; ++k) {
    if (k != 6) CHECK(std::abs(s.coeffs()[k]) < 1e-9);
  }
}

TEST_CASE("fft and direct summation agree with the naive oracle for power-of-two and other lengths") {
  for (std::size_t n : {1u, 2u, 3u, 8u, 12u, 64u, 100u, 256u}) {
    const ComplexVector x = random_complex(n, 10 + n);
    const oracle::CVec ref = oracle::naive_dft(x, false);
    CHECK(max_abs_diff(dft(TimeSignal(x)).coeffs(), ref) < 1e-11);
    CHECK(max_abs_diff(dft_direct(x, false), ref) < 1e-11);
    CHECK(max_abs_diff(idft(Spectrum(x)).samples(), oracle::naive_dft(x, true)) < 1e-11);
  }
}

TEST_CASE("idft: spike at bin 0 and round trip") {
  const TimeSignal c = idft(Spectrum({1.0, 0.0, 0.0, 0.0}));
  for (auto z : c.samples()) CHECK(std::abs(z - Complex(0.5, 0.0)) < 1e-15);
  const TimeSignal zero = idft(Spectrum(ComplexVector(8)));
  for (auto z : zero.samples()) CHECK(z == Complex(0.0, 0.0));

  const ComplexVector x = random_complex(64, 99);
  CHECK(max_abs_diff(idft(dft(TimeSignal(x))).samples(), x) < 1e-10);
  const ComplexVector y = random_complex(48, 98);
  CHECK(max_abs_diff(idft(dft(TimeSignal(y))).samples(), y) < 1e-10);
}

TEST_CASE("Parseval and linearity") {
  for (std::size_t n : {16u, 30u, 512u}) {
    const ComplexVector x = random_complex(n, 500 + n);
    const ComplexVector y = random_complex(n, 600 + n);
    const double nx = norm2(x);
    CHECK(std::abs(norm2(dft(TimeSignal(x)).coeffs()) - nx) <= 1e-10 * nx);
    ComplexVector sum(n);
    for (std::size_t i = 0; i < n; ++i) sum[i] = x[i] + y[i];
    const auto fx = dft(TimeSignal(x)).coeffs(), fy = dft(TimeSignal(y)).coeffs();
    const auto fs = dft(TimeSignal(sum)).coeffs();
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fs[k] - (fx[k] + fy[k])) < 1e-10);
  }
}

TEST_CASE("multitone spectrum: support, magnitude A·√N and zero phase") {
  const MultitoneSpec spec = reference_multitone();
  const Spectrum s = dft(generate_multitone(spec));
  for (const auto& t : spec.components) {
    const Complex u = s.coeffs()[t.bin];
    CHECK(std::abs(u - t.amplitude * kSqrt512) < 1e-9);
  }
  CHECK(support_of(s, 0.5 * kSqrt512) == spec.sorted_bins());
  CHECK(support_of(s, 1e-9) == spec.sorted_bins());
}

TEST_CASE("support_of is strict and rejects negative thresholds") {
  CHECK(support_of(Spectrum(ComplexVector(5)), 0.0).empty());
  CHECK(support_of(Spectrum({1.0, 0.1, 0.0}), 0.1) == std::vector<std::size_t>{0});
  CHECK(code_of([] { support_of(Spectrum({1.0}), -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("signal CSV round trip is exact") {
  const ComplexVector x = random_complex(33, 8);
  std::stringstream ss;
  write_signal_csv(ss, TimeSignal(x));
  const TimeSignal back = read_signal_csv(ss);
  CHECK(back.samples() == x);

  std::stringstream bad("1.0,2.0\n3.0\n");
  CHECK(code_of([&] { read_signal_csv(bad); }) == ErrorCode::Parse);
  std::stringstream junk("1.0,abc\n");
  CHECK(code_of([&] { read_signal_csv(junk); }) == ErrorCode::Parse);
  CHECK(code_of([] { read_signal_csv(std::string("/nonexistent/signal.csv")); }) == ErrorCode::Io);
}

}  // TEST_SUITE

TEST_SUITE("sensing") {

TEST_CASE("draw_mask: full sampling, determinism, validation") {
  const SampleMask full = draw_mask(8, 8, 1234);
  CHECK(full.indices() == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(draw_mask(512, 30, 5) == draw_mask(512, 30, 5));
  CHECK(draw_mask(512, 30, 5) != draw_mask(512, 30, 6));
  CHECK(code_of([] { draw_mask(8, 9, 1); }) == ErrorCode::MTooLarge);
  CHECK(code_of([] { draw_mask(8, 0, 1); }) == ErrorCode::InvalidArgument);

  const SampleMask m = draw_mask(100, 40, 3);
  CHECK(m.count() == 40);
  for (std::size_t i = 1; i < m.count(); ++i) CHECK(m.indices()[i - 1] < m.indices()[i]);
  CHECK(m.missing().size() == 60);
}

TEST_CASE("mask constructor validation") {
  CHECK(code_of([] { SampleMask(4, {1, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SampleMask(4, {2, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SampleMask(4, {4}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SampleMask(4, {}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("draw_mask inclusion frequencies are uniform within 5 sigma") {
  const std::size_t n = 512, m = 30, draws = 100000;
  std::vector<std::size_t> hits(n);
  for (std::size_t s = 0; s < draws; ++s) {
    const SampleMask mask = draw_mask(n, m, mix_seed(77, s));
    for (auto i : mask.indices()) ++hits[i];
  }
  const auto band = oracle::binomial_band(double(draws), double(m) / double(n), 5.0);
  std::size_t outside = 0;
  for (auto h : hits) {
    if (double(h) < band.lo || double(h) > band.hi) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("sample: selection semantics") {
  const ComplexVector x{Complex(1, 1), Complex(2, 0), Complex(3, -1), Complex(4, 0)};
  const Measurements y = sample(TimeSignal(x), SampleMask(4, {0, 2}));
  CHECK(y.values == ComplexVector{x[0], x[2]});
  CHECK(sample(TimeSignal(x), draw_mask(4, 4, 0)).values == x);
  CHECK(code_of([&] { sample(TimeSignal(x), SampleMask(5, {0})); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("sample of the reference signal equals direct evaluation at the masked instants") {
  const MultitoneSpec spec = reference_multitone();
  const SampleMask mask = draw_mask(512, 30, 2024);
  const TimeSignal x = generate_multitone(spec);
  const Measurements y = sample(x, mask);
  for (std::size_t i = 0; i < mask.count(); ++i) {
    CHECK(y.values[i] == x.samples()[mask.indices()[i]]);
    CHECK(std::abs(y.values[i] - tone_sum(spec, mask.indices()[i])) < 1e-12);
  }
}

TEST_CASE("dictionary: full mask is unitary") {
  const Dictionary d = build_dictionary(16, draw_mask(16, 16, 0), false);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      Complex g = 0.0;
      for (std::size_t r = 0; r < 16; ++r) g += std::conj(d.atoms(r, i)) * d.atoms(r, j);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
  }
  CHECK(mutual_coherence(d) < 1e-10);
}

TEST_CASE("dictionary entries and normalization") {
  const SampleMask mask = draw_mask(32, 9, 17);
  const Dictionary raw = build_dictionary(32, mask, false);
  const Dictionary nrm = build_dictionary(32, mask, true);
  for (std::size_t r = 0; r < 9; ++r) {
    for (std::size_t k = 0; k < 32; ++k) {
      const Complex expect =
          std::polar(1.0 / std::sqrt(32.0), 2.0 * std::numbers::pi * double((k * mask.indices()[r]) % 32) / 32.0);
      CHECK(std::abs(raw.atoms(r, k) - expect) < 1e-14);
    }
  }
  for (std::size_t k = 0; k < 32; ++k) {
    CHECK(std::abs(norm2(nrm.atoms.column(k)) - 1.0) < 1e-12);
    CHECK(nrm.column_norms[k] == doctest::Approx(std::sqrt(9.0 / 32.0)));
  }
}

TEST_CASE("dictionary times the true spectrum reproduces the samples") {
  const MultitoneSpec spec = reference_multitone();
  const TimeSignal x = generate_multitone(spec);
  const Spectrum u = dft(x);
  for (bool normalize : {false, true}) {
    const SampleMask mask = draw_mask(512, 60, 31);
    const Dictionary d = build_dictionary(512, mask, normalize);
    const ComplexVector v = d.to_dictionary_scale(u.coeffs());
    CHECK(max_abs_diff(d.atoms.multiply(v), sample(x, mask).values) < 1e-9);
    CHECK(max_abs_diff(d.to_spectrum_scale(v), u.coeffs()) < 1e-9);
  }
  // Same for a random spectrum through the factored chain.
  const ComplexVector w = random_complex(64, 5);
  const SampleMask mask = draw_mask(64, 20, 6);
  const Dictionary d = build_dictionary(64, mask, true);
  CHECK(max_abs_diff(d.atoms.multiply(d.to_dictionary_scale(w)), sample(idft(Spectrum(w)), mask).values) < 1e-9);
}

TEST_CASE("coherence: oracle agreement, duplicated column, invariances") {
  const Dictionary d = build_dictionary(32, draw_mask(32, 8, 1), true);
  CHECK(std::abs(mutual_coherence(d) - oracle::coherence(columns_of(d.atoms))) < 1e-12);

  const ComplexMatrix dup = ComplexMatrix::from_columns({{1.0, 2.0}, {3.0, 1.0}, {1.0, 2.0}});
  CHECK(mutual_coherence(dup) == doctest::Approx(1.0));

  // Permuting and rescaling columns leaves coherence unchanged.
  const ComplexMatrix raw = build_dictionary(16, draw_mask(16, 6, 2), false).atoms;
  std::vector<ComplexVector> cols;
  for (std::size_t k = 16; k-- > 0;) {
    ComplexVector c = raw.column(k);
    for (auto& z : c) z *= Complex(0.5 + double(k), -1.0);
    cols.push_back(c);
  }
  CHECK(std::abs(mutual_coherence(ComplexMatrix::from_columns(cols)) - mutual_coherence(raw)) < 1e-12);
  CHECK(code_of([] { mutual_coherence(ComplexMatrix::identity(1)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mask CSV round trip") {
  const SampleMask m = draw_mask(100, 17, 9);
  std::stringstream ss;
  write_mask_csv(ss, m);
  CHECK(read_mask_csv(ss, 100) == m);
  std::stringstream bad("3\nx\n");
  CHECK(code_of([&] { read_mask_csv(bad, 100); }) == ErrorCode::Parse);
}

TEST_CASE("check_consistent catches a foreign mask") {
  const MultitoneSpec spec{16, {{2, 1.0}}};
  const TimeSignal x = generate_multitone(spec);
  const Dictionary d = build_dictionary(16, draw_mask(16, 8, 1), true);
  const Measurements y = sample(x, draw_mask(16, 8, 2));
  CHECK(code_of([&] { check_consistent(d, y); }) == ErrorCode::DimensionMismatch);
}

}  // TEST_SUITE
