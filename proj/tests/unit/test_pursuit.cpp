#include <doctest.h>

#include <cmath>
#include <set>

#include "csr/benchmark.hpp"
#include "csr/pursuit.hpp"
#include "helpers.hpp"

using namespace csr;
using testing_support::code_of;
using testing_support::columns_of;
using testing_support::make_instance;
using testing_support::max_abs_diff;
using testing_support::random_sparse_spec;

namespace {

StoppingRule atoms(std::size_t k) {
  StoppingRule s;
  s.max_atoms = k;
  return s;
}

Measurements zero_measurements(const Dictionary& d) {
  return Measurements{d.mask, ComplexVector(d.rows())};
}

// Residual of the returned coefficients against the dictionary.
ComplexVector residual(const Dictionary& d, const Measurements& y, const RecoveryResult& r) {
  return testing_support::residual_of(d, y, d.to_dictionary_scale(r.coeffs));
}

}  // namespace

TEST_SUITE("pursuit") {

TEST_CASE("select_atom: max magnitude, ties to lowest index, exclusion") {
  const std::vector<std::size_t> none;
  CHECK(select_atom(ComplexVector{1.0, -3.0, 2.0}, none) == 1);
  CHECK(select_atom(ComplexVector{2.0, 2.0}, none) == 0);
  CHECK(select_atom(ComplexVector{5.0, 1.0}, std::vector<std::size_t>{0}) == 1);
  CHECK(select_atom(ComplexVector{Complex(0, 2), 2.0}, std::vector<bool>{false, false}) == 0);
  CHECK(code_of([] { select_atom(ComplexVector{1.0, 2.0}, std::vector<std::size_t>{0, 1}); }) ==
        ErrorCode::AllForbidden);
}

TEST_CASE("stopping rule validation and non-finite input") {
  const auto in = make_instance({16, {{3, 1.0}}}, 8, 1);
  CHECK(code_of([&] { omp(in.d, in.y, StoppingRule{}); }) == ErrorCode::InvalidArgument);
  StoppingRule neg;
  neg.residual_tol = -1.0;
  CHECK(code_of([&] { omp(in.d, in.y, neg); }) == ErrorCode::InvalidArgument);
  StoppingRule zero_iter = atoms(1);
  zero_iter.max_iterations = 0;
  CHECK(code_of([&] { ols(in.d, in.y, zero_iter); }) == ErrorCode::InvalidArgument);
  Measurements bad = in.y;
  bad.values[0] = Complex(std::nan(""), 0.0);
  CHECK(code_of([&] { gradient_pursuit(in.d, bad, atoms(1)); }) == ErrorCode::NonFinite);
}

TEST_CASE("zero measurements give an empty result for every greedy method") {
  const Dictionary d = build_dictionary(32, draw_mask(32, 10, 3), true);
  const Measurements y = zero_measurements(d);
  for (const auto& r : {omp(d, y, atoms(3)), ols(d, y, atoms(3)), gradient_pursuit(d, y, atoms(3))}) {
    CHECK(r.support.empty());
    CHECK(r.iterations == 0);
    CHECK(r.residual_norm == 0.0);
    for (auto z : r.coeffs) CHECK(z == Complex(0.0, 0.0));
  }
}

TEST_CASE("omp: single tone under full sampling is exact in one step") {
  const auto in = make_instance({32, {{5, 2.0}}}, 32, 0);
  const RecoveryResult r = omp(in.d, in.y, atoms(1));
  CHECK(r.support == std::vector<std::size_t>{5});
  CHECK(r.iterations == 1);
  CHECK(std::abs(r.coeffs[5]) == doctest::Approx(2.0 * std::sqrt(32.0)).epsilon(1e-12));
  CHECK(r.residual_norm < 1e-10);
}

TEST_CASE("omp recovers the reference signal from 60 samples") {
  const auto in = make_instance(reference_multitone(), 60, 7);
  const RecoveryResult r = omp(in.d, in.y, atoms(5));
  CHECK(r.support == std::vector<std::size_t>{6, 26, 28, 42, 90});
  CHECK(mse(in.truth, idft(Spectrum(r.coeffs))) < 1e-9);
  const double sqrt_n = std::sqrt(512.0);
  for (const auto& t : in.spec.components) {
    CHECK(std::abs(r.coeffs[t.bin] / sqrt_n - t.amplitude) < 1e-9);
  }
}

TEST_CASE("omp exit invariant: residual orthogonal to the chosen atoms") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 64, m = 12 + seed % 20, k = 1 + seed % 5;
    const auto in = make_instance(random_sparse_spec(n, k, seed), m, 1000 + seed);
    const RecoveryResult r = omp(in.d, in.y, atoms(k));
    const ComplexVector res = residual(in.d, in.y, r);
    double worst = 0.0;
    for (auto j : r.support) worst = std::max(worst, std::abs(inner(in.d.atoms.column(j), res)));
    CHECK(worst <= 1e-8 * norm2(in.y.values));
    CHECK(r.support.size() <= k);
  }
}

TEST_CASE("greedy methods never pick an atom twice") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = make_instance(random_sparse_spec(48, 4, seed), 16, 50 + seed);
    // No K: run until the residual tolerance, which forces many iterations.
    StoppingRule stop;
    stop.residual_tol = 1e-12 * norm2(in.y.values);
    stop.max_iterations = 16;
    for (int which = 0; which < 3; ++which) {
      std::vector<std::size_t> sizes;
      std::set<std::size_t> seen;
      bool unique = true;
      const IterationObserver obs = [&](const IterationView& v) {
        sizes.push_back(v.support.size());
        seen.insert(v.support.begin(), v.support.end());
        unique = unique && seen.size() == v.support.size();
      };
      GradientPursuitOptions no_refine;
      no_refine.refine_on_final_support = false;
      if (which == 0) omp(in.d, in.y, stop, obs);
      if (which == 1) ols(in.d, in.y, stop, obs);
      if (which == 2) gradient_pursuit(in.d, in.y, stop, no_refine, obs);
      CHECK(unique);
      for (std::size_t i = 0; i < sizes.size(); ++i) CHECK(sizes[i] == i + 1);
    }
  }
}

TEST_CASE("residual tolerance stops selection early") {
  const auto in = make_instance(reference_multitone(), 60, 3);
  StoppingRule stop;
  stop.residual_tol = 0.5 * norm2(in.y.values);
  const RecoveryResult r = omp(in.d, in.y, stop);
  CHECK(r.support.size() < 5);
  CHECK(r.residual_norm <= 0.5 * norm2(in.y.values));
}

TEST_CASE("ols equals omp on an orthonormal dictionary") {
  const auto in = make_instance(random_sparse_spec(32, 4, 9), 32, 0, false);
  std::vector<std::size_t> seq_omp, seq_ols;
  const RecoveryResult a = omp(in.d, in.y, atoms(4), [&](const IterationView& v) { seq_omp.push_back(v.support.back()); });
  const RecoveryResult b = ols(in.d, in.y, atoms(4), [&](const IterationView& v) { seq_ols.push_back(v.support.back()); });
  CHECK(seq_omp == seq_ols);
  CHECK(max_abs_diff(a.coeffs, b.coeffs) < 1e-10);
}

TEST_CASE("ols step optimality against the exhaustive candidate scan") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = make_instance(random_sparse_spec(16, 2, 70 + seed), 8, 80 + seed);
    const oracle::CCols cols = columns_of(in.d.atoms);
    std::vector<std::size_t> support;
    bool ok = true;
    ols(in.d, in.y, atoms(2), [&](const IterationView& v) {
      const std::size_t expect = oracle::ols_next(cols, in.y.values, support);
      ok = ok && v.support.back() == expect;
      support.assign(v.support.begin(), v.support.end());
    });
    CHECK(ok);
    CHECK(support.size() == 2);
  }
  const Dictionary d = build_dictionary(16, draw_mask(16, 8, 1), true);
  CHECK(ols(d, zero_measurements(d), atoms(2)).support.empty());
}

TEST_CASE("gradient pursuit: orthonormal single tone matches omp") {
  const auto in = make_instance({64, {{11, -1.5}}}, 64, 0);
  GradientPursuitOptions no_refine;
  no_refine.refine_on_final_support = false;
  const RecoveryResult g = gradient_pursuit(in.d, in.y, atoms(1), no_refine);
  const RecoveryResult o = omp(in.d, in.y, atoms(1));
  CHECK(g.iterations == 1);
  CHECK(g.support == o.support);
  CHECK(max_abs_diff(g.coeffs, o.coeffs) < 1e-10);
  CHECK(max_abs_diff(gradient_pursuit(in.d, in.y, atoms(1)).coeffs, o.coeffs) < 1e-10);
}

TEST_CASE("gradient pursuit residual sits between zero coefficients and the full refit") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = make_instance(random_sparse_spec(64, 3, 200 + seed), 24, 300 + seed);
    GradientPursuitOptions no_refine;
    no_refine.refine_on_final_support = false;
    const RecoveryResult g = gradient_pursuit(in.d, in.y, atoms(3), no_refine);
    CHECK(g.iterations == 3);
    CHECK(g.residual_norm < norm2(in.y.values));
    oracle::CCols sub;
    for (auto j : g.support) sub.push_back(in.d.atoms.column(j));
    CHECK(g.residual_norm >= oracle::ls_residual(sub, in.y.values) - 1e-12);
  }
}

TEST_CASE("gradient pursuit residual norm never increases") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = make_instance(random_sparse_spec(128, 5, 400 + seed), 40, 500 + seed);
    std::vector<double> norms{norm2(in.y.values)};
    gradient_pursuit(in.d, in.y, atoms(5), {}, [&](const IterationView& v) { norms.push_back(norm2(v.residual)); });
    for (std::size_t i = 1; i < norms.size(); ++i) CHECK(norms[i] <= norms[i - 1]);
  }
}

TEST_CASE("gradient pursuit refinement converges to the least-squares fit") {
  const auto in = make_instance(reference_multitone(), 60, 11);
  const RecoveryResult g = gradient_pursuit(in.d, in.y, atoms(5));
  CHECK(g.support == in.spec.sorted_bins());
  CHECK(mse(in.truth, idft(Spectrum(g.coeffs))) < 1e-9);
  CHECK(g.status == ErrorCode::Ok);
}

TEST_CASE("greedy methods are deterministic") {
  const auto in = make_instance(random_sparse_spec(64, 3, 1), 20, 2);
  CHECK(omp(in.d, in.y, atoms(3)).coeffs == omp(in.d, in.y, atoms(3)).coeffs);
  CHECK(ols(in.d, in.y, atoms(3)).coeffs == ols(in.d, in.y, atoms(3)).coeffs);
  CHECK(gradient_pursuit(in.d, in.y, atoms(3)).coeffs == gradient_pursuit(in.d, in.y, atoms(3)).coeffs);
}

TEST_CASE("selection stops at min(M, N) atoms") {
  const auto in = make_instance(random_sparse_spec(16, 6, 3), 4, 4);
  StoppingRule stop;
  stop.residual_tol = 0.0;
  CHECK(omp(in.d, in.y, stop).support.size() <= 4);
  CHECK(ols(in.d, in.y, stop).support.size() <= 4);
}

}  // TEST_SUITE
