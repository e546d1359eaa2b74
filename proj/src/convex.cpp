#include "csr/convex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "csr/error.hpp"
#include "csr/kernels.hpp"

namespace csr {

namespace {

using Clock = std::chrono::steady_clock;

// Polishing keeps entries above this fraction of the largest magnitude.
constexpr double kPolishRelTol = 1e-6;

double real_inner(std::span<const Complex> a, std::span<const Complex> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return acc;
}

}  // namespace

double concentration_measure(std::span<const Complex> u) {
  double acc = 0.0;
  for (const auto& z : u) acc += std::abs(z);
  return acc;
}

double concentration_measure(const Spectrum& u) { return concentration_measure(u.coeffs()); }

void GradientParams::validate() const {
  if (delta_min && !(*delta_min > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta_min must be > 0");
  if (delta_init && delta_min && !(*delta_init > *delta_min)) {
    throw Error(ErrorCode::InvalidArgument, "delta_init must exceed delta_min");
  }
  if (delta_init && !(*delta_init > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta_init must be > 0");
  if (!(shrink_factor > 1.0)) throw Error(ErrorCode::InvalidArgument, "shrink_factor must be > 1");
  if (inner_max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "inner_max_iterations must be >= 1");
  if (oscillation_window == 0) throw Error(ErrorCode::InvalidArgument, "oscillation_window must be >= 1");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
}

GradientRecovery adaptive_gradient(const Measurements& y, std::size_t length,
                                   const GradientParams& params) {
  params.validate();
  if (y.mask.length() != length || y.values.size() != y.mask.count()) {
    throw Error(ErrorCode::DimensionMismatch, "measurements do not match signal length");
  }
  if (!all_finite(y.values)) throw Error(ErrorCode::NonFinite, "measurements contain NaN/Inf");

  ComplexVector x(length);
  for (std::size_t m = 0; m < y.values.size(); ++m) x[y.mask.indices()[m]] = y.values[m];

  GradientRecovery out;
  out.initial_concentration = concentration_measure(dft(TimeSignal(x)));
  const std::vector<std::size_t> missing = y.mask.missing();
  const double scale = norm_inf(y.values);
  if (missing.empty() || scale == 0.0) {
    out.signal = TimeSignal(std::move(x));
    return out;
  }

  const double delta_init = params.delta_init.value_or(scale);
  const double delta_min = params.delta_min.value_or(delta_init * 1e-5);
  if (!(delta_init > delta_min)) throw Error(ErrorCode::InvalidArgument, "delta_init must exceed delta_min");

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(length));
  ComplexVector twiddle(length);
  for (std::size_t t = 0; t < length; ++t) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(length);
    twiddle[t] = Complex(std::cos(angle), std::sin(angle)) * inv_sqrt_n;
  }
  const double reversal_cos = std::cos(params.oscillation_angle_deg * std::numbers::pi / 180.0);

  ComplexVector diffs(missing.size());
  ComplexVector prev(missing.size());
  double eta_prev_level = out.initial_concentration;

  for (double delta = delta_init; delta >= delta_min; delta /= params.shrink_factor) {
    const ComplexVector level_start = x;
    bool have_prev = false;
    std::size_t reversals = 0;
    for (std::size_t sweep = 0; sweep < params.inner_max_iterations; ++sweep) {
      const Spectrum spectrum = dft(TimeSignal(x));
      if (params.parallel) {
        kernels::concentration_differences_parallel(spectrum.coeffs(), twiddle, missing, delta, diffs);
      } else {
        kernels::concentration_differences_serial(spectrum.coeffs(), twiddle, missing, delta, diffs);
      }
      for (auto& g : diffs) g *= inv_sqrt_n;
      for (std::size_t i = 0; i < missing.size(); ++i) x[missing[i]] -= params.step * diffs[i];
      ++out.sweeps;

      const double gn = norm2(diffs);
      if (gn == 0.0) break;
      if (have_prev) {
        const double cos_angle = real_inner(prev, diffs) / (norm2(prev) * gn);
        reversals = cos_angle < reversal_cos ? reversals + 1 : 0;
      }
      if (reversals + 1 >= params.oscillation_window) break;
      prev = diffs;
      have_prev = true;
    }
    double eta = concentration_measure(dft(TimeSignal(x)));
    if (eta > eta_prev_level) {
      x = level_start;
      eta = eta_prev_level;
    }
    out.level_concentration.push_back(eta);
    eta_prev_level = eta;
  }
  out.signal = TimeSignal(std::move(x));
  return out;
}

RecoveryResult basis_pursuit_eq(const Dictionary& d, const Measurements& y,
                                const LpSolverParams& params, BasisPursuitReport* report) {
  const auto start = Clock::now();
  params.validate();
  check_consistent(d, y);
  if (!all_finite(y.values)) throw Error(ErrorCode::NonFinite, "measurements contain NaN/Inf");
  const std::size_t m = d.rows();
  const std::size_t n = d.cols();
  if (m > n) throw Error(ErrorCode::DimensionMismatch, "basis pursuit needs M <= N");

  // [G, −G] with G = [Re A; Im A].
  RealMatrix lp_a(2 * m, 2 * n);
  std::vector<double> lp_b(2 * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = d.atoms(r, k);
      lp_a(r, k) = a.real();
      lp_a(r, n + k) = -a.real();
      lp_a(m + r, k) = a.imag();
      lp_a(m + r, n + k) = -a.imag();
    }
    lp_b[r] = y.values[r].real();
    lp_b[m + r] = y.values[r].imag();
  }
  const std::vector<double> lp_c(2 * n, 1.0);
  LpSolution lp = lp_primal_dual_solve(lp_c, lp_a, lp_b, params);
  if (lp.status == LpStatus::Infeasible) {
    throw Error(ErrorCode::Infeasible,
                "no real coefficient vector reproduces the measurements (complex amplitudes?)");
  }
  if (lp.status == LpStatus::Unbounded) {
    throw Error(ErrorCode::Unbounded, "basis pursuit LP reported unbounded");
  }

  ComplexVector u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = lp.primal[k] - lp.primal[n + k];
  const double y_scale = 1.0 + norm2(y.values);

  bool polished = false;
  const double peak = norm_inf(u);
  if (peak > 0.0) {
    std::vector<std::size_t> support = support_of(u, kPolishRelTol * peak);
    if (!support.empty() && support.size() <= 2 * m) {
      // Real least squares on the support: rows [Re A_S; Im A_S].
      std::vector<Complex> entries(2 * m * support.size());
      ComplexVector rhs(2 * m);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < support.size(); ++j) {
          const Complex a = d.atoms(r, support[j]);
          entries[r * support.size() + j] = a.real();
          entries[(m + r) * support.size() + j] = a.imag();
        }
        rhs[r] = y.values[r].real();
        rhs[m + r] = y.values[r].imag();
      }
      try {
        const ComplexVector sol =
            least_squares_solve(ComplexMatrix(2 * m, support.size(), std::move(entries)), rhs);
        ComplexVector candidate(n);
        for (std::size_t j = 0; j < support.size(); ++j) candidate[support[j]] = sol[j].real();
        const double violation = norm2(subtract(d.atoms.multiply(candidate), y.values));
        const double l1_old = concentration_measure(u);
        const double l1_new = concentration_measure(candidate);
        if (violation <= params.feasibility_tol * y_scale &&
            l1_new <= l1_old + params.duality_gap_tol * (1.0 + l1_old)) {
          u = std::move(candidate);
          polished = true;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RankDeficient) throw;
      }
    }
  }

  const ComplexVector residual = subtract(y.values, d.atoms.multiply(u));
  RecoveryResult out;
  out.coeffs = d.to_spectrum_scale(u);
  out.support = support_of(u, 0.0);
  out.residual_norm = norm2(residual);
  out.iterations = lp.iterations;
  out.status = lp.status == LpStatus::Optimal ? ErrorCode::Ok : ErrorCode::MaxIterations;
  if (report) {
    report->l1_norm = concentration_measure(u);
    report->constraint_violation = out.residual_norm;
    report->polished = polished;
    report->lp = std::move(lp);
  }
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return out;
}

}  // namespace csr
