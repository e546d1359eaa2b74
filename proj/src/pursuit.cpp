#include "csr/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csr/kernels.hpp"

namespace csr {

namespace {

using Clock = std::chrono::steady_clock;

// Common bookkeeping for the three greedy loops.
struct GreedyState {
  std::vector<std::size_t> support;
  std::vector<bool> in_support;
  ComplexVector coeffs;  // dictionary scale, length N
  ComplexVector residual;
  double residual_norm = 0.0;
  std::size_t iteration = 0;

  GreedyState(std::size_t n, const ComplexVector& y)
      : in_support(n, false), coeffs(n), residual(y), residual_norm(norm2(y)) {}

  void add(std::size_t atom) {
    support.push_back(atom);
    in_support[atom] = true;
  }

  void notify(const IterationObserver& observer) const {
    if (observer) observer(IterationView{iteration, support, coeffs, residual});
  }
};

void validate_inputs(const Dictionary& d, const Measurements& y, const StoppingRule& stop) {
  stop.validate();
  check_consistent(d, y);
  if (!all_finite(y.values)) throw Error(ErrorCode::NonFinite, "measurements contain NaN/Inf");
}

// True when atom selection should end.
bool selection_done(const GreedyState& s, const StoppingRule& stop, std::size_t rows,
                    std::size_t cols) {
  if (stop.residual_tol && s.residual_norm <= *stop.residual_tol) return true;
  if (stop.max_atoms && s.support.size() >= *stop.max_atoms) return true;
  if (s.support.size() >= std::min(rows, cols)) return true;
  return s.residual_norm == 0.0;
}

RecoveryResult finish(const Dictionary& d, const GreedyState& s, Clock::time_point start,
                      ErrorCode status = ErrorCode::Ok) {
  RecoveryResult out;
  out.coeffs = d.to_spectrum_scale(s.coeffs);
  out.support = s.support;
  std::sort(out.support.begin(), out.support.end());
  out.residual_norm = s.residual_norm;
  out.iterations = s.iteration;
  out.status = status;
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return out;
}

// Least-squares refit on the current support; updates coefficients and residual.
void refit(const Dictionary& d, const Measurements& y, GreedyState& s) {
  const ComplexMatrix sub = d.atoms.select_columns(s.support);
  const ComplexVector sol = least_squares_solve(sub, y.values);
  std::fill(s.coeffs.begin(), s.coeffs.end(), Complex{});
  for (std::size_t j = 0; j < s.support.size(); ++j) s.coeffs[s.support[j]] = sol[j];
  s.residual = subtract(y.values, sub.multiply(sol));
  s.residual_norm = norm2(s.residual);
}

ComplexVector correlate(const Dictionary& d, const ComplexVector& r) {
  ComplexVector g(d.cols());
  kernels::adjoint_multiply_parallel(d.atoms, r, g);
  return g;
}

}  // namespace

void StoppingRule::validate() const {
  if (!max_atoms && !residual_tol) {
    throw Error(ErrorCode::InvalidArgument, "stopping rule needs max_atoms or residual_tol");
  }
  if (max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (residual_tol && !(*residual_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "residual_tol must be >= 0");
  }
}

std::size_t select_atom(std::span<const Complex> g, const std::vector<bool>& forbidden) {
  if (forbidden.size() != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "forbidden mask length != correlation length");
  }
  std::size_t best = g.size();
  double best_mag = -1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (forbidden[i]) continue;
    const double m = std::abs(g[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  if (best == g.size()) throw Error(ErrorCode::AllForbidden, "every atom is already selected");
  return best;
}

std::size_t select_atom(std::span<const Complex> g, std::span<const std::size_t> forbidden) {
  std::vector<bool> mask(g.size(), false);
  for (auto i : forbidden) {
    if (i >= g.size()) throw Error(ErrorCode::DimensionMismatch, "forbidden index out of range");
    mask[i] = true;
  }
  return select_atom(g, mask);
}

RecoveryResult omp(const Dictionary& d, const Measurements& y, const StoppingRule& stop,
                   const IterationObserver& observer) {
  const auto start = Clock::now();
  validate_inputs(d, y, stop);
  GreedyState s(d.cols(), y.values);

  while (s.iteration < stop.max_iterations && !selection_done(s, stop, d.rows(), d.cols())) {
    const ComplexVector g = correlate(d, s.residual);
    const std::size_t atom = select_atom(g, s.in_support);
    if (std::abs(g[atom]) == 0.0) break;
    s.add(atom);
    refit(d, y, s);
    ++s.iteration;
    s.notify(observer);
  }
  return finish(d, s, start);
}

RecoveryResult ols(const Dictionary& d, const Measurements& y, const StoppingRule& stop,
                   const IterationObserver& observer) {
  const auto start = Clock::now();
  validate_inputs(d, y, stop);
  const std::size_t rows = d.rows();
  const std::size_t cols = d.cols();
  GreedyState s(cols, y.values);

  // proj[i]: atom i minus its projection onto span(Γ); basis: orthonormal span(Γ).
  std::vector<ComplexVector> proj(cols);
  std::vector<double> atom_norm(cols);
  for (std::size_t i = 0; i < cols; ++i) {
    proj[i] = d.atoms.column(i);
    atom_norm[i] = norm2(proj[i]);
  }
  std::vector<ComplexVector> basis;

  while (s.iteration < stop.max_iterations && !selection_done(s, stop, rows, cols)) {
    // Adding candidate i lowers ‖r‖² by |⟨p_i, r⟩|² / ‖p_i‖²; maximize that.
    std::size_t best = cols;
    double best_gain = -1.0;
    for (std::size_t i = 0; i < cols; ++i) {
      if (s.in_support[i]) continue;
      const double pn2 = norm2_sq(proj[i]);
      if (!(std::sqrt(pn2) > 1e-12 * atom_norm[i])) continue;  // already in span(Γ)
      const double gain = std::norm(inner(proj[i], s.residual)) / pn2;
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == cols) break;

    ComplexVector q = proj[best];
    for (const auto& b : basis) {
      const Complex c = inner(b, q);
      for (std::size_t r = 0; r < rows; ++r) q[r] -= c * b[r];
    }
    const double qn = norm2(q);
    for (auto& z : q) z /= qn;

    s.add(best);
    for (std::size_t i = 0; i < cols; ++i) {
      if (s.in_support[i]) continue;
      const Complex c = inner(q, proj[i]);
      for (std::size_t r = 0; r < rows; ++r) proj[i][r] -= c * q[r];
    }
    basis.push_back(std::move(q));

    refit(d, y, s);
    ++s.iteration;
    s.notify(observer);
  }
  return finish(d, s, start);
}

RecoveryResult gradient_pursuit(const Dictionary& d, const Measurements& y,
                                const StoppingRule& stop, const GradientPursuitOptions& options,
                                const IterationObserver& observer) {
  const auto start = Clock::now();
  validate_inputs(d, y, stop);
  const std::size_t rows = d.rows();
  GreedyState s(d.cols(), y.values);
  const double y_norm = s.residual_norm;
  if (y_norm == 0.0) return finish(d, s, start);
  const double stagnation = options.stagnation_tol * y_norm;

  bool selecting = true;
  while (s.iteration < stop.max_iterations) {
    if (selecting && selection_done(s, stop, rows, d.cols())) {
      selecting = false;
      if (!options.refine_on_final_support || s.support.empty() || s.residual_norm == 0.0) break;
    }

    // Direction d_Γ = A_Γᴴ r on the support.
    ComplexVector dir(s.support.size() + (selecting ? 1 : 0));
    if (selecting) {
      const ComplexVector g = correlate(d, s.residual);
      const std::size_t atom = select_atom(g, s.in_support);
      if (std::abs(g[atom]) == 0.0) break;
      s.add(atom);
      for (std::size_t j = 0; j < s.support.size(); ++j) dir[j] = g[s.support[j]];
    } else {
      for (std::size_t j = 0; j < s.support.size(); ++j) {
        const std::size_t k = s.support[j];
        Complex acc = 0.0;
        for (std::size_t r = 0; r < rows; ++r) acc += std::conj(d.atoms(r, k)) * s.residual[r];
        dir[j] = acc;
      }
    }
    if (norm2(dir) == 0.0) break;  // residual already orthogonal to the support

    ComplexVector c(rows);
    for (std::size_t j = 0; j < s.support.size(); ++j) {
      const std::size_t k = s.support[j];
      for (std::size_t r = 0; r < rows; ++r) c[r] += d.atoms(r, k) * dir[j];
    }
    const double c_norm_sq = norm2_sq(c);
    if (c_norm_sq == 0.0) return finish(d, s, start, ErrorCode::ZeroDirection);

    const Complex proj = inner(c, s.residual);
    const Complex step = proj / c_norm_sq;
    const double decrease = std::norm(proj) / c_norm_sq;

    for (std::size_t j = 0; j < s.support.size(); ++j) s.coeffs[s.support[j]] += step * dir[j];
    if (selecting) {
      for (std::size_t r = 0; r < rows; ++r) s.residual[r] -= step * c[r];
    } else {
      // Fresh residual on the fixed support so the recursion cannot drift
      // from y − A_Γ l_Γ while polishing.
      s.residual = y.values;
      for (const std::size_t k : s.support) {
        for (std::size_t r = 0; r < rows; ++r) s.residual[r] -= d.atoms(r, k) * s.coeffs[k];
      }
    }
    s.residual_norm = norm2(s.residual);
    ++s.iteration;
    s.notify(observer);

    if (!selecting && decrease <= stagnation * stagnation) break;
  }
  return finish(d, s, start);
}

}  // namespace csr
