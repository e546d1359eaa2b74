#include "csr/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "csr/error.hpp"
#include "csr/kernels.hpp"

namespace csr {

namespace {

constexpr double kDualRegularization = 1e-12;  // relative to max diag of A D Aᵀ

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vec multiply(const RealMatrix& a, std::span<const double> x) {
  Vec out(a.rows, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) out[r] = dot(a.row(r), x);
  return out;
}

Vec multiply_transposed(const RealMatrix& a, std::span<const double> y) {
  Vec out(a.cols, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols; ++c) out[c] += row[c] * yr;
  }
  return out;
}

struct ReducedRows {
  std::vector<std::size_t> kept;
  bool consistent = true;
};

// Modified Gram-Schmidt over the rows of [A | b], carrying b along. A row
// whose A part vanishes against the earlier rows is dependent; its carried b
// must vanish too or the system is inconsistent.
ReducedRows reduce_rows(const RealMatrix& a, std::span<const double> b, double feas_tol) {
  ReducedRows out;
  std::vector<Vec> basis;
  Vec basis_rhs;
  const double b_scale = 1.0 + norm(b);
  for (std::size_t r = 0; r < a.rows; ++r) {
    Vec v(a.row(r).begin(), a.row(r).end());
    double beta = b[r];
    const double row_norm = norm(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const double coef = dot(basis[j], v);
        for (std::size_t c = 0; c < v.size(); ++c) v[c] -= coef * basis[j][c];
        beta -= coef * basis_rhs[j];
      }
    }
    const double vn = norm(v);
    if (row_norm == 0.0 || vn <= 1e-9 * row_norm) {
      if (std::abs(beta) > feas_tol * b_scale) out.consistent = false;
      continue;
    }
    for (auto& e : v) e /= vn;
    basis.push_back(std::move(v));
    basis_rhs.push_back(beta / vn);
    out.kept.push_back(r);
  }
  return out;
}

// In-place dense Cholesky (lower). Pivots that collapse relative to the
// largest diagonal are replaced by a huge value, which zeroes that component
// of the solution instead of failing.
void cholesky(RealMatrix& m) {
  const std::size_t n = m.rows;
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, m(i, i));
  const double tiny = std::max(max_diag, 1.0) * 1e-30;
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= m(j, k) * m(j, k);
    if (!(d > tiny)) d = 1e128;
    const double ljj = std::sqrt(d);
    m(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= m(i, k) * m(j, k);
      m(i, j) = v / ljj;
    }
  }
}

Vec cholesky_solve(const RealMatrix& l, Vec rhs) {
  const std::size_t n = l.rows;
  for (std::size_t i = 0; i < n; ++i) {
    double v = rhs[i];
    for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * rhs[k];
    rhs[i] = v / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= l(k, i) * rhs[k];
    rhs[i] = v / l(i, i);
  }
  return rhs;
}

// Largest α in (0, 1] with v + α·dv ≥ 0.
double max_step(std::span<const double> v, std::span<const double> dv) {
  double alpha = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

struct Direction {
  Vec dx, dlambda, ds;
};

// Solves the Newton system for complementarity target r_xs:
//   A Δx = −r_b,  AᵀΔλ + Δs = −r_c,  SΔx + XΔs = −r_xs
Direction newton_direction(const RealMatrix& a, const RealMatrix& chol, std::span<const double> x,
                           std::span<const double> s, std::span<const double> rb,
                           std::span<const double> rc, std::span<const double> rxs) {
  const std::size_t n = x.size();
  Vec t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = (rxs[i] - x[i] * rc[i]) / s[i];
  Vec rhs = multiply(a, t);
  for (std::size_t r = 0; r < rhs.size(); ++r) rhs[r] -= rb[r];
  Direction d;
  d.dlambda = cholesky_solve(chol, std::move(rhs));
  const Vec at_dl = multiply_transposed(a, d.dlambda);
  d.ds.resize(n);
  d.dx.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.ds[i] = -rc[i] - at_dl[i];
    d.dx[i] = (-rxs[i] - x[i] * d.ds[i]) / s[i];
  }
  return d;
}

}  // namespace

void LpSolverParams::validate() const {
  if (!(duality_gap_tol > 0.0) || !(feasibility_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "LP tolerances must be > 0");
  }
  if (max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "LP max_iterations must be >= 1");
}

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::MaxIterations: return "MaxIterations";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

LpSolution lp_primal_dual_solve(std::span<const double> c, const RealMatrix& a_eq,
                                std::span<const double> b_eq, const LpSolverParams& params) {
  params.validate();
  const std::size_t n = a_eq.cols;
  if (c.size() != n || b_eq.size() != a_eq.rows || a_eq.data.size() != a_eq.rows * a_eq.cols) {
    throw Error(ErrorCode::DimensionMismatch, "LP shapes disagree");
  }
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "LP has no variables");

  LpSolution sol;
  sol.dual.assign(a_eq.rows, 0.0);

  const ReducedRows reduced = reduce_rows(a_eq, b_eq, params.feasibility_tol);
  sol.rows_dropped = a_eq.rows - reduced.kept.size();
  if (!reduced.consistent) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  const std::size_t m = reduced.kept.size();
  RealMatrix a(m, n);
  Vec b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = a_eq.row(reduced.kept[i]);
    std::copy(row.begin(), row.end(), a.data.begin() + static_cast<std::ptrdiff_t>(i * n));
    b[i] = b_eq[reduced.kept[i]];
  }
  const Vec cv(c.begin(), c.end());
  const double b_scale = 1.0 + norm(b);
  const double c_scale = 1.0 + norm(cv);

  // Starting point: least-norm x and least-squares λ, shifted positive.
  Vec x(n), lambda(m, 0.0), s(cv);
  {
    RealMatrix aat;
    const Vec ones(n, 1.0);
    kernels::weighted_gram_parallel(a, ones, aat);
    cholesky(aat);
    const Vec w = cholesky_solve(aat, b);
    x = multiply_transposed(a, w);
    lambda = cholesky_solve(aat, multiply(a, cv));
    const Vec atl = multiply_transposed(a, lambda);
    for (std::size_t i = 0; i < n; ++i) s[i] = cv[i] - atl[i];

    const double dx = std::max(-1.5 * *std::min_element(x.begin(), x.end()), 0.0);
    const double ds = std::max(-1.5 * *std::min_element(s.begin(), s.end()), 0.0);
    for (auto& v : x) v += dx;
    for (auto& v : s) v += ds;
    const double xs = dot(x, s);
    double sum_x = 0.0, sum_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum_x += x[i];
      sum_s += s[i];
    }
    if (xs > 0.0 && sum_x > 0.0 && sum_s > 0.0) {
      const double dx2 = 0.5 * xs / sum_s;
      const double ds2 = 0.5 * xs / sum_x;
      for (auto& v : x) v += dx2;
      for (auto& v : s) v += ds2;
    }
    for (auto& v : x) v = std::max(v, 1e-4);
    for (auto& v : s) v = std::max(v, 1e-4);
  }

  RealMatrix normal;
  Vec rb(m), rc(n), d(n), rxs(n);
  const double divergence = 1e12;

  for (std::size_t iter = 0;; ++iter) {
    const Vec ax = multiply(a, x);
    const Vec atl = multiply_transposed(a, lambda);
    for (std::size_t r = 0; r < m; ++r) rb[r] = ax[r] - b[r];
    for (std::size_t i = 0; i < n; ++i) rc[i] = atl[i] + s[i] - cv[i];
    const double xs = dot(x, s);
    const double mu = xs / static_cast<double>(n);
    sol.primal_objective = dot(cv, x);
    sol.dual_objective = dot(b, lambda);
    sol.primal_residual = norm(rb);
    sol.dual_residual = norm(rc);
    sol.gap = std::max(std::abs(sol.primal_objective - sol.dual_objective), xs) /
              (1.0 + std::abs(sol.primal_objective));
    sol.iterations = iter;

    if (sol.primal_residual <= params.feasibility_tol * b_scale &&
        sol.dual_residual <= params.feasibility_tol * c_scale && sol.gap <= params.duality_gap_tol) {
      sol.status = LpStatus::Optimal;
      break;
    }
    if (norm_inf(x) > divergence * b_scale && sol.primal_objective < 0.0) {
      sol.status = LpStatus::Unbounded;
      break;
    }
    if (norm_inf(lambda) > divergence * c_scale && sol.dual_objective > 0.0) {
      sol.status = LpStatus::Infeasible;
      break;
    }
    if (iter >= params.max_iterations) {
      sol.status = LpStatus::MaxIterations;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] / s[i];
    kernels::weighted_gram_parallel(a, d, normal);
    // Near a degenerate optimum only a few x_i stay away from zero and
    // A D Aᵀ loses rank. A small diagonal shift keeps the factor usable; the
    // residuals are recomputed exactly each iteration, so it only perturbs
    // the step.
    double max_diag = 0.0;
    for (std::size_t r = 0; r < m; ++r) max_diag = std::max(max_diag, normal(r, r));
    for (std::size_t r = 0; r < m; ++r) normal(r, r) += kDualRegularization * max_diag;
    cholesky(normal);

    // Predictor (affine scaling).
    for (std::size_t i = 0; i < n; ++i) rxs[i] = x[i] * s[i];
    const Direction aff = newton_direction(a, normal, x, s, rb, rc, rxs);
    const double ap_aff = max_step(x, aff.dx);
    const double ad_aff = max_step(s, aff.ds);
    double mu_aff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mu_aff += (x[i] + ap_aff * aff.dx[i]) * (s[i] + ad_aff * aff.ds[i]);
    }
    mu_aff /= static_cast<double>(n);
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);

    // Corrector with centering.
    for (std::size_t i = 0; i < n; ++i) {
      rxs[i] = x[i] * s[i] + aff.dx[i] * aff.ds[i] - sigma * mu;
    }
    const Direction dir = newton_direction(a, normal, x, s, rb, rc, rxs);
    const double eta = std::max(0.9, 1.0 - mu);
    const double ap = std::min(1.0, eta * max_step(x, dir.dx));
    const double ad = std::min(1.0, eta * max_step(s, dir.ds));
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += ap * dir.dx[i];
      s[i] += ad * dir.ds[i];
    }
    for (std::size_t r = 0; r < m; ++r) lambda[r] += ad * dir.dlambda[r];
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::max(x[i], std::numeric_limits<double>::min());
      s[i] = std::max(s[i], std::numeric_limits<double>::min());
    }
  }

  sol.primal = x;
  sol.reduced_costs = s;
  for (std::size_t i = 0; i < m; ++i) sol.dual[reduced.kept[i]] = lambda[i];
  return sol;
}

}  // namespace csr
