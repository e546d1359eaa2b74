#include "csr/benchmark.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <omp.h>

#include "csr/rng.hpp"

namespace csr {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kNames{{
    {Algorithm::Omp, "omp"},
    {Algorithm::Ols, "ols"},
    {Algorithm::Gp, "gp"},
    {Algorithm::AdaptiveGradient, "adaptive_gradient"},
    {Algorithm::L1Eq, "l1eq"},
    {Algorithm::IhtTopK, "iht_topk"},
    {Algorithm::IhtLambda, "iht_lambda"},
}};

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

RecoveryResult from_signal(const TimeSignal& x, const Measurements& y, std::size_t sweeps,
                           double support_threshold_rel) {
  RecoveryResult out;
  out.coeffs = dft(x).coeffs();
  out.support = support_of(out.coeffs, support_threshold_rel * norm_inf(out.coeffs));
  double r2 = 0.0;
  for (std::size_t m = 0; m < y.values.size(); ++m) {
    r2 += std::norm(x.samples()[y.mask.indices()[m]] - y.values[m]);
  }
  out.residual_norm = std::sqrt(r2);
  out.iterations = sweeps;
  return out;
}

std::int64_t median_us(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  for (const auto& [alg, name] : kNames) {
    if (alg == a) return name;
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kNames) {
    if (n == name) return alg;
  }
  return std::nullopt;
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = [] {
    std::vector<Algorithm> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return all;
}

void ExperimentConfig::validate() const {
  signal.validate();
  if (m_values.empty()) throw Error(ErrorCode::InvalidArgument, "m_values is empty");
  for (auto m : m_values) {
    if (m == 0 || m > signal.length) {
      throw Error(ErrorCode::MTooLarge, "M = " + std::to_string(m) + " outside [1, N]");
    }
  }
  if (trials_per_m == 0) throw Error(ErrorCode::InvalidArgument, "trials_per_m must be >= 1");
  if (algorithms.empty()) throw Error(ErrorCode::InvalidArgument, "no algorithms configured");
  if (sparsity && *sparsity == 0) throw Error(ErrorCode::InvalidArgument, "sparsity must be >= 1");
  if (timing_repeats == 0) throw Error(ErrorCode::InvalidArgument, "timing_repeats must be >= 1");
  if (!(support_threshold_rel >= 0.0)) throw Error(ErrorCode::InvalidArgument, "support_threshold_rel < 0");
  gradient.validate();
  lp.validate();
}

bool BenchmarkRecord::same_outcome(const BenchmarkRecord& o) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  return algorithm == o.algorithm && m == o.m && trial == o.trial && same(mse, o.mse) &&
         support_exact == o.support_exact && same(residual_norm, o.residual_norm) &&
         iterations == o.iterations && status == o.status;
}

double mse(const TimeSignal& x, const TimeSignal& x_hat) {
  if (x.size() != x_hat.size()) {
    throw Error(ErrorCode::LengthMismatch, "mse: lengths " + std::to_string(x.size()) + " and " +
                                               std::to_string(x_hat.size()));
  }
  double acc = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) acc += std::norm(x.samples()[n] - x_hat.samples()[n]);
  return acc / static_cast<double>(x.size());
}

bool support_match(std::span<const std::size_t> truth, const RecoveryResult& result, double threshold) {
  std::vector<std::size_t> t(truth.begin(), truth.end());
  std::sort(t.begin(), t.end());
  return support_of(result.coeffs, threshold) == t;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, std::size_t trial) {
  return mix_seed(base_seed, m, trial);
}

RecoveryResult run_algorithm(Algorithm a, const ExperimentConfig& cfg, const Dictionary& d,
                             const Measurements& y) {
  const std::size_t sparsity = cfg.sparsity.value_or(cfg.signal.components.size());
  StoppingRule stop;
  stop.max_atoms = std::max<std::size_t>(sparsity, 1);
  stop.residual_tol = cfg.greedy.residual_tol_rel * norm2(y.values);
  stop.max_iterations = cfg.greedy.max_iterations;

  IhtParams iht_params;
  iht_params.step = cfg.iht.step;
  iht_params.max_iterations = cfg.iht.max_iterations;
  iht_params.convergence_tol = cfg.iht.convergence_tol;

  switch (a) {
    case Algorithm::Omp: return omp(d, y, stop);
    case Algorithm::Ols: return ols(d, y, stop);
    case Algorithm::Gp: return gradient_pursuit(d, y, stop, cfg.greedy.gp);
    case Algorithm::AdaptiveGradient: {
      const auto start = std::chrono::steady_clock::now();
      const GradientRecovery rec = adaptive_gradient(y, d.cols(), cfg.gradient);
      RecoveryResult out = from_signal(rec.signal, y, rec.sweeps, cfg.support_threshold_rel);
      out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
      return out;
    }
    case Algorithm::L1Eq: return basis_pursuit_eq(d, y, cfg.lp);
    case Algorithm::IhtTopK: {
      std::size_t k = cfg.iht.top_k.value_or(std::max<std::size_t>(sparsity, 1));
      if (cfg.iht.keep_measurement_count) k = y.values.size();
      iht_params.variant = TopK{k};
      return iht(d, y, iht_params);
    }
    case Algorithm::IhtLambda: {
      const ComplexVector g = d.atoms.adjoint_multiply(y.values);
      const double cut = cfg.iht.lambda_rel * norm_inf(g);
      iht_params.variant = LambdaThreshold{cut * cut};
      return iht(d, y, iht_params);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm");
}

std::vector<BenchmarkRecord> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const TimeSignal truth = generate_multitone(cfg.signal);
  const std::vector<std::size_t> truth_support = cfg.signal.sorted_bins();
  const std::size_t n = cfg.signal.length;

  struct Cell {
    std::size_t m, trial;
  };
  std::vector<Cell> cells;
  for (auto m : cfg.m_values) {
    for (std::size_t t = 0; t < cfg.trials_per_m; ++t) cells.push_back({m, t});
  }
  const std::size_t per_cell = cfg.algorithms.size();
  std::vector<BenchmarkRecord> records(cells.size() * per_cell);
  std::vector<std::exception_ptr> failures(cells.size());

  const int threads = cfg.jobs == 0 ? omp_get_max_threads() : static_cast<int>(cfg.jobs);
  const auto cell_count = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long ci = 0; ci < cell_count; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    try {
      const Cell cell = cells[c];
      const SampleMask mask = draw_mask(n, cell.m, trial_seed(cfg.base_seed, cell.m, cell.trial));
      const Measurements y = sample(truth, mask);
      const Dictionary d = build_dictionary(n, mask, true);

      for (std::size_t ai = 0; ai < per_cell; ++ai) {
        const Algorithm alg = cfg.algorithms[ai];
        BenchmarkRecord rec;
        rec.algorithm = std::string(algorithm_name(alg));
        rec.m = cell.m;
        rec.trial = cell.trial;
        try {
          std::vector<std::int64_t> times;
          std::optional<RecoveryResult> result;
          for (std::size_t rep = 0; rep < cfg.timing_repeats; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            RecoveryResult r = run_algorithm(alg, cfg, d, y);
            const auto t1 = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count());
            if (!result) result = std::move(r);
          }
          const double thr = cfg.support_threshold_rel * norm_inf(result->coeffs);
          rec.mse = mse(truth, idft(Spectrum(result->coeffs)));
          rec.support_exact = support_match(truth_support, *result, thr);
          rec.residual_norm = result->residual_norm;
          rec.iterations = result->iterations;
          rec.elapsed_us = median_us(std::move(times));
          rec.status = std::string(error_name(result->status));
        } catch (const Error& e) {
          rec.mse = std::numeric_limits<double>::infinity();
          rec.support_exact = false;
          rec.residual_norm = std::numeric_limits<double>::quiet_NaN();
          rec.iterations = 0;
          rec.elapsed_us = 0;
          rec.status = std::string(error_name(e.code()));
        }
        records[c * per_cell + ai] = std::move(rec);
      }
    } catch (...) {
      failures[c] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::sort(records.begin(), records.end(), [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.m != b.m) return a.m < b.m;
    return a.trial < b.trial;
  });
  return records;
}

void emit_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.algorithm << ',' << r.m << ',' << r.trial << ',';
    if (std::isfinite(r.mse)) out << format_double(r.mse);
    out << ',' << (r.support_exact ? 1 : 0) << ',';
    if (std::isfinite(r.residual_norm)) out << format_double(r.residual_norm);
    out << ',' << r.iterations << ',' << r.elapsed_us << ',' << r.status << '\n';
  }
}

void emit_csv(const std::vector<BenchmarkRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  emit_csv(records, out);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

std::vector<BenchmarkRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::Parse, "records CSV: missing or wrong header");
  }
  std::vector<BenchmarkRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 9) {
      throw Error(ErrorCode::Parse, "records CSV line " + std::to_string(line_no) + ": expected 9 fields");
    }
    try {
      BenchmarkRecord r;
      r.algorithm = f[0];
      r.m = std::stoull(f[1]);
      r.trial = std::stoull(f[2]);
      r.mse = f[3].empty() ? std::numeric_limits<double>::infinity() : std::stod(f[3]);
      if (f[4] != "0" && f[4] != "1") throw std::invalid_argument("support_exact");
      r.support_exact = f[4] == "1";
      r.residual_norm = f[5].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[5]);
      r.iterations = std::stoull(f[6]);
      r.elapsed_us = std::stoll(f[7]);
      r.status = f[8];
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "records CSV line " + std::to_string(line_no) + ": bad field");
    }
  }
  return out;
}

std::vector<Curve> median_curves(const std::vector<BenchmarkRecord>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, std::vector<double>>> groups;
  for (const auto& r : records) {
    if (!groups.contains(r.algorithm)) order.push_back(r.algorithm);
    auto& bucket = groups[r.algorithm][r.m];
    if (std::isfinite(r.mse)) bucket.push_back(r.mse);
  }
  std::vector<Curve> curves;
  for (const auto& name : order) {
    Curve curve{name, {}};
    for (auto& [m, values] : groups[name]) {
      if (values.empty()) continue;
      std::sort(values.begin(), values.end());
      const std::size_t k = values.size();
      const double med = k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
      curve.points.push_back({m, med});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void emit_plot_script(const std::vector<BenchmarkRecord>& records, std::ostream& out,
                      const std::string& image_name) {
  // Exact zeros cannot sit on a log axis; they are drawn at this floor.
  constexpr double kFloor = 1e-32;
  const auto curves = median_curves(records);
  out << "# Median MSE against the number of available samples.\n"
      << "# Render with: gnuplot <this file>\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output '" << image_name << "'\n"
      << "set title 'Median MSE vs available samples'\n"
      << "set xlabel 'M (available samples)'\n"
      << "set ylabel 'median MSE'\n"
      << "set logscale y\n"
      << "set format y '10^{%L}'\n"
      << "set grid\n"
      << "set key outside right\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    out << "$series" << i << " << EOD\n";
    out << "# " << curves[i].algorithm << "\n";
    for (const auto& p : curves[i].points) {
      out << p.m << ' ' << format_double(std::max(p.median_mse, kFloor)) << '\n';
    }
    out << "EOD\n";
  }
  if (curves.empty()) {
    out << "plot [0:1] NaN notitle\n";
    return;
  }
  out << "plot ";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i > 0) out << ", \\\n     ";
    out << "$series" << i << " using 1:2 with linespoints title '" << curves[i].algorithm << "'";
  }
  out << '\n';
}

void emit_plot_script(const std::vector<BenchmarkRecord>& records, const std::string& path,
                      const std::string& image_name) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  emit_plot_script(records, out, image_name);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

}  // namespace csr
