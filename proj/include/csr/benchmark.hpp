#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csr/convex.hpp"
#include "csr/error.hpp"
#include "csr/pursuit.hpp"
#include "csr/signal.hpp"
#include "csr/thresholding.hpp"

namespace csr {

enum class Algorithm { Omp, Ols, Gp, AdaptiveGradient, L1Eq, IhtTopK, IhtLambda };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

struct GreedyConfig {
  // residual_tol = residual_tol_rel · ‖y‖₂; ends atom selection.
  double residual_tol_rel = 1e-6;
  std::size_t max_iterations = 500;
  GradientPursuitOptions gp;
};

struct IhtConfig {
  std::optional<double> step;
  std::size_t max_iterations = 500;
  double convergence_tol = 1e-8;
  std::optional<std::size_t> top_k;     // unset: the sparsity
  bool keep_measurement_count = false;  // TopK with K = M instead
  double lambda_rel = 0.1;              // λ = (lambda_rel · max|Aᴴy|)²
};

struct ExperimentConfig {
  MultitoneSpec signal;
  std::vector<std::size_t> m_values;
  std::size_t trials_per_m = 1;
  std::uint64_t base_seed = 0;
  std::vector<Algorithm> algorithms;
  // K for greedy stopping and TopK; unset: number of signal components.
  std::optional<std::size_t> sparsity;
  GreedyConfig greedy;
  GradientParams gradient;
  LpSolverParams lp;
  IhtConfig iht;
  std::size_t timing_repeats = 5;
  // A bin counts as detected when |u_k| > support_threshold_rel · max|u|.
  double support_threshold_rel = 1e-4;
  // Worker threads for independent (M, trial) cells; 0 = OpenMP default.
  std::size_t jobs = 1;

  void validate() const;
};

struct BenchmarkRecord {
  std::string algorithm;
  std::size_t m = 0;
  std::size_t trial = 0;
  double mse = 0.0;  // +inf when the run failed
  bool support_exact = false;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  std::int64_t elapsed_us = 0;
  std::string status = "ok";

  bool same_outcome(const BenchmarkRecord& o) const;  // equality ignoring elapsed_us
};

// (1/N) Σ |x[n] − x̂[n]|²
double mse(const TimeSignal& x, const TimeSignal& x_hat);

bool support_match(std::span<const std::size_t> truth, const RecoveryResult& result,
                   double threshold);

// Seed for one (M, trial) cell; independent of execution order.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, std::size_t trial);

// Runs one algorithm on one cell with the config's parameters. The
// dictionary must be column-normalized.
RecoveryResult run_algorithm(Algorithm a, const ExperimentConfig& cfg, const Dictionary& d,
                             const Measurements& y);

// Every configured algorithm on every (M, trial) cell. All algorithms in a
// cell share one mask. Records are sorted by (algorithm name, M, trial).
std::vector<BenchmarkRecord> run_sweep(const ExperimentConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "algorithm,M,trial,mse,support_exact,residual_norm,iterations,elapsed_us,status";

void emit_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out);
void emit_csv(const std::vector<BenchmarkRecord>& records, const std::string& path);
std::vector<BenchmarkRecord> read_csv(std::istream& in);

// Median MSE per (algorithm, M) over finite records, in record order.
struct CurvePoint {
  std::size_t m = 0;
  double median_mse = 0.0;
};
struct Curve {
  std::string algorithm;
  std::vector<CurvePoint> points;
};
std::vector<Curve> median_curves(const std::vector<BenchmarkRecord>& records);

// gnuplot script with the curve data inlined as named blocks: median MSE
// against M, one series per algorithm, logarithmic MSE axis.
void emit_plot_script(const std::vector<BenchmarkRecord>& records, std::ostream& out,
                      const std::string& image_name = "mse_vs_m.png");
void emit_plot_script(const std::vector<BenchmarkRecord>& records, const std::string& path,
                      const std::string& image_name = "mse_vs_m.png");

// Config files are JSON; see configs/README.md for the schema.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path_or_name);
// Accepts a bare signal block or a document with a "signal" member.
MultitoneSpec parse_signal_spec(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& cfg);
// The bundled five-tone sweep: M = 20..100 step 10, 50 trials, six algorithms,
// one timing run per cell, all cores.
ExperimentConfig reference_experiment_config();

}  // namespace csr
