#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "csr/benchmark.hpp"
#include "csr/sensing.hpp"

namespace csr::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "paper" names the built-in five-tone signal; anything else is a JSON file.
MultitoneSpec resolve_spec(const std::string& spec, std::optional<std::size_t> n) {
  if (spec == "paper") return reference_multitone(n.value_or(512));
  MultitoneSpec s = parse_signal_spec(read_file(spec));
  if (n && *n != s.length) {
    throw UsageError("--n " + std::to_string(*n) + " conflicts with spec length " +
                     std::to_string(s.length));
  }
  return s;
}

std::vector<Algorithm> parse_algorithm_list(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto a = parse_algorithm(name);
    if (!a) throw UsageError("unknown algorithm '" + name + "'");
    out.push_back(*a);
  }
  if (out.empty()) throw UsageError("empty --algorithm list");
  return out;
}

std::string format_set(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

struct Options {
  std::string config;
  std::string algorithm;
  std::optional<std::size_t> n, m, k, jobs, trials, repeats;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string spec;
  std::string signal;
};

int cmd_generate(const Options& o, std::ostream& out) {
  const MultitoneSpec spec = resolve_spec(o.spec.empty() ? "paper" : o.spec, o.n);
  const TimeSignal x = generate_multitone(spec);
  if (o.out.empty()) {
    write_signal_csv(out, x);
  } else {
    write_signal_csv(o.out, x);
    out << "wrote " << spec.length << " samples to " << o.out << '\n';
  }
  return kOk;
}

int cmd_recover(const Options& o, std::ostream& out) {
  if (!o.m) throw UsageError("recover needs --m");
  const auto alg = parse_algorithm(o.algorithm.empty() ? "omp" : o.algorithm);
  if (!alg) throw UsageError("unknown algorithm '" + o.algorithm + "'");

  ExperimentConfig cfg = o.config.empty() ? reference_experiment_config() : load_config(o.config);
  std::optional<TimeSignal> truth;
  TimeSignal x;
  if (o.signal.empty()) {
    cfg.signal = resolve_spec(o.spec.empty() ? "paper" : o.spec, o.n);
    truth = generate_multitone(cfg.signal);
    x = *truth;
  } else {
    x = read_signal_csv(o.signal);
    if (o.n && *o.n != x.size()) throw UsageError("--n conflicts with the signal file length");
    cfg.signal = MultitoneSpec{x.size(), {}};
    const bool needs_k = *alg != Algorithm::AdaptiveGradient && *alg != Algorithm::L1Eq &&
                         *alg != Algorithm::IhtLambda;
    if (needs_k && !o.k) throw UsageError("recovering from --signal with this algorithm needs --k");
  }
  if (o.k) cfg.sparsity = *o.k;
  const std::size_t n = x.size();
  const std::uint64_t seed = o.seed.value_or(0);

  const SampleMask mask = draw_mask(n, *o.m, seed);
  const Measurements y = sample(x, mask);
  const Dictionary d = build_dictionary(n, mask, true);
  const RecoveryResult r = run_algorithm(*alg, cfg, d, y);

  const double thr = cfg.support_threshold_rel * norm_inf(r.coeffs);
  const auto support = support_of(std::span<const Complex>(r.coeffs), thr);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  out << "algorithm: " << algorithm_name(*alg) << '\n';
  out << "N: " << n << "  M: " << *o.m << "  seed: " << seed << '\n';
  out << "status: " << error_name(r.status) << '\n';
  out << "support: " << format_set(support) << '\n';
  out << "coefficients (bin: dft coefficient | tone amplitude):\n";
  out << std::setprecision(10);
  for (auto k : support) {
    const Complex u = r.coeffs[k];
    out << "  " << k << ": " << u.real() << (u.imag() < 0 ? " - " : " + ") << std::abs(u.imag())
        << "i | " << std::abs(u) * inv_sqrt_n << '\n';
  }
  out << "residual_norm: " << r.residual_norm << '\n';
  out << "iterations: " << r.iterations << '\n';
  if (truth) out << "mse: " << mse(*truth, idft(Spectrum(r.coeffs))) << '\n';
  out << "elapsed_us: " << std::chrono::duration_cast<std::chrono::microseconds>(r.elapsed).count()
      << '\n';
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  ExperimentConfig cfg = load_config(o.config.empty() ? "paper_experiment" : o.config);
  if (!o.spec.empty()) cfg.signal = resolve_spec(o.spec, o.n);
  else if (o.n) cfg.signal.length = *o.n;
  if (!o.algorithm.empty()) cfg.algorithms = parse_algorithm_list(o.algorithm);
  if (o.m) cfg.m_values = {*o.m};
  if (o.k) cfg.sparsity = *o.k;
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.trials) cfg.trials_per_m = *o.trials;
  if (o.repeats) cfg.timing_repeats = *o.repeats;

  namespace fs = std::filesystem;
  const fs::path dir(o.out.empty() ? "." : o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  const auto t0 = std::chrono::steady_clock::now();
  const auto records = run_sweep(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path csv = dir / "records.csv";
  const fs::path plot = dir / "mse_vs_m.gp";
  emit_csv(records, csv.string());
  emit_plot_script(records, plot.string());
  out << records.size() << " records in " << std::fixed << std::setprecision(1) << secs << " s\n";
  out << "csv: " << csv.string() << '\n';
  out << "plot: " << plot.string() << '\n';
  return kOk;
}

int cmd_coherence(const Options& o, std::ostream& out) {
  if (!o.n || !o.m) throw UsageError("coherence needs --n and --m");
  const SampleMask mask = draw_mask(*o.n, *o.m, o.seed.value_or(0));
  const Dictionary d = build_dictionary(*o.n, mask, true);
  out << std::setprecision(12) << mutual_coherence(d) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse multitone recovery from random time samples", "csrecover"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a multitone signal as CSV");
  gen->add_option("--spec", o.spec, "'paper' or a JSON signal file (default paper)");
  gen->add_option("--n", o.n, "Signal length for the built-in signal");
  gen->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* rec = app.add_subcommand("recover", "Recover one signal from M random samples");
  rec->add_option("--algorithm", o.algorithm, "omp, ols, gp, adaptive_gradient, l1eq, iht_topk, iht_lambda");
  rec->add_option("--spec", o.spec, "'paper' or a JSON signal file (default paper)");
  rec->add_option("--signal", o.signal, "Signal CSV (no ground-truth MSE)")->excludes("--spec");
  rec->add_option("--n", o.n, "Signal length");
  rec->add_option("--m", o.m, "Number of samples")->required();
  rec->add_option("--k", o.k, "Sparsity for greedy stopping and TopK");
  rec->add_option("--seed", o.seed, "Mask seed");
  rec->add_option("--config", o.config, "Config supplying algorithm parameters");

  auto* sw = app.add_subcommand("sweep", "Run an experiment sweep; writes records.csv and mse_vs_m.gp");
  sw->add_option("--config", o.config, "Config file or bundled name (default paper_experiment)");
  sw->add_option("--out", o.out, "Output directory (default .)");
  sw->add_option("--jobs", o.jobs, "Worker threads for independent cells; 0 = all");
  sw->add_option("--algorithm", o.algorithm, "Comma-separated algorithm list");
  sw->add_option("--spec", o.spec, "Override the signal");
  sw->add_option("--n", o.n, "Override the signal length");
  sw->add_option("--m", o.m, "Run a single M");
  sw->add_option("--k", o.k, "Sparsity override");
  sw->add_option("--seed", o.seed, "Base seed override");
  sw->add_option("--trials", o.trials, "Trials per M override");
  sw->add_option("--repeats", o.repeats, "Timing repeats override");

  auto* coh = app.add_subcommand("coherence", "Mutual coherence of a random partial-DFT dictionary");
  coh->add_option("--n", o.n, "Signal length")->required();
  coh->add_option("--m", o.m, "Number of samples")->required();
  coh->add_option("--seed", o.seed, "Mask seed");

  if (args.empty()) {
    err << app.help();
    return kUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, out);
    if (rec->parsed()) return cmd_recover(o, out);
    if (sw->parsed()) return cmd_sweep(o, out);
    return cmd_coherence(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace csr::cli
