#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csr/benchmark.hpp"

namespace csr {

namespace {

using nlohmann::json;

#ifndef CSR_CONFIG_DIR
#define CSR_CONFIG_DIR "configs"
#endif

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, "config: " + what); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) bad("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  try {
    dst = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& dst) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    dst.reset();
    return;
  }
  T v{};
  read(obj, key, v);
  dst = v;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

MultitoneSpec signal_from(const json& sig) {
  check_keys(sig, "signal", {"length", "components"});
  MultitoneSpec spec;
  read(sig, "length", spec.length);
  if (sig.contains("components")) {
    if (!sig.at("components").is_array()) bad("signal.components must be an array");
    for (const auto& c : sig.at("components")) {
      check_keys(c, "signal component", {"bin", "amplitude", "amplitude_imag"});
      Tone tone;
      double re = 0.0, im = 0.0;
      read(c, "bin", tone.bin);
      read(c, "amplitude", re);
      read(c, "amplitude_imag", im);
      tone.amplitude = Complex(re, im);
      spec.components.push_back(tone);
    }
  }
  return spec;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  const json root = parse_json(json_text);
  check_keys(root, "config",
             {"signal", "m_values", "trials_per_m", "base_seed", "algorithms", "timing_repeats",
              "support_threshold_rel", "jobs", "sparsity", "greedy", "adaptive_gradient", "l1eq", "iht"});

  ExperimentConfig cfg;
  if (!root.contains("signal")) bad("missing 'signal'");
  cfg.signal = signal_from(root.at("signal"));
  read(root, "m_values", cfg.m_values);
  read(root, "trials_per_m", cfg.trials_per_m);
  read(root, "base_seed", cfg.base_seed);
  read(root, "timing_repeats", cfg.timing_repeats);
  read(root, "support_threshold_rel", cfg.support_threshold_rel);
  read(root, "jobs", cfg.jobs);
  read_optional(root, "sparsity", cfg.sparsity);
  if (root.contains("algorithms")) {
    std::vector<std::string> names;
    read(root, "algorithms", names);
    for (const auto& name : names) {
      const auto a = parse_algorithm(name);
      if (!a) bad("unknown algorithm '" + name + "'");
      cfg.algorithms.push_back(*a);
    }
  }
  if (root.contains("greedy")) {
    const json& g = root.at("greedy");
    check_keys(g, "greedy", {"residual_tol_rel", "max_iterations", "gp_refine", "gp_stagnation_tol"});
    read(g, "residual_tol_rel", cfg.greedy.residual_tol_rel);
    read(g, "max_iterations", cfg.greedy.max_iterations);
    read(g, "gp_refine", cfg.greedy.gp.refine_on_final_support);
    read(g, "gp_stagnation_tol", cfg.greedy.gp.stagnation_tol);
  }
  if (root.contains("adaptive_gradient")) {
    const json& g = root.at("adaptive_gradient");
    check_keys(g, "adaptive_gradient",
               {"delta_init", "delta_min", "shrink_factor", "inner_max_iterations",
                "oscillation_window", "oscillation_angle_deg", "step"});
    read_optional(g, "delta_init", cfg.gradient.delta_init);
    read_optional(g, "delta_min", cfg.gradient.delta_min);
    read(g, "shrink_factor", cfg.gradient.shrink_factor);
    read(g, "inner_max_iterations", cfg.gradient.inner_max_iterations);
    read(g, "oscillation_window", cfg.gradient.oscillation_window);
    read(g, "oscillation_angle_deg", cfg.gradient.oscillation_angle_deg);
    read(g, "step", cfg.gradient.step);
  }
  if (root.contains("l1eq")) {
    const json& g = root.at("l1eq");
    check_keys(g, "l1eq", {"duality_gap_tol", "feasibility_tol", "max_iterations"});
    read(g, "duality_gap_tol", cfg.lp.duality_gap_tol);
    read(g, "feasibility_tol", cfg.lp.feasibility_tol);
    read(g, "max_iterations", cfg.lp.max_iterations);
  }
  if (root.contains("iht")) {
    const json& g = root.at("iht");
    check_keys(g, "iht",
               {"step", "max_iterations", "convergence_tol", "top_k", "keep_measurement_count",
                "lambda_rel"});
    read_optional(g, "step", cfg.iht.step);
    read(g, "max_iterations", cfg.iht.max_iterations);
    read(g, "convergence_tol", cfg.iht.convergence_tol);
    read_optional(g, "top_k", cfg.iht.top_k);
    read(g, "keep_measurement_count", cfg.iht.keep_measurement_count);
    read(g, "lambda_rel", cfg.iht.lambda_rel);
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json root;
  json comps = json::array();
  for (const auto& t : cfg.signal.components) {
    json c{{"bin", t.bin}, {"amplitude", t.amplitude.real()}};
    if (t.amplitude.imag() != 0.0) c["amplitude_imag"] = t.amplitude.imag();
    comps.push_back(c);
  }
  root["signal"] = {{"length", cfg.signal.length}, {"components", comps}};
  root["m_values"] = cfg.m_values;
  root["trials_per_m"] = cfg.trials_per_m;
  root["base_seed"] = cfg.base_seed;
  std::vector<std::string> names;
  for (auto a : cfg.algorithms) names.emplace_back(algorithm_name(a));
  root["algorithms"] = names;
  root["timing_repeats"] = cfg.timing_repeats;
  root["support_threshold_rel"] = cfg.support_threshold_rel;
  root["jobs"] = cfg.jobs;
  if (cfg.sparsity) root["sparsity"] = *cfg.sparsity;
  root["greedy"] = {{"residual_tol_rel", cfg.greedy.residual_tol_rel},
                    {"max_iterations", cfg.greedy.max_iterations},
                    {"gp_refine", cfg.greedy.gp.refine_on_final_support},
                    {"gp_stagnation_tol", cfg.greedy.gp.stagnation_tol}};
  root["adaptive_gradient"] = {{"delta_init", optional_json(cfg.gradient.delta_init)},
                               {"delta_min", optional_json(cfg.gradient.delta_min)},
                               {"shrink_factor", cfg.gradient.shrink_factor},
                               {"inner_max_iterations", cfg.gradient.inner_max_iterations},
                               {"oscillation_window", cfg.gradient.oscillation_window},
                               {"oscillation_angle_deg", cfg.gradient.oscillation_angle_deg},
                               {"step", cfg.gradient.step}};
  root["l1eq"] = {{"duality_gap_tol", cfg.lp.duality_gap_tol},
                  {"feasibility_tol", cfg.lp.feasibility_tol},
                  {"max_iterations", cfg.lp.max_iterations}};
  root["iht"] = {{"step", optional_json(cfg.iht.step)},
                 {"max_iterations", cfg.iht.max_iterations},
                 {"convergence_tol", cfg.iht.convergence_tol},
                 {"top_k", optional_json(cfg.iht.top_k)},
                 {"keep_measurement_count", cfg.iht.keep_measurement_count},
                 {"lambda_rel", cfg.iht.lambda_rel}};
  return root.dump(2) + "\n";
}

MultitoneSpec parse_signal_spec(std::string_view json_text) {
  const json root = parse_json(json_text);
  if (!root.is_object()) bad("signal spec must be an object");
  MultitoneSpec spec = signal_from(root.contains("signal") ? root.at("signal") : root);
  spec.validate();
  return spec;
}

ExperimentConfig load_config(const std::string& path_or_name) {
  namespace fs = std::filesystem;
  std::vector<fs::path> candidates{fs::path(path_or_name)};
  if (fs::path(path_or_name).extension().empty()) {
    candidates.push_back(fs::path(path_or_name + ".json"));
    candidates.push_back(fs::path(CSR_CONFIG_DIR) / (path_or_name + ".json"));
  }
  for (const auto& p : candidates) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) continue;
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
  }
  if (path_or_name == "paper_experiment") return reference_experiment_config();
  throw Error(ErrorCode::Io, "config '" + path_or_name + "' not found");
}

ExperimentConfig reference_experiment_config() {
  ExperimentConfig cfg;
  cfg.signal = reference_multitone(512);
  cfg.m_values = {20, 30, 40, 50, 60, 70, 80, 90, 100};
  cfg.trials_per_m = 50;
  cfg.base_seed = 20240917;
  cfg.algorithms = {Algorithm::Omp, Algorithm::Ols, Algorithm::Gp,
                    Algorithm::AdaptiveGradient, Algorithm::L1Eq, Algorithm::IhtTopK};
  // One timed run per cell keeps the full sweep within budget on a single core.
  cfg.timing_repeats = 1;
  cfg.jobs = 0;
  return cfg;
}

}  // namespace csr
