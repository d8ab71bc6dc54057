#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "noiselab/reward_core.hpp"
#include "noiselab/synthetic_rlvr.hpp"
#include "noiselab/toy_optim.hpp"

namespace noiselab {

inline constexpr std::string_view kVersion = "1.0.0";

enum class ExperimentKind { NoiseStats, Ackley, SyntheticSweep, MetricsDemo };

/// "noise-stats", "ackley", "synthetic-sweep", "metrics-demo"
std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);

/// Empirical flip statistics of one noise spec over many random truth matrices.
struct NoiseStatsParams {
  NoiseSpec noise = NoiseSpec::symmetric(NoiseMode::Cell, 0.1);
  std::size_t rows = 16;
  std::size_t cols = 3;
  std::size_t samples = 100000;
  double truth_density = 0.5;  // probability that a ground-truth cell passes

  friend bool operator==(const NoiseStatsParams&, const NoiseStatsParams&) = default;
};

/// Gaussian-policy runs on Ackley: every start crossed with every reward-noise level.
struct AckleyParams {
  std::size_t starts = 3;
  double radius = 10.0;
  std::vector<double> noise_levels{0.0, 2.0, 10.0};
  ToyConfig toy;  // sigma_noise is taken from noise_levels

  friend bool operator==(const AckleyParams&, const AckleyParams&) = default;
};

struct SyntheticSweepParams {
  std::vector<NoiseMode> modes{NoiseMode::Matrix};
  std::vector<double> rates{0.0, 0.05, 0.1, 0.3, 0.5};
  std::vector<std::array<double, 2>> asymmetric_pairs;
  std::size_t seeds = 3;
  SyntheticConfig training;
  std::size_t tests = 3;
  std::vector<std::size_t> pass_counts{3, 2, 2, 1, 1, 1, 0, 0};

  friend bool operator==(const SyntheticSweepParams&, const SyntheticSweepParams&) = default;
};

/// Per-batch verifier confusion time series under a noise spec.
struct MetricsDemoParams {
  NoiseSpec noise = NoiseSpec::symmetric(NoiseMode::Cell, 0.1);
  std::size_t rows = 16;
  std::size_t cols = 3;
  std::size_t batches = 200;
  double truth_density = 0.5;
  double smoothing = 0.9;  // s_t = smoothing * s_{t-1} + (1 - smoothing) * x_t

  friend bool operator==(const MetricsDemoParams&, const MetricsDemoParams&) = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Ackley;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "results";
  std::size_t threads = 1;  // scheduling only; never changes numeric output

  NoiseStatsParams noise_stats;
  AckleyParams ackley;
  SyntheticSweepParams synthetic_sweep;
  MetricsDemoParams metrics_demo;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// One `--set a.b.c=value` override; the value is parsed as JSON, falling back to a string.
struct ConfigOverride {
  std::string path;
  std::string value;
};

/// Parses "a.b=value". Throws ConfigError when there is no '='.
ConfigOverride parse_override(std::string_view text);

/// Parses a JSON config (or a manifest, whose "config" member is used). Strict:
/// unknown keys, wrong types and out-of-range values throw ConfigError naming the field.
/// Missing keys take the documented defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig parse_config(std::string_view text, const std::vector<ConfigOverride>& overrides);
ExperimentConfig parse_config_json(const nlohmann::json& doc);

/// Fully resolved config: every parameter that influences results, for the active kind only.
nlohmann::json to_json(const ExperimentConfig& config);

/// Manifest document: {"config": to_json(config), "generator": {name, version, created_at}}.
nlohmann::json make_manifest(const ExperimentConfig& config, std::string created_at);

/// Shortest round-trip text for a double; used in file names.
std::string format_short(double value);
/// 17 significant digits; used for all numeric CSV cells.
std::string format_double(double value);

struct RunArtifacts {
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> tables;
  std::vector<std::filesystem::path> trajectories;
};

/// Runs the configured experiment and writes manifest.json plus the kind's tables under
/// config.output_dir. Throws ConfigError for an invalid config (e.g. missing seed) and
/// std::runtime_error for I/O failures.
RunArtifacts run_experiment(const ExperimentConfig& config);

}  // namespace noiselab
