// noiselab: run reward-noise experiments from a JSON config.
//
//   noiselab ackley --seed 7 --out results/ackley
//   noiselab synthetic-sweep --config sweep.json --seed 1 --set synthetic_sweep.seeds=5
//   noiselab replay results/ackley/manifest.json --out results/ackley-again
//
// Exit codes: 0 success, 1 config error, 2 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noiselab/errors.hpp"
#include "noiselab/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw noiselab::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::size_t threads = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App& cmd, RunOptions& opts, bool seed_required) {
  auto* seed = cmd.add_option("--seed", opts.seed, "Master RNG seed");
  if (seed_required) seed->required();
  cmd.add_option("--out", opts.output_dir, "Output directory (overrides output_dir)");
  cmd.add_option("--threads", opts.threads, "Worker threads; does not change results")->check(CLI::PositiveNumber);
  cmd.add_option("--set", opts.overrides, "Override a config value, e.g. ackley.steps=200")->take_all();
}

noiselab::ExperimentConfig build_config(const std::string& kind, const RunOptions& opts, bool set_seed) {
  using nlohmann::json;
  std::string text = opts.config_path.empty() ? json{{"kind", kind}}.dump() : read_file(opts.config_path);

  std::vector<noiselab::ConfigOverride> overrides;
  if (!kind.empty()) overrides.push_back({"kind", json(kind).dump()});
  if (set_seed) overrides.push_back({"seed", std::to_string(opts.seed)});
  if (!opts.output_dir.empty()) overrides.push_back({"output_dir", json(opts.output_dir).dump()});
  if (opts.threads > 0) overrides.push_back({"threads", std::to_string(opts.threads)});
  for (const auto& o : opts.overrides) overrides.push_back(noiselab::parse_override(o));

  if (!kind.empty() && !opts.config_path.empty()) {
    // A config file must agree with the subcommand it is passed to.
    const auto from_file = noiselab::parse_config(text);
    if (noiselab::to_string(from_file.kind) != kind) {
      throw noiselab::ConfigError("kind: config file is '" + std::string(noiselab::to_string(from_file.kind)) +
                                  "' but subcommand is '" + kind + "'");
    }
  }
  return noiselab::parse_config(text, overrides);
}

int execute(const noiselab::ExperimentConfig& config) {
  const auto art = noiselab::run_experiment(config);
  std::cout << "manifest: " << art.manifest.string() << '\n';
  for (const auto& t : art.tables) std::cout << "table: " << t.string() << '\n';
  std::cout << "trajectories: " << art.trajectories.size() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward-noise experiments for group-relative policy optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(noiselab::kVersion));

  const std::vector<std::string> kinds{"noise-stats", "ackley", "synthetic-sweep", "metrics-demo"};
  std::vector<RunOptions> run_opts(kinds.size());
  std::vector<CLI::App*> run_cmds;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    auto* cmd = app.add_subcommand(kinds[i], "Run the " + kinds[i] + " experiment");
    cmd->add_option("--config", run_opts[i].config_path, "JSON config file");
    add_common(*cmd, run_opts[i], true);
    run_cmds.push_back(cmd);
  }

  RunOptions replay_opts;
  auto* replay = app.add_subcommand("replay", "Re-run an experiment from its manifest.json");
  replay->add_option("manifest", replay_opts.config_path, "Manifest or config file")->required();
  add_common(*replay, replay_opts, false);

  std::string check_path;
  auto* check = app.add_subcommand("check-config", "Validate a config and print it fully resolved");
  check->add_option("config", check_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (*run_cmds[i]) return execute(build_config(kinds[i], run_opts[i], true));
    }
    if (*replay) {
      const bool seed_given = replay->count("--seed") > 0;
      return execute(build_config("", replay_opts, seed_given));
    }
    if (*check) {
      std::cout << noiselab::to_json(noiselab::parse_config(read_file(check_path))).dump(2) << '\n';
      return kExitOk;
    }
  } catch (const noiselab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const noiselab::InvalidArgument& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
