#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "noiselab/errors.hpp"
#include "noiselab/experiment.hpp"
#include "noiselab/verifier_metrics.hpp"

namespace noiselab {

namespace fs = std::filesystem;

namespace {

// Stream ids under the master seed. Ackley run i uses kAckleyRunBase + i.
constexpr std::uint64_t kTruthStream = 0;
constexpr std::uint64_t kStartsStream = 0;
constexpr std::uint64_t kAckleyRunBase = 1;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::uint64_t v) { return std::to_string(v); }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : "null"; }

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, std::initializer_list<std::string_view> header) : path_(path) {
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    bool first = true;
    for (auto h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  template <typename... Cols>
  void row(const Cols&... cols) {
    bool first = true;
    ((out_ << (first ? "" : ",") << to_text(cols), first = false), ...);
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing " + path_.string());
  }

 private:
  static std::string to_text(const std::string& s) { return s; }
  static std::string to_text(std::string_view s) { return std::string(s); }
  static std::string to_text(const char* s) { return s; }
  template <typename T>
  static std::string to_text(const T& v) { return cell(v); }

  fs::path path_;
  std::ofstream out_;
};

RewardMatrix random_truth(std::size_t rows, std::size_t cols, double density, RngStream& rng) {
  std::vector<std::uint8_t> cells(rows * cols);
  for (auto& c : cells) c = rng.uniform() < density ? 1 : 0;
  return RewardMatrix(rows, cols, std::move(cells));
}

// Runs `count` independent jobs on up to `threads` workers; job i writes only slot i.
template <typename Job>
void parallel_for(std::size_t count, std::size_t threads, Job job) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    }));
  }
  for (auto& f : pool) f.get();
}

void run_noise_stats(const ExperimentConfig& cfg, const fs::path& dir, RunArtifacts& art) {
  const auto& p = cfg.noise_stats;
  NoiseSpec spec = p.noise;
  spec.seed = *cfg.seed;
  RngStream truth_rng = RngStream(*cfg.seed, 0).substream(kTruthStream);

  std::vector<ConfusionReport> reports;
  reports.reserve(p.samples);
  for (std::size_t s = 0; s < p.samples; ++s) {
    const RewardMatrix truth = random_truth(p.rows, p.cols, p.truth_density, truth_rng);
    RngStream noise_rng = resample_epoch_noise(spec, s);
    reports.push_back(confusion_metrics(apply_noise(truth, spec, noise_rng), truth));
  }
  const ConfusionReport total = batch_confusion(reports);
  const std::uint64_t cells = total.total();
  const double flip_rate = static_cast<double>(total.fp + total.fn) / static_cast<double>(cells);

  const fs::path path = dir / "summary.csv";
  CsvWriter csv(path, {"mode", "rate_p", "fpr", "fnr", "rows", "cols", "samples", "cells", "truth_density",
                       "tp", "fp", "tn", "fn", "measured_fpr", "measured_fnr", "flip_rate", "accuracy",
                       "precision", "recall", "f1"});
  csv.row(to_string(spec.mode), spec.rate_p, spec.fpr, spec.fnr, std::uint64_t{p.rows}, std::uint64_t{p.cols},
          std::uint64_t{p.samples}, cells, p.truth_density, total.tp, total.fp, total.tn, total.fn,
          total.false_positive_rate(), total.false_negative_rate(), flip_rate, total.accuracy, total.precision,
          total.recall, total.f1);
  csv.close();
  art.tables.push_back(path);
}

void run_ackley(const ExperimentConfig& cfg, const fs::path& dir, RunArtifacts& art) {
  const auto& p = cfg.ackley;
  RngStream start_rng = RngStream(*cfg.seed, 0).substream(kStartsStream);
  const auto starts = circle_starts(p.radius, p.starts, start_rng);
  const std::size_t levels = p.noise_levels.size();

  std::vector<OptimizerRun> runs(starts.size() * levels);
  parallel_for(runs.size(), cfg.threads, [&](std::size_t k) {
    const std::size_t i = k / levels;
    ToyConfig toy = p.toy;
    toy.sigma_noise = p.noise_levels[k % levels];
    // Same stream id for every noise level of a start: paired comparison.
    runs[k] = run_optimization(toy, starts[i], *cfg.seed, kAckleyRunBase + i);
  });

  const fs::path summary_path = dir / "summary.csv";
  CsvWriter summary(summary_path, {"start", "noise", "start_x", "start_y", "final_x", "final_y", "final_distance",
                                   "final_clean_reward", "best_clean_reward", "best_step"});
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const std::size_t i = k / levels;
    const double noise = p.noise_levels[k % levels];
    const auto& run = runs[k];

    const fs::path traj_path = dir / ("trajectory_" + std::to_string(i) + "_" + format_short(noise) + ".csv");
    CsvWriter traj(traj_path, {"step", "mu_x", "mu_y", "mean_clean_reward"});
    for (std::size_t t = 0; t < run.trajectory.size(); ++t) {
      traj.row(std::uint64_t{t}, run.trajectory[t][0], run.trajectory[t][1], run.clean_rewards[t]);
    }
    traj.close();
    art.trajectories.push_back(traj_path);

    const auto best = std::max_element(run.clean_rewards.begin(), run.clean_rewards.end());
    const Vec2& fin = run.final_mean();
    summary.row(std::uint64_t{i}, noise, run.start[0], run.start[1], fin[0], fin[1], std::hypot(fin[0], fin[1]),
                run.clean_rewards.back(), *best,
                static_cast<std::uint64_t>(best - run.clean_rewards.begin()));
  }
  summary.close();
  art.tables.push_back(summary_path);
}

void run_synthetic_sweep(const ExperimentConfig& cfg, const fs::path& dir, RunArtifacts& art) {
  const auto& p = cfg.synthetic_sweep;
  const SyntheticTask task = SyntheticTask::from_pass_counts(p.pass_counts, p.tests);
  SweepGrid grid;
  grid.modes = p.modes;
  grid.rates = p.rates;
  grid.asymmetric_pairs = p.asymmetric_pairs;
  grid.seeds = p.seeds;
  grid.master_seed = *cfg.seed;
  grid.threads = cfg.threads;
  const SweepTable table = noise_sweep(task, grid, p.training);

  const fs::path summary_path = dir / "summary.csv";
  const fs::path runs_path = dir / "runs.csv";
  const fs::path curves_path = dir / "curves.csv";
  CsvWriter summary(summary_path, {"mode", "rate_p", "fpr", "fnr", "seeds", "best_mean", "best_std", "final_mean",
                                   "final_std", "steps_to_best_mean", "steps_to_best_std"});
  CsvWriter runs(runs_path, {"mode", "rate_p", "fpr", "fnr", "seed_index", "best", "final", "steps_to_best"});
  CsvWriter curves(curves_path, {"mode", "rate_p", "fpr", "fnr", "seed_index", "step", "clean_reward"});
  for (const auto& c : table.cells) {
    const auto mode = to_string(c.noise.mode);
    summary.row(mode, c.noise.rate_p, c.noise.fpr, c.noise.fnr, std::uint64_t{c.runs.size()}, c.best.mean,
                c.best.std, c.final.mean, c.final.std, c.steps_to_best.mean, c.steps_to_best.std);
    for (std::size_t s = 0; s < c.runs.size(); ++s) {
      const auto& r = c.runs[s];
      runs.row(mode, c.noise.rate_p, c.noise.fpr, c.noise.fnr, std::uint64_t{s}, r.best_reward, r.final_reward,
               std::uint64_t{r.steps_to_best});
      for (std::size_t t = 0; t < r.reward_curve.size(); ++t) {
        curves.row(mode, c.noise.rate_p, c.noise.fpr, c.noise.fnr, std::uint64_t{s}, std::uint64_t{t},
                   r.reward_curve[t]);
      }
    }
  }
  summary.close();
  runs.close();
  curves.close();
  art.tables.insert(art.tables.end(), {summary_path, runs_path, curves_path});
}

// Exponential smoothing that skips undefined observations.
class Smoother {
 public:
  explicit Smoother(double factor) : factor_(factor) {}
  std::optional<double> update(const std::optional<double>& x) {
    if (x) state_ = state_ ? factor_ * *state_ + (1.0 - factor_) * *x : *x;
    return state_;
  }

 private:
  double factor_;
  std::optional<double> state_;
};

void run_metrics_demo(const ExperimentConfig& cfg, const fs::path& dir, RunArtifacts& art) {
  const auto& p = cfg.metrics_demo;
  NoiseSpec spec = p.noise;
  spec.seed = *cfg.seed;
  RngStream truth_rng = RngStream(*cfg.seed, 0).substream(kTruthStream);

  const fs::path confusion_path = dir / "confusion.csv";
  CsvWriter csv(confusion_path, {"batch", "tp", "fp", "tn", "fn", "accuracy", "precision", "recall", "f1",
                                 "smoothed_accuracy", "smoothed_precision", "smoothed_recall", "smoothed_f1"});
  Smoother acc(p.smoothing), prec(p.smoothing), rec(p.smoothing), f1(p.smoothing);
  std::vector<ConfusionReport> reports;
  reports.reserve(p.batches);
  for (std::size_t b = 0; b < p.batches; ++b) {
    const RewardMatrix truth = random_truth(p.rows, p.cols, p.truth_density, truth_rng);
    RngStream noise_rng = resample_epoch_noise(spec, b);
    const auto r = confusion_metrics(apply_noise(truth, spec, noise_rng), truth);
    reports.push_back(r);
    csv.row(std::uint64_t{b}, r.tp, r.fp, r.tn, r.fn, r.accuracy, r.precision, r.recall, r.f1,
            acc.update(r.accuracy), prec.update(r.precision), rec.update(r.recall), f1.update(r.f1));
  }
  csv.close();

  const auto total = batch_confusion(reports);
  const fs::path summary_path = dir / "summary.csv";
  CsvWriter summary(summary_path, {"batches", "cells", "tp", "fp", "tn", "fn", "accuracy", "precision", "recall",
                                   "f1", "measured_fpr", "measured_fnr"});
  summary.row(std::uint64_t{p.batches}, total.total(), total.tp, total.fp, total.tn, total.fn, total.accuracy,
              total.precision, total.recall, total.f1, total.false_positive_rate(), total.false_negative_rate());
  summary.close();
  art.tables.insert(art.tables.end(), {confusion_path, summary_path});
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config) {
  if (!config.seed) throw ConfigError("seed: missing; pass --seed (no implicit entropy)");
  // Round-trip through the strict parser so hand-built configs get the same validation.
  const ExperimentConfig checked = parse_config_json(to_json(config));

  const fs::path dir(checked.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  RunArtifacts art;
  art.manifest = dir / "manifest.json";
  {
    std::ofstream out(art.manifest, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + art.manifest.string() + " for writing");
    out << make_manifest(checked, utc_timestamp()).dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + art.manifest.string());
  }

  switch (checked.kind) {
    case ExperimentKind::NoiseStats: run_noise_stats(checked, dir, art); break;
    case ExperimentKind::Ackley: run_ackley(checked, dir, art); break;
    case ExperimentKind::SyntheticSweep: run_synthetic_sweep(checked, dir, art); break;
    case ExperimentKind::MetricsDemo: run_metrics_demo(checked, dir, art); break;
  }
  return art;
}

}  // namespace noiselab
