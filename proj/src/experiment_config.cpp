#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <sstream>

#include "noiselab/errors.hpp"
#include "noiselab/experiment.hpp"

namespace noiselab {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 4> kKindNames{{
    {ExperimentKind::NoiseStats, "noise-stats"},
    {ExperimentKind::Ackley, "ackley"},
    {ExperimentKind::SyntheticSweep, "synthetic-sweep"},
    {ExperimentKind::MetricsDemo, "metrics-demo"},
}};

// JSON member holding the kind-specific parameters.
std::string section_key(ExperimentKind kind) {
  std::string key(to_string(kind));
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

template <typename T>
std::string show(const T& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

// Strict view over one JSON object: every member must be consumed before finish().
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(label(), "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer()) fail(field(key), "must be >= 0, got " + v->dump());
    fail(field(key), "expected a non-negative integer, got " + v->dump());
  }

  std::size_t size(const std::string& key, std::size_t fallback, std::size_t minimum) {
    const auto v = u64(key, fallback);
    if (v < minimum) fail(field(key), "must be >= " + show(minimum) + ", got " + show(v));
    return static_cast<std::size_t>(v);
  }

  double number(const std::string& key, double fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(field(key), "expected a number, got " + v->dump());
    return v->get<double>();
  }

  double probability(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v >= 0.0 && v <= 1.0)) fail(field(key), "must lie in [0, 1], got " + show(v));
    return v;
  }

  double positive(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) fail(field(key), "must be > 0, got " + show(v));
    return v;
  }

  double non_negative(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v >= 0.0)) fail(field(key), "must be >= 0, got " + show(v));
    return v;
  }

  std::string string(const std::string& key, std::string fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(field(key), "expected a string, got " + v->dump());
    return v->get<std::string>();
  }

  const json* array(const std::string& key) {
    const json* v = take(key);
    if (v && !v->is_array()) fail(field(key), "expected an array, got " + v->dump());
    return v;
  }

  const json* object(const std::string& key) {
    const json* v = take(key);
    if (v && !v->is_object()) fail(field(key), "expected an object, got " + v->dump());
    return v;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) fail(field(key), "unknown key");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const json* take(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

NoiseMode read_mode(Reader& r, const std::string& key, NoiseMode fallback) {
  const std::string name = r.string(key, std::string(to_string(fallback)));
  try {
    return parse_noise_mode(name);
  } catch (const InvalidNoiseSpec& e) {
    fail(r.field(key), e.what());
  }
}

// mode / rate_p / fpr / fnr stored flat in a section.
NoiseSpec read_noise(Reader& r, const NoiseSpec& fallback) {
  NoiseSpec spec;
  spec.mode = read_mode(r, "mode", fallback.mode);
  spec.rate_p = r.probability("rate_p", fallback.rate_p);
  spec.fpr = r.probability("fpr", fallback.fpr);
  spec.fnr = r.probability("fnr", fallback.fnr);
  return spec;
}

std::vector<double> read_doubles(Reader& r, const std::string& key, std::vector<double> fallback,
                                 bool probabilities) {
  const json* arr = r.array(key);
  if (!arr) return fallback;
  if (arr->empty()) fail(r.field(key), "must not be empty");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const json& v = (*arr)[i];
    const std::string where = r.field(key) + "[" + show(i) + "]";
    if (!v.is_number()) fail(where, "expected a number, got " + v.dump());
    const double x = v.get<double>();
    if (probabilities && !(x >= 0.0 && x <= 1.0)) fail(where, "must lie in [0, 1], got " + show(x));
    if (!probabilities && !(x >= 0.0)) fail(where, "must be >= 0, got " + show(x));
    out.push_back(x);
  }
  return out;
}

void read_adam(Reader& parent, AdamConfig& adam) {
  const json* obj = parent.object("adam");
  if (!obj) return;
  Reader r(*obj, parent.field("adam"));
  adam.learning_rate = r.positive("learning_rate", adam.learning_rate);
  adam.beta1 = r.number("beta1", adam.beta1);
  adam.beta2 = r.number("beta2", adam.beta2);
  adam.eps_hat = r.positive("eps_hat", adam.eps_hat);
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0)) fail(r.field("beta1"), "must lie in [0, 1), got " + show(adam.beta1));
  if (!(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) fail(r.field("beta2"), "must lie in [0, 1), got " + show(adam.beta2));
  r.finish();
}

void read_noise_stats(Reader& r, NoiseStatsParams& p) {
  p.noise = read_noise(r, p.noise);
  p.rows = r.size("rows", p.rows, 1);
  p.cols = r.size("cols", p.cols, 1);
  p.samples = r.size("samples", p.samples, 1);
  p.truth_density = r.probability("truth_density", p.truth_density);
}

void read_ackley(Reader& r, AckleyParams& p) {
  p.starts = r.size("starts", p.starts, 1);
  p.radius = r.positive("radius", p.radius);
  p.noise_levels = read_doubles(r, "noise_levels", p.noise_levels, false);
  p.toy.steps = r.size("steps", p.toy.steps, 1);
  p.toy.group_size = r.size("group_size", p.toy.group_size, 1);
  p.toy.policy_std = r.positive("policy_std", p.toy.policy_std);
  p.toy.advantage_epsilon = r.positive("advantage_epsilon", p.toy.advantage_epsilon);
  read_adam(r, p.toy.adam);
}

void read_synthetic_sweep(Reader& r, SyntheticSweepParams& p) {
  if (const json* modes = r.array("modes")) {
    p.modes.clear();
    for (std::size_t i = 0; i < modes->size(); ++i) {
      const json& v = (*modes)[i];
      const std::string where = r.field("modes") + "[" + show(i) + "]";
      if (!v.is_string()) fail(where, "expected a mode name, got " + v.dump());
      NoiseMode mode;
      try {
        mode = parse_noise_mode(v.get<std::string>());
      } catch (const InvalidNoiseSpec& e) {
        fail(where, e.what());
      }
      if (mode == NoiseMode::AsymmetricCell) {
        fail(where, "asymmetric-cell takes fpr/fnr pairs; list them under asymmetric_pairs");
      }
      p.modes.push_back(mode);
    }
  }
  p.rates = read_doubles(r, "rates", p.rates, true);
  if (const json* pairs = r.array("asymmetric_pairs")) {
    p.asymmetric_pairs.clear();
    for (std::size_t i = 0; i < pairs->size(); ++i) {
      const json& v = (*pairs)[i];
      const std::string where = r.field("asymmetric_pairs") + "[" + show(i) + "]";
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(where, "expected [fpr, fnr], got " + v.dump());
      }
      const double fpr = v[0].get<double>();
      const double fnr = v[1].get<double>();
      if (!(fpr >= 0.0 && fpr <= 1.0)) fail(where + ".fpr", "must lie in [0, 1], got " + show(fpr));
      if (!(fnr >= 0.0 && fnr <= 1.0)) fail(where + ".fnr", "must lie in [0, 1], got " + show(fnr));
      p.asymmetric_pairs.push_back({fpr, fnr});
    }
  }
  if (p.modes.empty() && p.asymmetric_pairs.empty()) {
    fail(r.field("modes"), "need at least one mode or asymmetric pair");
  }
  p.seeds = r.size("seeds", p.seeds, 1);
  p.training.group_size = r.size("group_size", p.training.group_size, 2);
  p.training.steps = r.size("steps", p.training.steps, 1);
  p.training.learning_rate = r.positive("learning_rate", p.training.learning_rate);
  p.training.advantage_epsilon = r.positive("advantage_epsilon", p.training.advantage_epsilon);

  if (const json* task = r.object("task")) {
    Reader t(*task, r.field("task"));
    p.tests = t.size("tests", p.tests, 1);
    if (const json* counts = t.array("pass_counts")) {
      p.pass_counts.clear();
      for (std::size_t i = 0; i < counts->size(); ++i) {
        const json& v = (*counts)[i];
        if (!v.is_number_unsigned()) {
          fail(t.field("pass_counts") + "[" + show(i) + "]", "expected a non-negative integer, got " + v.dump());
        }
        p.pass_counts.push_back(v.get<std::size_t>());
      }
    }
    t.finish();
    const std::string where = r.field("task");
    if (p.pass_counts.size() < 2) fail(where + ".pass_counts", "need at least 2 candidates");
    for (std::size_t c : p.pass_counts) {
      if (c > p.tests) fail(where + ".pass_counts", "pass count " + show(c) + " exceeds tests = " + show(p.tests));
    }
    if (std::find(p.pass_counts.begin(), p.pass_counts.end(), p.tests) == p.pass_counts.end()) {
      fail(where + ".pass_counts", "need at least one all-pass candidate");
    }
  }
}

void read_metrics_demo(Reader& r, MetricsDemoParams& p) {
  p.noise = read_noise(r, p.noise);
  p.rows = r.size("rows", p.rows, 1);
  p.cols = r.size("cols", p.cols, 1);
  p.batches = r.size("batches", p.batches, 1);
  p.truth_density = r.probability("truth_density", p.truth_density);
  p.smoothing = r.number("smoothing", p.smoothing);
  if (!(p.smoothing >= 0.0 && p.smoothing < 1.0)) {
    fail(r.field("smoothing"), "must lie in [0, 1), got " + show(p.smoothing));
  }
}

json noise_json(const NoiseSpec& spec) {
  return {{"mode", to_string(spec.mode)}, {"rate_p", spec.rate_p}, {"fpr", spec.fpr}, {"fnr", spec.fnr}};
}

void set_path(json& doc, std::string_view path, json value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key(path.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (key.empty()) throw ConfigError("override '" + std::string(path) + "': empty key segment");
    if (!node->is_object()) throw ConfigError("override '" + std::string(path) + "': '" + key + "' is not inside an object");
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("config parse error at line " + show(line) + ", column " + show(column) + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ConfigError("kind: unknown experiment kind '" + std::string(name) +
                    "' (expected noise-stats, ackley, synthetic-sweep or metrics-demo)");
}

ConfigOverride parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(text) + "' must look like key.path=value");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

ExperimentConfig parse_config_json(const json& input) {
  if (!input.is_object()) throw ConfigError("config: expected a JSON object at top level");
  // A manifest carries the resolved config under "config"; everything else is provenance.
  const bool manifest = input.contains("config") && input.contains("generator");
  const json& doc = manifest ? input.at("config") : input;

  Reader top(doc, "");
  ExperimentConfig cfg;
  if (!top.has("kind")) fail("kind", "missing (expected noise-stats, ackley, synthetic-sweep or metrics-demo)");
  cfg.kind = parse_experiment_kind(top.string("kind", ""));
  if (top.has("seed")) cfg.seed = top.u64("seed", 0);
  cfg.output_dir = top.string("output_dir", cfg.output_dir);
  if (cfg.output_dir.empty()) fail("output_dir", "must not be empty");
  cfg.threads = top.size("threads", cfg.threads, 1);

  const std::string key = section_key(cfg.kind);
  const json empty = json::object();
  const json* section = top.object(key);
  Reader r(section ? *section : empty, key);
  switch (cfg.kind) {
    case ExperimentKind::NoiseStats: read_noise_stats(r, cfg.noise_stats); break;
    case ExperimentKind::Ackley: read_ackley(r, cfg.ackley); break;
    case ExperimentKind::SyntheticSweep: read_synthetic_sweep(r, cfg.synthetic_sweep); break;
    case ExperimentKind::MetricsDemo: read_metrics_demo(r, cfg.metrics_demo); break;
  }
  r.finish();
  top.finish();
  return cfg;
}

ExperimentConfig parse_config(std::string_view text) { return parse_config_json(parse_document(text)); }

ExperimentConfig parse_config(std::string_view text, const std::vector<ConfigOverride>& overrides) {
  json doc = parse_document(text);
  if (doc.is_object() && doc.contains("config") && doc.contains("generator")) doc = doc.at("config");
  for (const auto& o : overrides) {
    json value;
    try {
      value = json::parse(o.value);
    } catch (const json::parse_error&) {
      value = o.value;
    }
    set_path(doc, o.path, std::move(value));
  }
  return parse_config_json(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["kind"] = to_string(cfg.kind);
  if (cfg.seed) doc["seed"] = *cfg.seed;
  doc["output_dir"] = cfg.output_dir;
  doc["threads"] = cfg.threads;

  json section;
  switch (cfg.kind) {
    case ExperimentKind::NoiseStats: {
      const auto& p = cfg.noise_stats;
      section = noise_json(p.noise);
      section["rows"] = p.rows;
      section["cols"] = p.cols;
      section["samples"] = p.samples;
      section["truth_density"] = p.truth_density;
      break;
    }
    case ExperimentKind::Ackley: {
      const auto& p = cfg.ackley;
      section["starts"] = p.starts;
      section["radius"] = p.radius;
      section["noise_levels"] = p.noise_levels;
      section["steps"] = p.toy.steps;
      section["group_size"] = p.toy.group_size;
      section["policy_std"] = p.toy.policy_std;
      section["advantage_epsilon"] = p.toy.advantage_epsilon;
      section["adam"] = {{"learning_rate", p.toy.adam.learning_rate},
                         {"beta1", p.toy.adam.beta1},
                         {"beta2", p.toy.adam.beta2},
                         {"eps_hat", p.toy.adam.eps_hat}};
      break;
    }
    case ExperimentKind::SyntheticSweep: {
      const auto& p = cfg.synthetic_sweep;
      json modes = json::array();
      for (NoiseMode m : p.modes) modes.push_back(to_string(m));
      section["modes"] = modes;
      section["rates"] = p.rates;
      json pairs = json::array();
      for (const auto& [fpr, fnr] : p.asymmetric_pairs) pairs.push_back({fpr, fnr});
      section["asymmetric_pairs"] = pairs;
      section["seeds"] = p.seeds;
      section["group_size"] = p.training.group_size;
      section["steps"] = p.training.steps;
      section["learning_rate"] = p.training.learning_rate;
      section["advantage_epsilon"] = p.training.advantage_epsilon;
      section["task"] = {{"tests", p.tests}, {"pass_counts", p.pass_counts}};
      break;
    }
    case ExperimentKind::MetricsDemo: {
      const auto& p = cfg.metrics_demo;
      section = noise_json(p.noise);
      section["rows"] = p.rows;
      section["cols"] = p.cols;
      section["batches"] = p.batches;
      section["truth_density"] = p.truth_density;
      section["smoothing"] = p.smoothing;
      break;
    }
  }
  doc[section_key(cfg.kind)] = section;
  return doc;
}

json make_manifest(const ExperimentConfig& config, std::string created_at) {
  return {{"config", to_json(config)},
          {"generator", {{"name", "noiselab"}, {"version", kVersion}, {"created_at", std::move(created_at)}}}};
}

std::string format_short(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

}  // namespace noiselab
