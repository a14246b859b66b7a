#include <ttinherit/experiment.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include <ttinherit/errors.hpp>
#include <ttinherit/rng.hpp>

namespace ttinherit {

namespace {

constexpr std::size_t kDefaultSampleFactor = 4;

std::uint64_t kind_key(GeneratorKind kind) { return static_cast<std::uint64_t>(kind) + 1; }

std::size_t rank_at(const ExperimentConfig& c, std::size_t i) {
  return (i == 0 || i == c.d) ? 1 : c.ranks.at(i - 1);
}

bool keeps_rank(const linalg::Matrix& a, const linalg::Matrix& b, std::size_t r, double tol) {
  try {
    return linalg::factored_svd(a, b, tol).rank() == r;
  } catch (const RankError&) {
    return false;
  }
}

} // namespace

ExperimentConfig desk_preset() { return ExperimentConfig{}; }

ExperimentConfig paper_preset() {
  ExperimentConfig c;
  c.shape = Shape{100, 100, 100, 100};
  return c;
}

void apply_scale(ExperimentConfig& config, const std::string& scale) {
  ExperimentConfig preset;
  if (scale == "desk") {
    preset = desk_preset();
  } else if (scale == "paper") {
    preset = paper_preset();
  } else {
    throw ConfigError("unknown scale '" + scale + "' (expected desk or paper)");
  }
  config.d = preset.d;
  config.shape = preset.shape;
  config.ranks = preset.ranks;
  config.trials = preset.trials;
  config.generators = preset.generators;
  config.sample_sizes_I.clear();
  config.sample_sizes_J.clear();
}

std::vector<std::size_t> row_sample_sizes(const ExperimentConfig& config) {
  if (!config.sample_sizes_I.empty()) {
    return config.sample_sizes_I;
  }
  std::vector<std::size_t> sizes;
  std::uint64_t prev = 1;
  for (std::size_t i = 1; i < config.d; ++i) {
    const std::uint64_t pool = prev * config.shape[i - 1];
    const std::size_t m = static_cast<std::size_t>(std::min<std::uint64_t>(kDefaultSampleFactor * rank_at(config, i), pool));
    sizes.push_back(m);
    prev = m;
  }
  return sizes;
}

std::vector<std::size_t> column_sample_sizes(const ExperimentConfig& config) {
  if (!config.sample_sizes_J.empty()) {
    return config.sample_sizes_J;
  }
  std::vector<std::size_t> sizes;
  for (std::size_t i = 1; i < config.d; ++i) {
    const std::uint64_t pool = config.shape.numel(i, config.d);
    sizes.push_back(static_cast<std::size_t>(std::min<std::uint64_t>(kDefaultSampleFactor * rank_at(config, i), pool)));
  }
  return sizes;
}

void use_full_sampling(ExperimentConfig& config) {
  config.sample_sizes_I.clear();
  config.sample_sizes_J.clear();
  for (std::size_t i = 1; i < config.d; ++i) {
    config.sample_sizes_I.push_back(static_cast<std::size_t>(config.shape.numel(0, i)));
    config.sample_sizes_J.push_back(static_cast<std::size_t>(config.shape.numel(i, config.d)));
  }
}

void validate(const ExperimentConfig& config) {
  if (config.d < 2) {
    throw ConfigError("d must be at least 2");
  }
  if (config.shape.order() != config.d) {
    throw ConfigError("shape has " + std::to_string(config.shape.order()) + " modes but d = " +
                      std::to_string(config.d));
  }
  GeneratorSpec spec;
  spec.shape = config.shape;
  spec.ranks = config.ranks;
  validate_spec(spec);
  if (config.generators.empty()) {
    throw ConfigError("at least one generator is required");
  }
  if (std::set<GeneratorKind>(config.generators.begin(), config.generators.end()).size() !=
      config.generators.size()) {
    throw ConfigError("generators must not repeat");
  }
  if (config.trials < 1) {
    throw ConfigError("trials must be at least 1");
  }
  if (!(config.rank_tol > 0.0 && config.rank_tol < 1.0)) {
    throw ConfigError("rank_tol must lie in (0, 1)");
  }
  if (config.max_resample < 0) {
    throw ConfigError("max_resample must be non-negative");
  }
  if (!config.sample_sizes_I.empty() && config.sample_sizes_I.size() != config.d - 1) {
    throw ConfigError("sample_sizes_I needs d-1 entries");
  }
  if (!config.sample_sizes_J.empty() && config.sample_sizes_J.size() != config.d - 1) {
    throw ConfigError("sample_sizes_J needs d-1 entries");
  }
  const auto rows = row_sample_sizes(config);
  const auto cols = column_sample_sizes(config);
  std::uint64_t prev = 1;
  for (std::size_t i = 1; i < config.d; ++i) {
    const std::size_t r = rank_at(config, i);
    const std::uint64_t row_pool = prev * config.shape[i - 1];
    if (rows[i - 1] < r || rows[i - 1] > row_pool) {
      throw ConfigError("|I_" + std::to_string(i) + "| = " + std::to_string(rows[i - 1]) + " must lie in [r_" +
                        std::to_string(i) + ", |I_" + std::to_string(i - 1) + "| n_" + std::to_string(i) +
                        "] = [" + std::to_string(r) + ", " + std::to_string(row_pool) + "]");
    }
    const std::uint64_t col_pool = config.shape.numel(i, config.d);
    if (cols[i - 1] < r || cols[i - 1] > col_pool) {
      throw ConfigError("|J_" + std::to_string(i) + "| = " + std::to_string(cols[i - 1]) + " must lie in [" +
                        std::to_string(r) + ", " + std::to_string(col_pool) + "]");
    }
    prev = rows[i - 1];
  }
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  static const std::set<std::string> known{"d",           "shape",        "ranks",       "generators",
                                           "trials",      "sample_sizes_I", "sample_sizes_J", "master_seed",
                                           "rank_tol",    "max_resample", "output_dir",  "emit_svg"};
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw ConfigError("unknown config field '" + item.key() + "'");
    }
  }
  ExperimentConfig c;
  try {
    if (j.contains("shape")) {
      c.shape = Shape(j.at("shape").get<std::vector<std::size_t>>());
      c.d = c.shape.order();
    }
    if (j.contains("d")) {
      c.d = j.at("d").get<std::size_t>();
    }
    if (j.contains("ranks")) {
      c.ranks = j.at("ranks").get<std::vector<std::size_t>>();
    }
    if (j.contains("generators")) {
      c.generators.clear();
      for (const auto& g : j.at("generators")) {
        const auto kind = parse_generator_kind(g.get<std::string>());
        if (!kind) {
          throw ConfigError("unknown generator '" + g.get<std::string>() + "'");
        }
        c.generators.push_back(*kind);
      }
    }
    if (j.contains("trials")) {
      const auto trials = j.at("trials").get<std::int64_t>();
      if (trials < 1) {
        throw ConfigError("trials must be at least 1");
      }
      c.trials = static_cast<std::size_t>(trials);
    }
    if (j.contains("sample_sizes_I")) {
      c.sample_sizes_I = j.at("sample_sizes_I").get<std::vector<std::size_t>>();
    }
    if (j.contains("sample_sizes_J")) {
      c.sample_sizes_J = j.at("sample_sizes_J").get<std::vector<std::size_t>>();
    }
    if (j.contains("master_seed")) {
      c.master_seed = j.at("master_seed").get<std::uint64_t>();
    }
    if (j.contains("rank_tol")) {
      c.rank_tol = j.at("rank_tol").get<double>();
    }
    if (j.contains("max_resample")) {
      c.max_resample = j.at("max_resample").get<int>();
    }
    if (j.contains("output_dir")) {
      c.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("emit_svg")) {
      c.emit_svg = j.at("emit_svg").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  std::vector<std::string> gens;
  for (const GeneratorKind g : c.generators) {
    gens.emplace_back(to_string(g));
  }
  return {{"d", c.d},
          {"shape", c.shape.dims()},
          {"ranks", c.ranks},
          {"generators", gens},
          {"trials", c.trials},
          {"sample_sizes_I", row_sample_sizes(c)},
          {"sample_sizes_J", column_sample_sizes(c)},
          {"master_seed", c.master_seed},
          {"rank_tol", c.rank_tol},
          {"max_resample", c.max_resample},
          {"output_dir", c.output_dir},
          {"emit_svg", c.emit_svg}};
}

std::vector<std::string> parameter_labels(std::size_t d) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; i < d; ++i) {
    for (std::size_t t = 1; t <= d - i; ++t) {
      labels.push_back("alpha_" + std::to_string(i) + "_" + std::to_string(t));
    }
  }
  for (std::size_t i = 2; i < d; ++i) {
    labels.push_back("alpha_" + std::to_string(i));
  }
  for (std::size_t i = 1; i < d; ++i) {
    labels.push_back("beta_" + std::to_string(i));
  }
  return labels;
}

std::uint64_t trial_seed(const ExperimentConfig& config, GeneratorKind kind, std::size_t trial) {
  return derive_seed(config.master_seed, StreamPurpose::tensor, {kind_key(kind), trial});
}

TrialResult run_trial(const ExperimentConfig& config, GeneratorKind kind, std::size_t trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialResult out;
  out.generator = kind;
  out.trial = trial;
  const std::size_t d = config.d;
  const double tol = config.rank_tol;

  try {
    validate(config);
    GeneratorSpec spec;
    spec.kind = kind;
    spec.shape = config.shape;
    spec.ranks = config.ranks;
    spec.seed = trial_seed(config, kind, trial);
    GeneratedTensor generated = generate(spec, tol);
    out.seed = generated.seed_used;
    out.regenerations = generated.regenerations;
    const UnfoldingSpectra spectra(std::move(generated.tensor), tol);
    const TTTensor& t = spectra.tensor();

    const auto row_sizes = row_sample_sizes(config);
    const auto col_sizes = column_sample_sizes(config);

    // Nested row sets: I_i is drawn from I_{i-1} (x) [n_i] with I_0 = {1}.
    IndexSet prev({1}, 1);
    for (std::size_t i = 1; i < d; ++i) {
      const IndexSet pool = kron_extend(prev, t.shape()[i - 1]);
      bool accepted = false;
      for (int attempt = 0; attempt <= config.max_resample && !accepted; ++attempt) {
        Rng rng = make_rng(derive_seed(config.master_seed, StreamPurpose::row_sample,
                                       {kind_key(kind), trial, i, static_cast<std::uint64_t>(attempt)}));
        IndexSet sample = sample_without_replacement(pool, row_sizes[i - 1], rng);
        if (keeps_rank(left_interface_rows(t, i, sample), spectra.right_interface(i), t.rank(i), tol)) {
          out.rows.push_back(std::move(sample));
          out.row_resamples.push_back(attempt);
          accepted = true;
        }
      }
      if (!accepted) {
        throw SamplingError("row level " + std::to_string(i) + ": rank hypothesis failed after " +
                            std::to_string(config.max_resample) + " resamples");
      }
      prev = out.rows.back();
    }

    // Column sets are independent of the row sets; C_i must keep rank r_i.
    for (std::size_t i = 1; i < d; ++i) {
      const IndexSet pool = IndexSet::full(t.shape().numel(i, d));
      const IndexSet rows = c_rows(t, out.rows, i);
      const Matrix left = left_interface_rows(t, i, rows);
      bool accepted = false;
      for (int attempt = 0; attempt <= config.max_resample && !accepted; ++attempt) {
        Rng rng = make_rng(derive_seed(config.master_seed, StreamPurpose::column_sample,
                                       {kind_key(kind), trial, i, static_cast<std::uint64_t>(attempt)}));
        IndexSet sample = sample_without_replacement(pool, col_sizes[i - 1], rng);
        if (keeps_rank(left, right_interface_rows(t, i, sample), t.rank(i), tol)) {
          out.cols.push_back(std::move(sample));
          out.column_resamples.push_back(attempt);
          accepted = true;
        }
      }
      if (!accepted) {
        throw SamplingError("column level " + std::to_string(i) + ": rank hypothesis failed after " +
                            std::to_string(config.max_resample) + " resamples");
      }
    }

    auto r_records = check_theorem_R_bounds(spectra, out.rows);
    auto c_records = check_theorem_C_bounds(spectra, out.rows, out.cols);

    auto finite_or_nan = [](auto&& compute) {
      try {
        return compute();
      } catch (const SingularityError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };

    for (const InheritanceRecord& rec : r_records) {
      ParameterValue p;
      p.label = "alpha_" + std::to_string(rec.i) + "_" + std::to_string(rec.t);
      p.kind = RecordKind::alpha_it;
      p.i = rec.i;
      p.t = rec.t;
      p.value = finite_or_nan([&] { return alpha_it(spectra, out.rows[rec.i - 1], rec.i, rec.t); });
      p.bound_pass = rec.satisfied();
      p.resamples = out.row_resamples[rec.i - 1];
      out.parameters.push_back(std::move(p));
    }
    for (const InheritanceRecord& rec : c_records) {
      if (rec.i < 2) {
        continue;
      }
      ParameterValue p;
      p.label = "alpha_" + std::to_string(rec.i);
      p.kind = RecordKind::alpha_i;
      p.i = rec.i;
      p.value = finite_or_nan([&] { return alpha_i(spectra, out.rows[rec.i - 2], rec.i); });
      p.bound_pass = rec.satisfied();
      p.resamples = out.row_resamples[rec.i - 2];
      out.parameters.push_back(std::move(p));
    }
    for (const InheritanceRecord& rec : c_records) {
      ParameterValue p;
      p.label = "beta_" + std::to_string(rec.i);
      p.kind = RecordKind::beta_i;
      p.i = rec.i;
      p.value = finite_or_nan([&] { return beta_i(spectra, out.cols[rec.i - 1], rec.i); });
      p.bound_pass = rec.satisfied();
      p.resamples = out.column_resamples[rec.i - 1];
      out.parameters.push_back(std::move(p));
    }

    out.records = std::move(r_records);
    out.records.insert(out.records.end(), std::make_move_iterator(c_records.begin()),
                       std::make_move_iterator(c_records.end()));
    for (const InheritanceRecord& rec : out.records) {
      out.violations += rec.violated() ? 1 : 0;
      out.hypothesis_failures += rec.hypothesis_holds ? 0 : 1;
    }
    out.ok = true;
  } catch (const Error& e) {
    out.ok = false;
    out.error = e.what();
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::size_t worker_count() {
  std::size_t n = 0;
  if (const char* env = std::getenv("TT_INHERIT_THREADS")) {
    n = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  }
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
  }
  return n;
}

std::map<std::string, std::vector<BoxplotSummary>> summarize(const ExperimentConfig& config,
                                                             const std::vector<TrialResult>& trials) {
  std::map<std::string, std::vector<BoxplotSummary>> out;
  const auto labels = parameter_labels(config.d);
  for (const GeneratorKind kind : config.generators) {
    std::vector<BoxplotSummary>& group = out[to_string(kind)];
    for (const std::string& label : labels) {
      std::vector<double> values;
      for (const TrialResult& tr : trials) {
        if (tr.generator != kind || !tr.ok) {
          continue;
        }
        for (const ParameterValue& p : tr.parameters) {
          if (p.label == label && std::isfinite(p.value)) {
            values.push_back(p.value);
          }
        }
      }
      if (!values.empty()) {
        group.push_back(summarize_boxplot(values, label));
      }
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress, std::size_t threads) {
  validate(config);
  struct Unit {
    GeneratorKind kind;
    std::size_t trial;
  };
  std::vector<Unit> units;
  for (const GeneratorKind kind : config.generators) {
    for (std::size_t trial = 1; trial <= config.trials; ++trial) {
      units.push_back({kind, trial});
    }
  }

  ExperimentResult result;
  result.config = config;
  result.trials.resize(units.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < units.size(); k = next++) {
      result.trials[k] = run_trial(config, units[k].kind, units[k].trial);
      if (progress) {
        const std::lock_guard lock(report_mutex);
        progress(result.trials[k]);
      }
    }
  };
  const std::size_t n_workers = std::min(threads == 0 ? worker_count() : threads, units.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) {
      pool.emplace_back(worker);
    }
  }

  for (const TrialResult& tr : result.trials) {
    result.violations += tr.violations;
    result.hypothesis_failures += tr.hypothesis_failures;
    result.failed_trials += tr.ok ? 0 : 1;
  }
  result.summaries = summarize(config, result.trials);
  return result;
}

} // namespace ttinherit
