#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include <ttinherit/boxplot.hpp>
#include <ttinherit/generators.hpp>
#include <ttinherit/properties.hpp>

namespace ttinherit {

/// One sampling experiment. Empty sample-size lists mean the default
/// |I_i| = |J_i| = 4 r_i, capped by the available pool.
struct ExperimentConfig {
  std::size_t d = 4;
  Shape shape{20, 20, 20, 20};
  std::vector<std::size_t> ranks{2, 3, 2};
  std::vector<GeneratorKind> generators{GeneratorKind::gaussian, GeneratorKind::hadamard, GeneratorKind::uniform};
  std::size_t trials = 20;
  std::vector<std::size_t> sample_sizes_I;
  std::vector<std::size_t> sample_sizes_J;
  std::uint64_t master_seed = 20240901;
  double rank_tol = linalg::kDefaultRankTol;
  int max_resample = 25;
  std::string output_dir = "results";
  bool emit_svg = true;
};

ExperimentConfig desk_preset();
ExperimentConfig paper_preset();
/// Replaces shape, ranks, trials and generators with the named preset ("desk" or
/// "paper") and clears the sample sizes. Throws ConfigError on other names.
void apply_scale(ExperimentConfig& config, const std::string& scale);

/// Resolved |I_i| for i = 1..d-1 (defaults filled in).
std::vector<std::size_t> row_sample_sizes(const ExperimentConfig& config);
/// Resolved |J_i| for i = 1..d-1.
std::vector<std::size_t> column_sample_sizes(const ExperimentConfig& config);
/// Sample sizes that select every row and column at every level.
void use_full_sampling(ExperimentConfig& config);

/// Throws ConfigError describing the first violated constraint.
void validate(const ExperimentConfig& config);

/// Parses the JSON config format; unknown fields are rejected, missing ones keep defaults.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// One plotted parameter value of one trial.
struct ParameterValue {
  std::string label; ///< alpha_<i>_<t>, alpha_<i> or beta_<i>
  RecordKind kind = RecordKind::alpha_it;
  std::size_t i = 0;
  std::size_t t = 0; ///< 0 unless kind == alpha_it
  double value = 0.0;
  bool bound_pass = false;
  int resamples = 0; ///< resamples of the index set this parameter is built from
};

struct TrialResult {
  GeneratorKind generator = GeneratorKind::gaussian;
  std::size_t trial = 0; ///< 1-based
  std::uint64_t seed = 0;
  int regenerations = 0;
  bool ok = false;
  std::string error;
  std::vector<int> row_resamples;    ///< per level i = 1..d-1
  std::vector<int> column_resamples; ///< per level i = 1..d-1
  std::vector<IndexSet> rows;        ///< I_1..I_{d-1}
  std::vector<IndexSet> cols;        ///< J_1..J_{d-1}
  std::vector<ParameterValue> parameters;
  std::vector<InheritanceRecord> records; ///< row-sampling records, then column-sampling records
  std::size_t violations = 0;
  std::size_t hypothesis_failures = 0;
  double wall_seconds = 0.0;
};

/// Labels of every parameter reported per trial, in output order:
/// alpha_{i,t} by (i, t), alpha_i for i >= 2, beta_i.
std::vector<std::string> parameter_labels(std::size_t d);

/// Seed of the tensor drawn for (generator, trial).
std::uint64_t trial_seed(const ExperimentConfig& config, GeneratorKind kind, std::size_t trial);

/// Generates one tensor, draws nested row sets and independent column sets
/// (resampling a level whose rank hypothesis fails), and evaluates every
/// parameter and bound. Sampling failures are reported in the result, not thrown.
TrialResult run_trial(const ExperimentConfig& config, GeneratorKind kind, std::size_t trial);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialResult> trials; ///< ordered by (generator, trial)
  /// Per generator name, one summary per parameter label in parameter_labels order.
  std::map<std::string, std::vector<BoxplotSummary>> summaries;
  std::size_t violations = 0;
  std::size_t failed_trials = 0;
  std::size_t hypothesis_failures = 0;
};

/// Worker count from TT_INHERIT_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

using ProgressFn = std::function<void(const TrialResult&)>;

/// Runs every (generator, trial) pair; results are ordered independent of scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {},
                                std::size_t threads = 0);

/// Summaries over successful trials with finite values, keyed like ExperimentResult::summaries.
std::map<std::string, std::vector<BoxplotSummary>> summarize(const ExperimentConfig& config,
                                                             const std::vector<TrialResult>& trials);

} // namespace ttinherit
