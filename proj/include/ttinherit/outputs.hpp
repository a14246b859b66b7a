#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include <ttinherit/boxplot.hpp>
#include <ttinherit/experiment.hpp>

namespace ttinherit {

/// One row of trials.csv.
struct TrialRow {
  std::string generator;
  std::size_t trial = 0;
  std::string parameter_label;
  std::size_t i = 0;
  std::size_t t = 0; ///< 0 when the column is empty
  double value = 0.0;
  bool bound_pass = false;
  int resamples = 0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kTrialsCsvHeader =
    "generator,trial,parameter_label,i,t,value,bound_pass,resamples,wall_time_s";

/// Shortest-round-trip-safe text for a double: 17 significant digits.
std::string format_real(double v);

std::vector<TrialRow> trial_rows(const std::vector<TrialResult>& trials);
void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRow>& rows);
std::vector<TrialRow> read_trials_csv(const std::filesystem::path& path);

nlohmann::json to_json(const BoxplotSummary& s);
BoxplotSummary boxplot_from_json(const nlohmann::json& j);

/// Build identification compiled into every summary.json.
std::string version_string();

/// summary.json document. `config` may be null (report from a bare trials.csv).
nlohmann::json summary_document(const nlohmann::json& config,
                                const std::map<std::string, std::vector<BoxplotSummary>>& summaries,
                                std::size_t violations, std::size_t failed_trials, double rank_tol);

/// Standalone SVG 1.1: a row-sampling panel (alpha_{i,t}) and a column-sampling
/// panel (alpha_i, beta_i). Each box is a <g class="box" data-label=...> holding
/// the box rect, median line, whiskers, '+' outlier markers and a dashed mean line.
std::string render_boxplot_svg(const std::string& title, const std::vector<BoxplotSummary>& summaries);

/// Writes trials.csv, summary.json and (if requested) boxplot_<generator>.svg into config.output_dir.
void write_outputs(const ExperimentResult& result);

/// Recomputes summaries and SVGs from <dir>/trials.csv; keeps the config echo of an
/// existing summary.json.
std::map<std::string, std::vector<BoxplotSummary>> report_from_directory(const std::filesystem::path& dir,
                                                                         bool emit_svg = true);

} // namespace ttinherit
