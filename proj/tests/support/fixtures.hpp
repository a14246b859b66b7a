#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include <ttinherit/experiment.hpp>
#include <ttinherit/generators.hpp>

namespace ttinherit::fixtures {

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

inline ExperimentConfig small_config(std::vector<std::size_t> dims, std::vector<std::size_t> ranks,
                                     std::size_t trials, std::uint64_t seed = 7) {
  ExperimentConfig c;
  c.d = dims.size();
  c.shape = Shape(std::move(dims));
  c.ranks = std::move(ranks);
  c.trials = trials;
  c.master_seed = seed;
  c.emit_svg = false;
  return c;
}

/// The tensor run_trial draws for (kind, trial).
inline TTTensor trial_tensor(const ExperimentConfig& c, GeneratorKind kind, std::size_t trial) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.shape = c.shape;
  spec.ranks = c.ranks;
  spec.seed = trial_seed(c, kind, trial);
  return generate(spec, c.rank_tol).tensor;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ttinherit_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

} // namespace ttinherit::fixtures
