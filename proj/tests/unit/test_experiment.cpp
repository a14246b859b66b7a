#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <cmath>

#include <fixtures.hpp>
#include <ttinherit/errors.hpp>
#include <ttinherit/experiment.hpp>

using namespace ttinherit;

TEST(Config, PresetsAndScale) {
  const auto desk = desk_preset();
  EXPECT_EQ(desk.shape.dims(), (std::vector<std::size_t>{20, 20, 20, 20}));
  EXPECT_EQ(desk.ranks, (std::vector<std::size_t>{2, 3, 2}));
  EXPECT_EQ(desk.trials, 20u);
  EXPECT_EQ(desk.generators.size(), 3u);
  auto c = desk;
  apply_scale(c, "paper");
  EXPECT_EQ(c.shape.dims(), (std::vector<std::size_t>{100, 100, 100, 100}));
  EXPECT_THROW(apply_scale(c, "huge"), ConfigError);
  EXPECT_EQ(row_sample_sizes(c), (std::vector<std::size_t>{8, 12, 8}));
  EXPECT_EQ(column_sample_sizes(c), (std::vector<std::size_t>{8, 12, 8}));
  use_full_sampling(c);
  EXPECT_EQ(row_sample_sizes(c), (std::vector<std::size_t>{100, 10000, 1000000}));
  EXPECT_EQ(column_sample_sizes(c), (std::vector<std::size_t>{1000000, 10000, 100}));
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, SampleSizesCappedByPool) {
  const auto c = fixtures::small_config({3, 3, 3}, {2, 2}, 1);
  EXPECT_EQ(row_sample_sizes(c), (std::vector<std::size_t>{3, 8}));
  EXPECT_EQ(column_sample_sizes(c), (std::vector<std::size_t>{8, 3}));
}

TEST(Config, ParseRoundTripAndRejections) {
  const auto c = fixtures::small_config({5, 6, 7}, {2, 3}, 4, 17);
  const auto back = parse_config(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));

  auto j = to_json(c);
  j["colour"] = "blue";
  EXPECT_THROW((void)parse_config(j), ConfigError);
  j = to_json(c);
  j["trials"] = 0;
  EXPECT_THROW(validate(parse_config(j)), ConfigError);
  j = to_json(c);
  j["generators"] = {"sobol"};
  EXPECT_THROW((void)parse_config(j), ConfigError);
  j = to_json(c);
  j["sample_sizes_I"] = {1, 3};
  EXPECT_THROW(validate(parse_config(j)), ConfigError);
  j = to_json(c);
  j["shape"] = {5, 6};
  EXPECT_THROW(validate(parse_config(j)), ConfigError);
  EXPECT_THROW((void)parse_config(nlohmann::json::array()), ConfigError);
}

TEST(Config, LoadReportsMissingAndMalformed) {
  const auto dir = fixtures::scratch_dir("config");
  EXPECT_THROW((void)load_config(dir / "nope.json"), ConfigError);
  {
    std::ofstream out(dir / "bad.json");
    out << "{ not json";
  }
  EXPECT_THROW((void)load_config(dir / "bad.json"), ConfigError);
}

TEST(Trial, ParameterGridForOrderFour) {
  const auto labels = parameter_labels(4);
  EXPECT_EQ(labels, (std::vector<std::string>{"alpha_1_1", "alpha_1_2", "alpha_1_3", "alpha_2_1", "alpha_2_2",
                                              "alpha_3_1", "alpha_2", "alpha_3", "beta_1", "beta_2", "beta_3"}));
  const auto c = fixtures::small_config({8, 8, 8, 8}, {2, 3, 2}, 1);
  const TrialResult tr = run_trial(c, GeneratorKind::uniform, 1);
  ASSERT_TRUE(tr.ok) << tr.error;
  ASSERT_EQ(tr.parameters.size(), labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    EXPECT_EQ(tr.parameters[k].label, labels[k]);
    EXPECT_TRUE(std::isfinite(tr.parameters[k].value));
    EXPECT_TRUE(tr.parameters[k].bound_pass);
  }
}

TEST(Trial, NestedRowsAndColumnSizes) {
  const auto c = fixtures::small_config({8, 8, 8, 8}, {2, 3, 2}, 1);
  const TrialResult tr = run_trial(c, GeneratorKind::gaussian, 1);
  ASSERT_TRUE(tr.ok);
  const TTTensor t = fixtures::trial_tensor(c, GeneratorKind::gaussian, 1);
  EXPECT_NO_THROW(require_nested(t, tr.rows));
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_EQ(tr.rows[i - 1].size(), row_sample_sizes(c)[i - 1]);
    EXPECT_EQ(tr.cols[i - 1].size(), column_sample_sizes(c)[i - 1]);
  }
}

TEST(Trial, FullSamplingGivesUnitParameters) {
  auto c = fixtures::small_config({4, 5, 3, 4}, {2, 3, 2}, 1);
  use_full_sampling(c);
  for (auto kind : {GeneratorKind::gaussian, GeneratorKind::hadamard, GeneratorKind::uniform}) {
    const TrialResult tr = run_trial(c, kind, 1);
    ASSERT_TRUE(tr.ok) << tr.error;
    EXPECT_EQ(tr.violations, 0u);
    for (const auto& p : tr.parameters) {
      EXPECT_NEAR(p.value, 1.0, 1e-10) << p.label;
      EXPECT_TRUE(p.bound_pass);
    }
  }
}

TEST(Trial, Deterministic) {
  const auto c = fixtures::small_config({9, 9, 9, 9}, {2, 3, 2}, 1);
  const TrialResult a = run_trial(c, GeneratorKind::hadamard, 3);
  const TrialResult b = run_trial(c, GeneratorKind::hadamard, 3);
  ASSERT_EQ(a.parameters.size(), b.parameters.size());
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.cols, b.cols);
  for (std::size_t k = 0; k < a.parameters.size(); ++k) {
    EXPECT_EQ(a.parameters[k].value, b.parameters[k].value);
  }
}

TEST(Trial, ExhaustedResampleBudgetExcludesTrial) {
  // |J_1| = r_1 on +-1 data with no retries: some trial loses rank and is excluded.
  auto c = fixtures::small_config({3, 3, 3}, {2, 2}, 40);
  c.generators = {GeneratorKind::hadamard};
  c.sample_sizes_I = {2, 2};
  c.sample_sizes_J = {2, 2};
  c.max_resample = 0;
  const auto result = run_experiment(c, {}, 1);
  EXPECT_GT(result.failed_trials, 0u);
  for (const auto& tr : result.trials) {
    if (!tr.ok) {
      EXPECT_FALSE(tr.error.empty());
      EXPECT_TRUE(tr.parameters.empty());
    }
  }
  EXPECT_EQ(result.violations, 0u);
}

TEST(Experiment, ResultsIndependentOfThreadCount) {
  const auto c = fixtures::small_config({7, 7, 7, 7}, {2, 3, 2}, 4);
  const auto one = run_experiment(c, {}, 1);
  const auto many = run_experiment(c, {}, 4);
  ASSERT_EQ(one.trials.size(), 12u);
  for (std::size_t k = 0; k < one.trials.size(); ++k) {
    EXPECT_EQ(one.trials[k].generator, many.trials[k].generator);
    EXPECT_EQ(one.trials[k].trial, many.trials[k].trial);
    ASSERT_EQ(one.trials[k].parameters.size(), many.trials[k].parameters.size());
    for (std::size_t p = 0; p < one.trials[k].parameters.size(); ++p) {
      EXPECT_EQ(one.trials[k].parameters[p].value, many.trials[k].parameters[p].value);
    }
  }
  EXPECT_EQ(one.summaries, many.summaries);
}

TEST(Experiment, SingleTrialSummaryIsThePoint) {
  auto c = fixtures::small_config({6, 6, 6, 6}, {2, 3, 2}, 1);
  c.generators = {GeneratorKind::gaussian};
  const auto r = run_experiment(c);
  const auto& boxes = r.summaries.at("gaussian");
  ASSERT_EQ(boxes.size(), 11u);
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const double v = r.trials[0].parameters[k].value;
    EXPECT_EQ(boxes[k].median, v);
    EXPECT_EQ(boxes[k].mean, v);
    EXPECT_TRUE(boxes[k].outliers.empty());
  }
}

TEST(Experiment, DeskPresetIsFastAndClean) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_experiment(desk_preset());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.trials.size(), 60u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.failed_trials, 0u);
  EXPECT_LT(secs, 60.0);
  EXPECT_EQ(r.summaries.size(), 3u);
}

TEST(Threads, EnvironmentOverride) {
  ::setenv("TT_INHERIT_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::setenv("TT_INHERIT_THREADS", "0", 1);
  EXPECT_GE(worker_count(), 1u);
  ::unsetenv("TT_INHERIT_THREADS");
}
