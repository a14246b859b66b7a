#include <gtest/gtest.h>

#include <cmath>

#include <oracle/oracle.hpp>
#include <fixtures.hpp>
#include <ttinherit/errors.hpp>
#include <ttinherit/experiment.hpp>
#include <ttinherit/generators.hpp>
#include <ttinherit/properties.hpp>
#include <ttinherit/rng.hpp>

using namespace ttinherit;
using linalg::Matrix;
using fixtures::rel_diff;

namespace {

TTTensor ones(const std::vector<std::size_t>& dims) {
  std::vector<TTCore> cores;
  for (std::size_t n : dims) {
    cores.emplace_back(1, n, 1, std::vector<double>(n, 1.0));
  }
  return TTTensor(std::move(cores));
}

TTTensor gaussian(std::vector<std::size_t> dims, std::vector<std::size_t> ranks, std::uint64_t seed) {
  return generate({GeneratorKind::gaussian, Shape(std::move(dims)), std::move(ranks), seed}).tensor;
}

std::vector<IndexSet> full_rows(const TTTensor& t) {
  std::vector<IndexSet> out;
  for (std::size_t i = 1; i < t.order(); ++i) {
    out.push_back(IndexSet::full(t.shape().numel(0, i)));
  }
  return out;
}

std::vector<IndexSet> full_cols(const TTTensor& t) {
  std::vector<IndexSet> out;
  for (std::size_t i = 1; i < t.order(); ++i) {
    out.push_back(IndexSet::full(t.shape().numel(i, t.order())));
  }
  return out;
}

void expect_all_hold(const std::vector<InheritanceRecord>& records) {
  for (const auto& r : records) {
    EXPECT_TRUE(r.hypothesis_holds) << to_string(r.kind) << " i=" << r.i << " t=" << r.t << " " << r.note;
    EXPECT_TRUE(r.satisfied()) << to_string(r.kind) << " i=" << r.i << " t=" << r.t;
  }
}

} // namespace

TEST(Incoherence, Examples) {
  const auto id = incoherence(linalg::thin_svd(Matrix::Identity(4, 4)), 4, 4);
  EXPECT_NEAR(id.mu1, 1.0, 1e-14);
  EXPECT_NEAR(id.mu2, 1.0, 1e-14);
  const auto flat = incoherence(linalg::thin_svd(Matrix::Ones(4, 6)), 4, 6);
  EXPECT_NEAR(flat.mu1, 1.0, 1e-14);
  EXPECT_NEAR(flat.mu2, 1.0, 1e-14);
  Matrix spike = Matrix::Zero(4, 4);
  spike(0, 0) = 1;
  const auto sp = incoherence(linalg::thin_svd(spike), 4, 4);
  EXPECT_NEAR(sp.mu1, 4.0, 1e-14);
  EXPECT_NEAR(sp.mu2, 4.0, 1e-14);
}

TEST(TtIncoherence, AllOnesAndRankOne) {
  for (const auto& rep : tt_incoherence(ones({2, 2, 2, 2}))) {
    EXPECT_NEAR(rep.mu.mu1, 1.0, 1e-13);
    EXPECT_NEAR(rep.mu.mu2, 1.0, 1e-13);
    EXPECT_NEAR(rep.kappa, 1.0, 1e-13);
    EXPECT_EQ(rep.rank, 1u);
  }
  const TTTensor two({TTCore(1, 2, 1, {1, 2}), TTCore(1, 2, 1, {3, 4})});
  EXPECT_DOUBLE_EQ(tt_incoherence(two).front().kappa, 1.0);
}

TEST(TtIncoherence, MatchesDenseOracleAtDeskScale) {
  const TTTensor t = gaussian({20, 20, 20, 20}, {2, 3, 2}, 44);
  const DenseTensor x = to_dense(t);
  const auto reports = tt_incoherence(t);
  for (std::size_t i = 1; i < 4; ++i) {
    const auto ref = oracle::dense_properties(x, i);
    const auto& got = reports[i - 1];
    ASSERT_EQ(got.rank, ref.rank);
    EXPECT_LE(rel_diff(got.mu.mu1, ref.mu.mu1), 1e-8);
    EXPECT_LE(rel_diff(got.mu.mu2, ref.mu.mu2), 1e-8);
    EXPECT_LE(rel_diff(got.kappa, ref.kappa), 1e-8);
    EXPECT_GE(got.mu.mu1, 1.0 - 1e-12);
    EXPECT_LE(got.mu.mu1, static_cast<double>(t.shape().numel(0, i)) / got.rank + 1e-9);
  }
}

TEST(Alpha, FullSamplingGivesOne) {
  const TTTensor t = gaussian({5, 4, 3, 6}, {2, 3, 2}, 1);
  const UnfoldingSpectra sp(t);
  for (std::size_t i = 1; i < 4; ++i) {
    for (std::size_t k = 1; k <= 4 - i; ++k) {
      EXPECT_NEAR(alpha_it(sp, IndexSet::full(t.shape().numel(0, i)), i, k), 1.0, 1e-10);
    }
    EXPECT_NEAR(beta_i(sp, IndexSet::full(t.shape().numel(i, 4)), i), 1.0, 1e-10);
  }
  EXPECT_NEAR(alpha_i(sp, IndexSet::full(5), 2), 1.0, 1e-10);
  EXPECT_NEAR(alpha_i(sp, IndexSet::full(20), 3), 1.0, 1e-10);
  EXPECT_EQ(alpha_i(sp, IndexSet{}, 1), kAlphaOne);
}

TEST(Alpha, AtLeastSampleFractionRoot) {
  const TTTensor t = gaussian({8, 8, 8, 8}, {2, 3, 2}, 2);
  const UnfoldingSpectra sp(t);
  Rng rng = make_rng(5);
  const IndexSet rows = sample_without_replacement(IndexSet::full(8), 3, rng);
  const double a = alpha_it(sp, rows, 1, 1);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_GE(a, std::sqrt(3.0 / 8.0));
  EXPECT_NEAR(a, alpha_it(t, rows, 1, 1), 1e-12);
  EXPECT_THROW((void)alpha_it(sp, rows, 1, 4), DomainError);
  EXPECT_THROW((void)alpha_it(sp, IndexSet({1}, 7), 1, 1), DomainError);
}

TEST(Beta, TooFewColumnsIsSingular) {
  const TTTensor t = gaussian({6, 6, 6, 6}, {2, 3, 2}, 3);
  EXPECT_THROW((void)beta_i(t, IndexSet({5, 7}, 36), 2), SingularityError);
  EXPECT_THROW((void)beta_i(t, IndexSet({5}, 216), 1), SingularityError);
}

TEST(Parameters, MatchDenseOracleAtDeskScale) {
  const auto c = fixtures::small_config({20, 20, 20, 20}, {2, 3, 2}, 1, 99);
  const TrialResult tr = run_trial(c, GeneratorKind::gaussian, 1);
  ASSERT_TRUE(tr.ok) << tr.error;
  const TTTensor t = fixtures::trial_tensor(c, GeneratorKind::gaussian, 1);
  const DenseTensor x = to_dense(t);
  const UnfoldingSpectra sp(t);
  for (std::size_t i = 1; i < 4; ++i) {
    for (std::size_t k = 1; k <= 4 - i; ++k) {
      EXPECT_LE(rel_diff(alpha_it(sp, tr.rows[i - 1], i, k), oracle::dense_alpha_it(x, tr.rows[i - 1], i, k)), 1e-8);
    }
    if (i >= 2) {
      EXPECT_LE(rel_diff(alpha_i(sp, tr.rows[i - 2], i), oracle::dense_alpha_i(x, tr.rows[i - 2], i)), 1e-8);
    }
    EXPECT_LE(rel_diff(beta_i(sp, tr.cols[i - 1], i), oracle::dense_beta_i(x, tr.cols[i - 1], i)), 1e-8);
  }
}

TEST(RankPreservation, FullPassesTrivially) {
  const TTTensor t = gaussian({10, 10, 10, 10}, {2, 3, 2}, 4);
  const auto rep = check_rank_preservation(t, IndexSet::full(10));
  EXPECT_TRUE(rep.hypothesis_holds);
  EXPECT_TRUE(rep.pass);
}

TEST(RankPreservation, RandomSamplesPreserveRanks) {
  const TTTensor t = gaussian({10, 10, 10, 10}, {2, 3, 2}, 5);
  Rng rng = make_rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const auto r = check_rank_preservation(t, sample_without_replacement(IndexSet::full(10), 8, rng));
    ASSERT_TRUE(r.hypothesis_holds);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.observed, (std::vector<std::size_t>{2, 3, 2}));
  }
}

TEST(RankPreservation, DuplicatedSlicesFailHypothesis) {
  // Slices 1 and 2 of mode 1 coincide, so I = {1, 2} sees rank 1 < r_1 = 2.
  const TTCore first(1, 4, 2, {1, 1, 0, 1, 0, 0, 1, 1});
  const TTTensor base = gaussian({4, 5, 5}, {2, 2}, 7);
  const TTTensor t({first, base.core(2), base.core(3)});
  ASSERT_EQ(tt_rank_numerical(t), (std::vector<std::size_t>{2, 2}));
  const auto rep = check_rank_preservation(t, IndexSet({1, 2}, 4));
  EXPECT_FALSE(rep.hypothesis_holds);
  EXPECT_EQ(rep.sampled_rank, 1u);
  EXPECT_FALSE(rep.pass);
  EXPECT_TRUE(rep.observed.empty());
}

TEST(RBounds, FullSamplingHoldsWithUnitAlpha) {
  const TTTensor t = gaussian({5, 4, 3, 6}, {2, 3, 2}, 8);
  const auto records = check_theorem_R_bounds(t, full_rows(t));
  ASSERT_EQ(records.size(), 6u);
  expect_all_hold(records);
  for (const auto& r : records) {
    EXPECT_NEAR(r.alpha, 1.0, 1e-10);
    EXPECT_EQ(r.checks.size(), 3u);
  }
}

TEST(RBounds, NestingViolationIsPrecondition) {
  const TTTensor t = gaussian({4, 4, 4, 4}, {2, 3, 2}, 9);
  std::vector<IndexSet> nested{IndexSet({1, 2, 3}, 4), IndexSet({4, 5, 6, 8}, 16), IndexSet::full(64)};
  // Row 4 of level 2 has prefix 4, which is not in I_1.
  EXPECT_THROW((void)check_theorem_R_bounds(t, nested), PreconditionError);
  EXPECT_THROW((void)check_theorem_R_bounds(t, {IndexSet::full(4)}), PreconditionError);
}

TEST(CBounds, FullSamplingHoldsWithUnitParameters) {
  const TTTensor t = gaussian({5, 4, 3, 6}, {2, 3, 2}, 10);
  const auto records = check_theorem_C_bounds(t, full_rows(t), full_cols(t));
  ASSERT_EQ(records.size(), 3u);
  expect_all_hold(records);
  for (const auto& r : records) {
    EXPECT_NEAR(r.alpha, 1.0, 1e-10);
    EXPECT_NEAR(r.beta, 1.0, 1e-10);
  }
}

TEST(CRows, KroneckerOfPreviousLevel) {
  const TTTensor t = gaussian({4, 3, 3, 3}, {2, 3, 2}, 11);
  const std::vector<IndexSet> nested{IndexSet({1, 3}, 4), IndexSet({1, 7}, 12), IndexSet({1}, 36)};
  EXPECT_TRUE(c_rows(t, nested, 1).is_full());
  EXPECT_EQ(c_rows(t, nested, 2).indices(), (std::vector<std::uint64_t>{1, 3, 5, 7, 9, 11}));
  EXPECT_EQ(c_rows(t, nested, 3).indices(), (std::vector<std::uint64_t>{1, 7, 13, 19, 25, 31}));
}

TEST(Bounds, RandomTrialsAtDeskScaleHold) {
  const auto c = fixtures::small_config({20, 20, 20, 20}, {2, 3, 2}, 20, 123);
  for (GeneratorKind kind : {GeneratorKind::gaussian, GeneratorKind::hadamard, GeneratorKind::uniform}) {
    for (std::size_t trial = 1; trial <= c.trials; ++trial) {
      const TrialResult tr = run_trial(c, kind, trial);
      ASSERT_TRUE(tr.ok) << tr.error;
      EXPECT_EQ(tr.violations, 0u);
      EXPECT_EQ(tr.hypothesis_failures, 0u);
      for (const auto& rec : tr.records) {
        for (const auto& chk : rec.checks) {
          if (chk.exact) {
            EXPECT_LE(chk.lhs, chk.rhs * (1 + kExactSlack)) << chk.label;
          }
        }
      }
    }
  }
}
