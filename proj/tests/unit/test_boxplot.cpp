#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/lognormal_distribution.hpp>

#include <ttinherit/boxplot.hpp>
#include <ttinherit/errors.hpp>
#include <ttinherit/rng.hpp>

using namespace ttinherit;

TEST(Boxplot, FiveValues) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto s = summarize_boxplot(v, "x");
  EXPECT_EQ(s.median, 3);
  EXPECT_EQ(s.q1, 2);
  EXPECT_EQ(s.q3, 4);
  EXPECT_EQ(s.whisker_low, 1);
  EXPECT_EQ(s.whisker_high, 5);
  EXPECT_TRUE(s.outliers.empty());
  EXPECT_EQ(s.mean, 3);
  EXPECT_EQ(s.count, 5u);
  EXPECT_EQ(s.label, "x");
}

TEST(Boxplot, OneOutlier) {
  const std::vector<double> v{100, 2, 3, 1, 4};
  const auto s = summarize_boxplot(v);
  EXPECT_EQ(s.q1, 2);
  EXPECT_EQ(s.q3, 4);
  EXPECT_EQ(s.whisker_high, 4);
  EXPECT_EQ(s.whisker_low, 1);
  EXPECT_EQ(s.outliers, std::vector<double>{100});
  EXPECT_EQ(s.mean, 22);
}

TEST(Boxplot, ConstantAndSingleton) {
  const std::vector<double> c(7, 0.1);
  const auto s = summarize_boxplot(c);
  for (double f : {s.median, s.q1, s.q3, s.whisker_low, s.whisker_high, s.mean}) {
    EXPECT_EQ(f, 0.1);
  }
  EXPECT_TRUE(s.outliers.empty());
  const std::vector<double> one{2.5};
  const auto o = summarize_boxplot(one);
  EXPECT_EQ(o.median, 2.5);
  EXPECT_EQ(o.mean, 2.5);
  EXPECT_TRUE(o.outliers.empty());
}

TEST(Boxplot, EmptyThrows) { EXPECT_THROW((void)summarize_boxplot(std::vector<double>{}), DomainError); }

TEST(Boxplot, QuantileInterpolates) {
  const std::vector<double> v{1, 2, 4, 8};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 8.0);
}

TEST(Boxplot, InvariantsOnRandomInputs) {
  Rng rng = make_rng(derive_seed(3, StreamPurpose::test, {8}));
  boost::random::uniform_int_distribution<int> len(1, 60);
  boost::random::lognormal_distribution<double> val(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (double& x : v) {
      x = val(rng);
    }
    const auto s = summarize_boxplot(v);
    const double iqr = s.q3 - s.q1;
    EXPECT_LE(s.q1, s.median);
    EXPECT_LE(s.median, s.q3);
    EXPECT_GE(s.whisker_low, s.q1 - 1.5 * iqr);
    EXPECT_LE(s.whisker_high, s.q3 + 1.5 * iqr);
    EXPECT_NE(std::find(v.begin(), v.end(), s.whisker_low), v.end());
    EXPECT_NE(std::find(v.begin(), v.end(), s.whisker_high), v.end());
    std::size_t inside = 0;
    for (double x : v) {
      inside += x >= s.whisker_low && x <= s.whisker_high ? 1 : 0;
    }
    EXPECT_EQ(inside + s.outliers.size(), v.size());
    for (double o : s.outliers) {
      EXPECT_TRUE(o < s.whisker_low || o > s.whisker_high);
    }
  }
}
