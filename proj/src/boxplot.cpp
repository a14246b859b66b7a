#include <ttinherit/boxplot.hpp>

#include <algorithm>
#include <cmath>

#include <ttinherit/errors.hpp>

namespace ttinherit {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw DomainError("quantile of an empty sample");
  }
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) {
    return sorted.back();
  }
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxplotSummary summarize_boxplot(std::span<const double> values, std::string label) {
  if (values.empty()) {
    throw DomainError("summarize_boxplot of an empty sample");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  BoxplotSummary s;
  s.label = std::move(label);
  s.count = sorted.size();
  s.median = quantile_sorted(sorted, 0.5);
  s.q1 = quantile_sorted(sorted, 0.25);
  s.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = s.q3 - s.q1;
  const double low_fence = s.q1 - 1.5 * iqr;
  const double high_fence = s.q3 + 1.5 * iqr;

  s.whisker_low = *std::find_if(sorted.begin(), sorted.end(), [&](double v) { return v >= low_fence; });
  s.whisker_high = *std::find_if(sorted.rbegin(), sorted.rend(), [&](double v) { return v <= high_fence; });
  for (const double v : sorted) {
    if (v < s.whisker_low || v > s.whisker_high) {
      s.outliers.push_back(v);
    }
  }
  // Shifted by the minimum so a constant sample has a mean equal to its value.
  const double base = sorted.front();
  double shifted = 0.0;
  for (const double v : sorted) {
    shifted += v - base;
  }
  s.mean = base + shifted / static_cast<double>(sorted.size());
  return s;
}

} // namespace ttinherit
