#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ttinherit {

/// Five-number summary plus mean, drawn as one box.
struct BoxplotSummary {
  std::string label;
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;  ///< smallest value >= q1 - 1.5 IQR
  double whisker_high = 0.0; ///< largest value <= q3 + 1.5 IQR
  std::vector<double> outliers;
  double mean = 0.0;

  friend bool operator==(const BoxplotSummary&, const BoxplotSummary&) = default;
};

/// Quantile of sorted data by linear interpolation at 0-based position (n-1) p.
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws DomainError on empty input. Quartiles use quantile_sorted; whiskers
/// are the most extreme data points within 1.5 IQR of the box; the remaining
/// points (ascending) are outliers.
BoxplotSummary summarize_boxplot(std::span<const double> values, std::string label = {});

inline constexpr const char* kQuartileMethod =
    "linear interpolation between order statistics at 1-based position 1+(n-1)p";

} // namespace ttinherit
