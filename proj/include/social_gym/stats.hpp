#pragma once

#include <span>
#include <vector>

#include "social_gym/game.hpp"

namespace social_gym {

// Quantile of sorted data by linear interpolation between closest ranks
// (inclusive method: position p * (n - 1)). `sorted` must be non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double accuracy = 0.0;

  bool operator==(const Summary&) const = default;
};

// Question-count statistics plus the fraction of correct guesses.
// Throws Error(EmptyRecords).
Summary summarize(std::span<const TrialRecord> records);

// Box-and-whisker geometry: whiskers reach the most extreme points within
// 1.5 * IQR of the box, anything beyond is an outlier.
struct BoxStats {
  std::size_t n = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> values);

}  // namespace social_gym
