#include "social_gym/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "social_gym/error.hpp"

namespace social_gym {

double quantile_sorted(std::span<const double> sorted, double p) {
  const double position = p * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const auto upper = std::min(lower + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(lower);
  return sorted[lower] + (sorted[upper] - sorted[lower]) * fraction;
}

Summary summarize(std::span<const TrialRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyRecords, "cannot summarize an empty record list");
  std::vector<double> counts;
  counts.reserve(records.size());
  std::size_t correct = 0;
  for (const auto& record : records) {
    counts.push_back(static_cast<double>(record.question_count));
    if (record.correct) ++correct;
  }
  std::sort(counts.begin(), counts.end());
  Summary summary;
  summary.n = records.size();
  // Integer counts: the sum is exact, so the mean does not depend on order.
  summary.mean = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
  summary.median = quantile_sorted(counts, 0.5);
  summary.q1 = quantile_sorted(counts, 0.25);
  summary.q3 = quantile_sorted(counts, 0.75);
  summary.min = counts.front();
  summary.max = counts.back();
  summary.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
  return summary;
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyRecords, "cannot draw a box without data");
  std::sort(values.begin(), values.end());
  BoxStats box;
  box.n = values.size();
  box.q1 = quantile_sorted(values, 0.25);
  box.median = quantile_sorted(values, 0.5);
  box.q3 = quantile_sorted(values, 0.75);
  box.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  const double reach = 1.5 * (box.q3 - box.q1);
  const double low_fence = box.q1 - reach;
  const double high_fence = box.q3 + reach;
  box.whisker_low = box.q1;
  box.whisker_high = box.q3;
  for (double v : values) {
    if (v < low_fence || v > high_fence) {
      box.outliers.push_back(v);
    } else {
      box.whisker_low = std::min(box.whisker_low, v);
      box.whisker_high = std::max(box.whisker_high, v);
    }
  }
  return box;
}

}  // namespace social_gym
