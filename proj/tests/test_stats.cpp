#include <map>

#include <gtest/gtest.h>

#include "social_gym/random.hpp"
#include "social_gym/stats.hpp"
#include "test_support.hpp"

namespace social_gym {
namespace {

std::vector<TrialRecord> records_of(const std::vector<int>& counts, const std::vector<bool>& correct) {
  std::vector<TrialRecord> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    TrialRecord r;
    r.question_count = counts[i];
    r.correct = correct[i];
    r.trial_index = static_cast<int>(i);
    out.push_back(r);
  }
  return out;
}

// Second-pass implementation: histogram of integer counts, order statistics
// by cumulative rank, quartile positions in exact integer arithmetic.
Summary reference_summary(const std::vector<TrialRecord>& records) {
  std::map<int, std::size_t> histogram;
  long long total = 0;
  std::size_t correct = 0;
  for (const auto& r : records) {
    ++histogram[r.question_count];
    total += r.question_count;
    correct += r.correct ? 1 : 0;
  }
  const std::size_t n = records.size();
  auto at_rank = [&](std::size_t rank) {
    std::size_t seen = 0;
    for (const auto& [value, count] : histogram) {
      seen += count;
      if (rank < seen) return static_cast<double>(value);
    }
    return static_cast<double>(histogram.rbegin()->first);
  };
  auto quartile = [&](std::size_t k) {  // k quarters
    const std::size_t numerator = (n - 1) * k;
    const std::size_t lower = numerator / 4;
    const double fraction = static_cast<double>(numerator % 4) / 4.0;
    const double a = at_rank(lower);
    const double b = at_rank(std::min(lower + 1, n - 1));
    return a + (b - a) * fraction;
  };
  Summary s;
  s.n = n;
  s.mean = static_cast<double>(total) / static_cast<double>(n);
  s.median = quartile(2);
  s.q1 = quartile(1);
  s.q3 = quartile(3);
  s.min = histogram.begin()->first;
  s.max = histogram.rbegin()->first;
  s.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return s;
}

TEST(Summarize, HandFixture) {
  const auto s = summarize(records_of({3, 3, 4, 20}, {true, true, true, false}));
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.median, 3.5);
  EXPECT_DOUBLE_EQ(s.q1, 3.0);
  EXPECT_DOUBLE_EQ(s.q3, 8.0);
  EXPECT_DOUBLE_EQ(s.mean, 7.5);
  EXPECT_DOUBLE_EQ(s.min, 3.0);
  EXPECT_DOUBLE_EQ(s.max, 20.0);
  EXPECT_DOUBLE_EQ(s.accuracy, 0.75);
}

TEST(Summarize, OrderIndependent) {
  auto a = records_of({5, 1, 9, 2, 2, 7}, {true, false, true, true, false, true});
  auto b = a;
  std::reverse(b.begin(), b.end());
  EXPECT_EQ(summarize(a), summarize(b));
}

TEST(Summarize, SingleRecord) {
  const auto s = summarize(records_of({6}, {false}));
  EXPECT_EQ(s.median, 6.0);
  EXPECT_EQ(s.q1, 6.0);
  EXPECT_EQ(s.q3, 6.0);
  EXPECT_EQ(s.accuracy, 0.0);
}

TEST(Summarize, EmptyThrows) {
  EXPECT_ERROR_CODE(summarize(std::vector<TrialRecord>{}), ErrorCode::EmptyRecords);
}

TEST(Summarize, MatchesSecondPassOnRandomRecords) {
  Rng rng(77);
  for (int round = 0; round < 200; ++round) {
    const auto n = 1 + rng.below(120);
    std::vector<int> counts;
    std::vector<bool> correct;
    for (std::uint64_t i = 0; i < n; ++i) {
      counts.push_back(static_cast<int>(rng.below(21)));
      correct.push_back(rng.below(3) != 0);
    }
    const auto records = records_of(counts, correct);
    EXPECT_EQ(summarize(records), reference_summary(records)) << "round " << round;
  }
}

TEST(Quantile, Interpolates) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
}

TEST(Box, OneToNine) {
  const auto box = box_stats({9, 8, 7, 6, 5, 4, 3, 2, 1});
  EXPECT_EQ(box.q1, 3.0);
  EXPECT_EQ(box.median, 5.0);
  EXPECT_EQ(box.q3, 7.0);
  EXPECT_EQ(box.whisker_low, 1.0);
  EXPECT_EQ(box.whisker_high, 9.0);
  EXPECT_TRUE(box.outliers.empty());
}

TEST(Box, OutliersBeyondFences) {
  const auto box = box_stats({3, 3, 4, 4, 4, 5, 5, 20});
  // q1 3.75, q3 5, fence 6.875
  EXPECT_EQ(box.whisker_high, 5.0);
  EXPECT_EQ(box.whisker_low, 3.0);
  ASSERT_EQ(box.outliers.size(), 1u);
  EXPECT_EQ(box.outliers[0], 20.0);
}

}  // namespace
}  // namespace social_gym
