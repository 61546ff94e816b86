// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdint>
#include <limits>
#include <vector>

#include "majormark/errors.hpp"
#include "majormark/kmeans.hpp"
#include "majormark/splitmix.hpp"

namespace majormark {
namespace {

using Counts = std::vector<std::uint64_t>;

// Exhaustive oracle over all 2^n - 2 labellings, not just threshold cuts.
long double best_sse_any_partition(const Counts& c) {
  const std::size_t n = c.size();
  long double best = std::numeric_limits<long double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    long double s[2] = {0, 0}, q[2] = {0, 0}, k[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1u;
      s[g] += c[i];
      q[g] += static_cast<long double>(c[i]) * c[i];
      k[g] += 1;
    }
    best = std::min(best, q[0] - s[0] * s[0] / k[0] + q[1] - s[1] * s[1] / k[1]);
  }
  return best;
}

TEST(KMeans2, Examples) {
  EXPECT_EQ(kmeans2(Counts{10, 10, 0, 0}).high_cluster(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(kmeans2(Counts{9, 8, 1, 2, 8}).high_cluster(), (std::vector<std::size_t>{0, 1, 4}));
  try {
    kmeans2(Counts{5, 5, 5, 5});
    FAIL();
  } catch (const DegenerateClusteringError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateClustering);
    EXPECT_TRUE(e.is_decode_failure());
  }
  EXPECT_THROW(kmeans2(Counts{3}), Error);
}

TEST(KMeans2, EscapesLloydFixpoint) {
  // Lloyd from (min, max) settles on {0} | {1, 2, 2} (SSE 2/3); the optimum
  // is {0, 1} | {2, 2} (SSE 0.5).
  const TwoMeans r = kmeans2(Counts{0, 1, 2, 2});
  EXPECT_EQ(r.high_cluster(), (std::vector<std::size_t>{2, 3}));
  EXPECT_DOUBLE_EQ(r.sse, 0.5);
  EXPECT_DOUBLE_EQ(r.low_centroid, 0.5);
  EXPECT_DOUBLE_EQ(r.high_centroid, 2.0);
}

TEST(KMeans2, TieGoesToLowestCut) {
  // {0} | {1, 2} and {0, 1} | {2} both have SSE 0.5.
  EXPECT_EQ(kmeans2(Counts{0, 1, 2}).high_cluster(), (std::vector<std::size_t>{1, 2}));
}

TEST(KMeans2, OptimalAgainstAllPartitions) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    Counts c(n);
    for (auto& v : c) v = rng.below(trial % 2 ? 6 : 200);
    bool flat = true;
    for (auto v : c) flat = flat && v == c[0];
    if (flat) continue;
    const TwoMeans r = kmeans2(c);
    const long double best = best_sse_any_partition(c);
    ASSERT_NEAR(static_cast<double>(within_cluster_sse(c, r.labels)), static_cast<double>(best),
                1e-6);
    ASSERT_NEAR(r.sse, static_cast<double>(best), 1e-6);
    // High cluster strictly above the low cluster.
    std::uint64_t low_max = 0, high_min = ~std::uint64_t{0};
    for (std::size_t i = 0; i < n; ++i) {
      if (r.labels[i]) high_min = std::min(high_min, c[i]);
      else low_max = std::max(low_max, c[i]);
    }
    ASSERT_LT(low_max, high_min);
    ASSERT_EQ(r.high_size, r.high_cluster().size());
  }
}

TEST(KMeans2, LargeInputsUseHeapPath) {
  Counts c(200, 3);
  for (std::size_t i = 0; i < 50; ++i) c[i * 4] = 40;
  const TwoMeans r = kmeans2(c);
  EXPECT_EQ(r.high_size, 50u);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(r.labels[i], i % 4 == 0 ? 1 : 0);
}

TEST(WithinClusterSse, LengthMismatch) {
  const Counts c{1, 2, 3};
  const std::vector<std::uint8_t> labels{0, 1};
  EXPECT_THROW(within_cluster_sse(c, labels), Error);
}

}  // namespace
}  // namespace majormark
