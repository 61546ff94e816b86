// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace majormark {

struct TwoMeans {
  /// 1 for members of the high-mean cluster, 0 otherwise.
  std::vector<std::uint8_t> labels;
  std::size_t high_size = 0;
  double low_centroid = 0.0;
  double high_centroid = 0.0;
  /// Within-cluster sum of squared deviations.
  double sse = 0.0;

  /// Indices of the high-mean cluster, ascending.
  std::vector<std::size_t> high_cluster() const;
};

/// Exact one-dimensional 2-means. Optimal 1-D 2-means partitions are
/// threshold cuts of the sorted values, so every cut between distinct values
/// is scored with prefix sums and the lowest SSE wins (the lowest cut on
/// ties). Lloyd iteration from (min, max) can stall in a worse fixpoint, e.g.
/// {0, 1, 2, 2}.
///
/// Throws DegenerateClusteringError when every count is equal and
/// Error(kParameter) for fewer than two values.
TwoMeans kmeans2(std::span<const std::uint64_t> counts);

/// Within-cluster sum of squared deviations for a labelling.
double within_cluster_sse(std::span<const std::uint64_t> counts,
                          std::span<const std::uint8_t> labels);

}  // namespace majormark
