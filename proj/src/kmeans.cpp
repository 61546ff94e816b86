// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/kmeans.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

#include "majormark/errors.hpp"

namespace majormark {

namespace {

constexpr std::size_t kStack = 64;

constexpr std::array<double, kStack + 1> kReciprocal = [] {
  std::array<double, kStack + 1> r{};
  for (std::size_t k = 1; k <= kStack; ++k) r[k] = 1.0 / static_cast<double>(k);
  return r;
}();

double reciprocal(std::size_t k) {
  return k <= kStack ? kReciprocal[k] : 1.0 / static_cast<double>(k);
}

// `sorted` holds the counts in ascending order; the split is a count threshold,
// so equal counts always land in the same cluster.
TwoMeans cut_sorted(std::span<const std::uint64_t> counts, std::span<const std::uint64_t> sorted) {
  const std::size_t n = counts.size();
  double total = 0.0;
  double total_sq = 0.0;
  for (std::uint64_t c : sorted) {
    const double v = static_cast<double>(c);
    total += v;
    total_sq += v * v;
  }
  // SSE of a split = sum(x^2) - S_lo^2 / n_lo - S_hi^2 / n_hi.
  std::size_t best_cut = 0;
  double best_sse = 0.0;
  double best_low_sum = 0.0;
  double low = 0.0;
  for (std::size_t cut = 1; cut < n; ++cut) {
    low += static_cast<double>(sorted[cut - 1]);
    if (sorted[cut - 1] == sorted[cut]) continue;
    const double high = total - low;
    const double sse = total_sq - low * low * reciprocal(cut) - high * high * reciprocal(n - cut);
    if (best_cut == 0 || sse < best_sse - 1e-9) {
      best_cut = cut;
      best_sse = sse;
      best_low_sum = low;
    }
  }

  const std::uint64_t threshold = sorted[best_cut - 1];
  TwoMeans out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = counts[i] > threshold ? 1 : 0;
  out.high_size = n - best_cut;
  out.low_centroid = best_low_sum * reciprocal(best_cut);
  out.high_centroid = (total - best_low_sum) * reciprocal(n - best_cut);
  out.sse = best_sse;
  return out;
}

}  // namespace

TwoMeans kmeans2(std::span<const std::uint64_t> counts) {
  const std::size_t n = counts.size();
  if (n < 2) throw Error(ErrorCode::kParameter, "kmeans2: need at least two values");
  const auto [min_it, max_it] = std::minmax_element(counts.begin(), counts.end());
  if (*min_it == *max_it) {
    throw DegenerateClusteringError(std::vector<std::uint64_t>(counts.begin(), counts.end()));
  }
  if (n <= kStack) {
    std::array<std::uint64_t, kStack> buffer;
    const auto sorted = std::span(buffer).first(n);
    std::copy(counts.begin(), counts.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    return cut_sorted(counts, sorted);
  }
  std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  return cut_sorted(counts, sorted);
}

std::vector<std::size_t> TwoMeans::high_cluster() const {
  std::vector<std::size_t> out;
  out.reserve(high_size);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) out.push_back(i);
  }
  return out;
}

double within_cluster_sse(std::span<const std::uint64_t> counts,
                          std::span<const std::uint8_t> labels) {
  if (counts.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "labels: length must match counts");
  }
  double sum[2] = {0.0, 0.0};
  double size[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    sum[labels[i] ? 1 : 0] += static_cast<double>(counts[i]);
    size[labels[i] ? 1 : 0] += 1.0;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int c = labels[i] ? 1 : 0;
    const double d = static_cast<double>(counts[i]) - sum[c] / size[c];
    sse += d * d;
  }
  return sse;
}

}  // namespace majormark
