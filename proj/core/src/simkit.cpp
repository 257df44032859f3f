// Copyright 2026 The recfair authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "recfair/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "recfair/parallel.hpp"
#include "recfair/rng.hpp"

namespace recfair::simkit {

namespace {

constexpr std::size_t kPairBlock = 1 << 14;

template <typename PairFn>
PairwiseSimilarities pairwise_over_profiles(const BinaryMatrix& profiles,
                                            SimilarityKind kind,
                                            PairFn&& pair_value) {
  const std::size_t m = profiles.row_count();
  if (m < 2)
    throw std::invalid_argument("pairwise similarity needs at least 2 users");

  PairwiseSimilarities sims;
  sims.m = m;
  sims.kind = kind;
  sims.values.resize(pair_count(m));

  parallel_blocks(sims.values.size(), kPairBlock,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    auto [u, v] = condensed_pair(m, begin);
                    for (std::size_t idx = begin; idx < end; ++idx) {
                      sims.values[idx] = pair_value(u, v);
                      if (++v == m) {
                        ++u;
                        v = u + 1;
                      }
                    }
                  });
  return sims;
}

}  // namespace

PairwiseSimilarities cosine_similarities(const BinaryMatrix& profiles) {
  std::vector<double> inv_norm(profiles.row_count());
  for (std::size_t u = 0; u < profiles.row_count(); ++u) {
    const std::size_t deg = profiles.rows[u].size();
    inv_norm[u] = deg == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(deg));
  }
  return pairwise_over_profiles(
      profiles, SimilarityKind::cosine, [&](std::size_t u, std::size_t v) {
        const std::size_t inter =
            intersection_size(profiles.rows[u], profiles.rows[v]);
        return static_cast<double>(inter) * inv_norm[u] * inv_norm[v];
      });
}

PairwiseSimilarities jaccard_similarities(const BinaryMatrix& profiles) {
  return pairwise_over_profiles(
      profiles, SimilarityKind::jaccard, [&](std::size_t u, std::size_t v) {
        const std::size_t inter =
            intersection_size(profiles.rows[u], profiles.rows[v]);
        const std::size_t uni =
            profiles.rows[u].size() + profiles.rows[v].size() - inter;
        return uni == 0 ? 0.0
                        : static_cast<double>(inter) / static_cast<double>(uni);
      });
}

bool minmax_normalize_values(std::vector<double>& values) {
  if (values.empty()) return true;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) {
    std::fill(values.begin(), values.end(), 0.0);
    return false;
  }
  const double scale = 1.0 / (hi - lo);
  for (double& v : values) v = (v - lo) * scale;
  return true;
}

PairwiseSimilarities minmax_normalize(PairwiseSimilarities sims) {
  sims.degenerate = !minmax_normalize_values(sims.values);
  sims.normalized = true;
  return sims;
}

std::vector<double> sample_weibull(double lambda, std::size_t count,
                                   std::uint64_t seed) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("weibull shape must be positive");
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  Rng rng(seed);
  const double inv_lambda = 1.0 / lambda;
  std::vector<double> out(count);
  for (double& x : out) {
    const double u = uniform01(rng);
    x = std::pow(-std::log1p(-u), inv_lambda);
  }
  return out;
}

std::vector<double> sample_normal(std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  Rng rng(seed);
  std::vector<double> out(count);
  for (double& x : out) x = normal01(rng);
  return out;
}

std::optional<double> skewness(std::span<const double> values) {
  if (values.size() < 3) return std::nullopt;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 == 0.0) return std::nullopt;
  return m3 / (m2 * std::sqrt(m2));
}

PairwiseSimilarities assign_sorted(std::span<const double> sims,
                                   std::span<const double> diffs,
                                   AssignMode mode) {
  if (sims.size() != diffs.size())
    throw std::invalid_argument(
        "similarity and difference vectors must have equal length");
  const std::size_t n = sims.size();

  std::vector<double> sims_desc(sims.begin(), sims.end());
  std::sort(sims_desc.begin(), sims_desc.end(), std::greater<double>());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (mode == AssignMode::most_fair) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return diffs[a] < diffs[b];
    });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return diffs[a] > diffs[b];
    });
  }

  PairwiseSimilarities out;
  out.m = maybe_users_for_pair_count(n);  // 0 when the length is not C(m,2)
  out.kind = SimilarityKind::synthetic;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[order[i]] = sims_desc[i];

  const auto [lo, hi] =
      std::minmax_element(out.values.begin(), out.values.end());
  out.normalized = n > 0 && *lo >= 0.0 && *hi <= 1.0;
  return out;
}

}  // namespace recfair::simkit
