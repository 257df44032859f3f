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

#include "recfair/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "recfair/parallel.hpp"
#include "recfair/simkit.hpp"

namespace recfair::neighbors {

namespace {

struct Neighbor {
  double sim;
  std::uint32_t index;
};

// (sim desc, index asc) — a total order, so selections are reproducible.
bool better(const Neighbor& a, const Neighbor& b) {
  return a.sim != b.sim ? a.sim > b.sim : a.index < b.index;
}

std::vector<std::vector<Neighbor>> top_neighbors(
    const simkit::PairwiseSimilarities& sims, std::size_t count,
    bool keep_zero) {
  const std::size_t m = sims.m;
  std::vector<std::vector<Neighbor>> top(m);
  parallel_blocks(m, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<Neighbor> all;
    for (std::size_t u = begin; u < end; ++u) {
      all.clear();
      for (std::size_t v = 0; v < m; ++v) {
        if (v == u) continue;
        const double s = sims.at(u, v);
        if (keep_zero || s > 0.0)
          all.push_back({s, static_cast<std::uint32_t>(v)});
      }
      const std::size_t take = std::min(count, all.size());
      std::partial_sort(all.begin(), all.begin() + take, all.end(), better);
      top[u].assign(all.begin(), all.begin() + take);
    }
  });
  return top;
}

void pick_top_items(const std::vector<double>& score,
                    const std::vector<std::uint32_t>& exclude,
                    std::size_t cutoff, std::vector<std::uint32_t>& out_items,
                    std::vector<double>& out_scores) {
  std::vector<Neighbor> candidates;
  candidates.reserve(score.size() - exclude.size());
  for (std::uint32_t i = 0; i < score.size(); ++i)
    if (!std::binary_search(exclude.begin(), exclude.end(), i))
      candidates.push_back({score[i], i});
  if (candidates.size() < cutoff)
    throw std::runtime_error(
        "candidate pool smaller than the cutoff after excluding train items");
  std::partial_sort(candidates.begin(), candidates.begin() + cutoff,
                    candidates.end(), better);
  out_items.resize(cutoff);
  out_scores.resize(cutoff);
  for (std::size_t r = 0; r < cutoff; ++r) {
    out_items[r] = candidates[r].index;
    out_scores[r] = candidates[r].sim;
  }
}

}  // namespace

effmetrics::RankedRun recommend(const dataio::InteractionDataset& train,
                                const KnnConfig& cfg) {
  if (cfg.neighbors < 1 || cfg.cutoff < 1)
    throw std::invalid_argument("knn needs neighbors >= 1 and cutoff >= 1");
  const std::size_t m = train.user_count();
  const std::size_t n = train.item_count();
  if (m == 0 || n == 0) throw std::invalid_argument("empty train set");

  effmetrics::RankedRun run;
  run.k = cfg.cutoff;
  run.lists.resize(m);
  run.model_scores.resize(m);

  if (cfg.flavor == KnnFlavor::user) {
    if (m < 2) throw std::invalid_argument("user knn needs at least 2 users");
    const auto sims = simkit::cosine_similarities(train.profiles);
    // Zero-similarity neighbors stay in: they contribute nothing but keep
    // the top-K selection total, which pins the all-zero tie-break case.
    const auto top = top_neighbors(sims, cfg.neighbors, /*keep_zero=*/true);
    parallel_blocks(m, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
      std::vector<double> score(n);
      for (std::size_t u = begin; u < end; ++u) {
        std::fill(score.begin(), score.end(), 0.0);
        for (const Neighbor& nb : top[u])
          for (std::uint32_t item : train.profiles.rows[nb.index])
            score[item] += nb.sim;
        pick_top_items(score, train.profiles.rows[u], cfg.cutoff,
                       run.lists[u], run.model_scores[u]);
      }
    });
  } else {
    if (n < 2) throw std::invalid_argument("item knn needs at least 2 items");
    const BinaryMatrix item_profiles = train.profiles.transposed();
    const auto sims = simkit::cosine_similarities(item_profiles);
    const auto top = top_neighbors(sims, cfg.neighbors, /*keep_zero=*/false);
    parallel_blocks(m, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
      std::vector<double> score(n);
      for (std::size_t u = begin; u < end; ++u) {
        std::fill(score.begin(), score.end(), 0.0);
        for (std::uint32_t j : train.profiles.rows[u])
          for (const Neighbor& nb : top[j]) score[nb.index] += nb.sim;
        pick_top_items(score, train.profiles.rows[u], cfg.cutoff,
                       run.lists[u], run.model_scores[u]);
      }
    });
  }
  return run;
}

}  // namespace recfair::neighbors
