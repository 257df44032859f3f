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

#include "recfair/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "recfair/rng.hpp"

namespace recfair::labs {

namespace {

// Item sampler, uniform or Zipf-weighted over item rank.
class ItemSampler {
 public:
  ItemSampler(std::size_t universe, double skew) : universe_(universe) {
    if (skew > 0.0) {
      cumulative_.resize(universe);
      double acc = 0.0;
      for (std::size_t i = 0; i < universe; ++i) {
        acc += 1.0 / std::pow(static_cast<double>(i + 1), skew);
        cumulative_[i] = acc;
      }
    }
  }

  std::uint32_t draw(Rng& rng) const {
    if (cumulative_.empty())
      return static_cast<std::uint32_t>(uniform_below(rng, universe_));
    const double x = uniform01(rng) * cumulative_.back();
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

 private:
  std::size_t universe_;
  std::vector<double> cumulative_;
};

// `count` distinct items avoiding `taken`, by rejection.
std::vector<std::uint32_t> draw_distinct(Rng& rng, std::size_t count,
                                         std::size_t universe,
                                         const std::set<std::uint32_t>& taken,
                                         const ItemSampler& sampler) {
  if (count + taken.size() > universe)
    throw std::invalid_argument("item universe too small for distinct draw");
  std::set<std::uint32_t> chosen;
  while (chosen.size() < count) {
    const auto item = sampler.draw(rng);
    if (!taken.count(item)) chosen.insert(item);
  }
  return {chosen.begin(), chosen.end()};
}

std::vector<std::string> id_range(const char* prefix, std::size_t count) {
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    ids.push_back(prefix + std::to_string(i));
  return ids;
}

}  // namespace

SyntheticData synthetic_split(const SyntheticConfig& cfg) {
  if (cfg.users == 0 || cfg.items == 0)
    throw std::invalid_argument("synthetic split needs users and items");
  Rng rng(mix_seed(cfg.seed, 0xda7a));

  auto user_ids = id_range("u", cfg.users);
  auto item_ids = id_range("i", cfg.items);
  const ItemSampler sampler(cfg.items, cfg.popularity_skew);
  const ItemSampler test_sampler(
      cfg.items, cfg.test_popularity_skew < 0.0 ? cfg.popularity_skew
                                                : cfg.test_popularity_skew);

  std::vector<dataio::Interaction> train_rows, test_rows;
  for (std::size_t u = 0; u < cfg.users; ++u) {
    const std::size_t t_deg =
        std::max<std::size_t>(1, cfg.train_degree / 2 +
                                     uniform_below(rng, cfg.train_degree + 1));
    std::set<std::uint32_t> train_items;
    for (std::uint32_t item : draw_distinct(rng, t_deg, cfg.items, {}, sampler))
      train_items.insert(item);
    const std::size_t s_deg = 1 + uniform_below(rng, 2 * cfg.test_degree);
    const auto test_items =
        draw_distinct(rng, std::min(s_deg, cfg.items - train_items.size()),
                      cfg.items, train_items, test_sampler);
    for (std::uint32_t item : train_items)
      train_rows.push_back({user_ids[u], item_ids[item], 1.0, std::nullopt});
    for (std::uint32_t item : test_items)
      test_rows.push_back({user_ids[u], item_ids[item], 1.0, std::nullopt});
  }

  SyntheticData data;
  data.train = dataio::make_dataset(std::move(train_rows), user_ids, item_ids);
  data.test = dataio::make_dataset(std::move(test_rows), user_ids, item_ids);
  return data;
}

std::vector<dataio::Interaction> synthetic_interactions(std::size_t users,
                                                        std::size_t items,
                                                        std::size_t per_user,
                                                        std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x10c));
  std::vector<dataio::Interaction> out;
  constexpr std::int64_t kEpoch = 1500000000;
  for (std::size_t u = 0; u < users; ++u) {
    const std::size_t count = per_user + uniform_below(rng, per_user + 1);
    for (std::size_t c = 0; c < count; ++c) {
      dataio::Interaction it;
      it.user = "u" + std::to_string(u);
      it.item = "i" + std::to_string(uniform_below(rng, items));
      it.rating = 0.5 + 0.5 * static_cast<double>(uniform_below(rng, 10));
      it.timestamp = kEpoch + static_cast<std::int64_t>(uniform_below(rng, 1u << 20));
      out.push_back(std::move(it));
    }
  }
  return out;
}

effmetrics::RankedRun random_run(std::size_t users, std::size_t items,
                                 std::size_t k, std::uint64_t seed) {
  if (k > items) throw std::invalid_argument("cutoff exceeds item universe");
  Rng rng(mix_seed(seed, 0x9a));
  effmetrics::RankedRun run;
  run.k = k;
  run.lists.resize(users);
  run.model_scores.resize(users);
  for (std::size_t u = 0; u < users; ++u) {
    std::set<std::uint32_t> chosen;
    while (chosen.size() < k)
      chosen.insert(static_cast<std::uint32_t>(uniform_below(rng, items)));
    run.lists[u].assign(chosen.begin(), chosen.end());
    // chosen is ordered by index; shuffle so ranks are not index-correlated
    shuffle_in_place(run.lists[u], rng);
    run.model_scores[u].resize(k);
    for (std::size_t r = 0; r < k; ++r)
      run.model_scores[u][r] = static_cast<double>(k - r);
  }
  return run;
}

}  // namespace recfair::labs
