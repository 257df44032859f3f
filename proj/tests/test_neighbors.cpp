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
#include <set>

#include <doctest.h>

#include "recfair/parallel.hpp"
#include "recfair/rng.hpp"
#include "recfair/synthetic.hpp"

using namespace recfair;
using namespace recfair::neighbors;

namespace {

dataio::InteractionDataset train_of(
    std::size_t items, std::vector<std::vector<std::uint32_t>> profiles) {
  std::vector<std::string> user_ids, item_ids;
  for (std::size_t u = 0; u < profiles.size(); ++u)
    user_ids.push_back("u" + std::to_string(u));
  for (std::size_t i = 0; i < items; ++i)
    item_ids.push_back("i" + std::to_string(i));
  std::vector<dataio::Interaction> rows;
  for (std::size_t u = 0; u < profiles.size(); ++u)
    for (std::uint32_t i : profiles[u])
      rows.push_back({user_ids[u], item_ids[i], std::nullopt, std::nullopt});
  return dataio::make_dataset(std::move(rows), user_ids, item_ids);
}

}  // namespace

TEST_CASE("u-knn ranks a similar user's extra item first") {
  // u0 and u1 share items 0,1; u1 additionally holds item 2
  const auto train = train_of(5, {{0, 1}, {0, 1, 2}});
  const auto run = recommend(train, {KnnFlavor::user, 1, 2});
  CHECK(run.lists[0][0] == 2);  // the only positively scored candidate
  CHECK(run.lists[0][1] == 3);  // zero-score tie broken by item index
}

TEST_CASE("a user with no overlap gets the deterministic index-order list") {
  const auto train = train_of(8, {{0, 1}, {2, 3}, {2, 3}});
  const auto run = recommend(train, {KnnFlavor::user, 2, 3});
  // u0 is disjoint from everyone: all scores zero, candidates by index
  CHECK(run.lists[0] == std::vector<std::uint32_t>{2, 3, 4});
  CHECK(run.model_scores[0] == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("u-knn scores match a hand-evaluated 4x5 instance") {
  // profiles over items 0..4
  const std::vector<std::vector<std::uint32_t>> profiles = {
      {0, 1}, {0, 2}, {1, 2, 3}, {3, 4}};
  const auto train = train_of(5, profiles);
  const auto run = recommend(train, {KnnFlavor::user, 2, 2});

  // cosine rows for u0: sim(0,1) = 1/2, sim(0,2) = 1/sqrt(6), sim(0,3) = 0;
  // top-2 neighbors of u0: u1 (0.5), u2 (0.40824...)
  const double s01 = 0.5, s02 = 1.0 / std::sqrt(6.0);
  // candidate scores for u0 (items 2,3,4): item2 = s01 + s02, item3 = s02,
  // item4 = 0 -> top-2 = {2, 3}
  CHECK(run.lists[0] == std::vector<std::uint32_t>{2, 3});
  CHECK(run.model_scores[0][0] == doctest::Approx(s01 + s02).epsilon(1e-12));
  CHECK(run.model_scores[0][1] == doctest::Approx(s02).epsilon(1e-12));

  // u3: sim(3,0)=0, sim(3,1)=0, sim(3,2)=1/sqrt(6); top-2 = {u2, u0 (zero)}
  // candidates (0,1,2): item1 = s02 (from u2), item2 = s02, item0 = 0
  // order: score desc then index asc -> {1, 2}
  CHECK(run.lists[3] == std::vector<std::uint32_t>{1, 2});
  CHECK(run.model_scores[3][0] == doctest::Approx(s02).epsilon(1e-12));
}

TEST_CASE("i-knn spreads similarity from each train item's neighbor list") {
  // items: 0 and 1 co-occur for users {0,1}; item 2 belongs to u2 alone
  const std::vector<std::vector<std::uint32_t>> profiles = {
      {0, 1}, {0, 1, 2}, {2, 3}};
  const auto train = train_of(4, profiles);
  const auto run = recommend(train, {KnnFlavor::item, 3, 1});

  // u0 holds {0,1}. Item columns: c0={0,1}, c1={0,1}, c2={1,2}, c3={2}.
  // sim(0,1)=1, sim(0,2)=1/2, sim(1,2)=1/2, sim(2,3)=1/sqrt(2), others 0.
  // score(u0, 2) = sim(2,0) + sim(2,1) = 1/2 + 1/2 = 1; item 3 scores 0.
  CHECK(run.lists[0] == std::vector<std::uint32_t>{2});
  CHECK(run.model_scores[0][0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lists hold exactly cutoff distinct non-train items") {
  const auto data = labs::synthetic_split({40, 60, 8, 4, 11});
  const auto run = recommend(data.train, {KnnFlavor::user, 10, 7});
  effmetrics::validate_run(run, &data.train.profiles);  // throws on violation
  for (const auto& list : run.lists) CHECK(list.size() == 7);

  const auto run_i = recommend(data.train, {KnnFlavor::item, 10, 7});
  effmetrics::validate_run(run_i, &data.train.profiles);
}

TEST_CASE("recommendation is deterministic across thread counts") {
  const auto data = labs::synthetic_split({60, 80, 10, 4, 5});
  set_thread_count(1);
  const auto serial = recommend(data.train, {KnnFlavor::user, 8, 5});
  set_thread_count(8);
  const auto parallel = recommend(data.train, {KnnFlavor::user, 8, 5});
  set_thread_count(0);
  CHECK(serial.lists == parallel.lists);
  CHECK(serial.model_scores == parallel.model_scores);
}

TEST_CASE("u-knn with K=m-1 and equal similarities is popularity ranking") {
  SUBCASE("two users") {
    const auto train = train_of(6, {{0, 1}, {0, 2}});
    const auto run = recommend(train, {KnnFlavor::user, 1, 2});
    // u0's candidates by popularity among other users: item2 (1), rest 0
    CHECK(run.lists[0] == std::vector<std::uint32_t>{2, 3});
  }
  SUBCASE("star overlap: every pair shares exactly the hub item") {
    // users {c, x_u}: all pairwise cosines equal 1/2
    std::vector<std::vector<std::uint32_t>> profiles;
    for (std::uint32_t u = 0; u < 4; ++u) profiles.push_back({0, u + 1});
    const auto train = train_of(6, profiles);
    const auto run = recommend(train, {KnnFlavor::user, 3, 3});
    // for u0, every other user's satellite scores 0.5; popularity of each
    // satellite is 1, ties resolve by index: {2, 3, 4}
    CHECK(run.lists[0] == std::vector<std::uint32_t>{2, 3, 4});
    std::vector<std::size_t> popularity(6, 0);
    for (const auto& p : profiles)
      for (auto i : p) ++popularity[i];
    // scores proportional to popularity over non-train candidates
    for (std::size_t r = 1; r < 3; ++r)
      CHECK(popularity[run.lists[0][r - 1]] >= popularity[run.lists[0][r]]);
  }
}

TEST_CASE("a cutoff larger than the candidate pool is an error") {
  const auto train = train_of(3, {{0, 1}, {1, 2}});
  CHECK_THROWS(recommend(train, {KnnFlavor::user, 1, 2}));  // only 1 candidate
  CHECK_THROWS(recommend(train, {KnnFlavor::user, 0, 1}));  // bad config
}
