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

#pragma once

#include <cstdint>

#include "recfair/dataio.hpp"
#include "recfair/runs.hpp"

namespace recfair::labs {

// Seeded sparse train/test pair over a shared universe. Per-user degrees are
// jittered around the configured base so effectiveness distributions are not
// flat: train in [base/2, 3*base/2], test in [1, 2*base]. popularity_skew
// draws items Zipf-like (weight 1/(rank+1)^skew); 0 keeps draws uniform.
struct SyntheticConfig {
  std::size_t users = 1000;
  std::size_t items = 2000;
  std::size_t train_degree = 16;
  std::size_t test_degree = 6;
  std::uint64_t seed = 1;
  double popularity_skew = 0.0;
  // test draws may skew harder than train (negative = same as train)
  double test_popularity_skew = -1.0;
};

struct SyntheticData {
  dataio::InteractionDataset train;
  dataio::InteractionDataset test;
};

SyntheticData synthetic_split(const SyntheticConfig& cfg);

// Raw timestamped interaction log (with duplicates and sub-threshold ratings)
// for end-to-end pipeline tests through load/preprocess/split.
std::vector<dataio::Interaction> synthetic_interactions(std::size_t users,
                                                        std::size_t items,
                                                        std::size_t per_user,
                                                        std::uint64_t seed);

// Uniform random run: k distinct items per user, descending synthetic scores.
effmetrics::RankedRun random_run(std::size_t users, std::size_t items,
                                 std::size_t k, std::uint64_t seed);

}  // namespace recfair::labs
