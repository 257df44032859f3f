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

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "recfair/dataio.hpp"
#include "recfair/runs.hpp"

namespace recfair::effmetrics {

// Binary-relevance top-k measures. P@k and HR keep their unadjusted
// denominators even when a user has fewer than k test items; MAP divides by
// min(k, R_u); NDCG uses binary gains with the log2 discount.
enum class Measure { hr, mrr, precision, recall, map, ndcg };

inline constexpr std::array<Measure, 6> kAllMeasures = {
    Measure::hr,  Measure::mrr, Measure::precision,
    Measure::recall, Measure::map, Measure::ndcg};

std::string_view measure_name(Measure m);  // "HR","MRR","P","R","MAP","NDCG"
std::optional<Measure> parse_measure(std::string_view name);

// Per-user scores for one measure at cutoff k, defined only for the users
// with at least one test interaction and a recommendation list.
struct EffectivenessVector {
  Measure measure = Measure::precision;
  std::size_t k = 0;
  std::vector<std::uint32_t> users;  // evaluated user rows, ascending
  std::vector<double> scores;        // aligned with users, each in [0,1]
};

EffectivenessVector evaluate(const RankedRun& run,
                             const dataio::InteractionDataset& test,
                             Measure measure, std::size_t k);

// All six measures from one pass over the lists.
std::array<EffectivenessVector, 6> evaluate_all(
    const RankedRun& run, const dataio::InteractionDataset& test,
    std::size_t k);

// P@k of `user`'s test relevance on an arbitrary list (the envy utility
// primitive). Requires list size >= k.
double utility_on_list(std::uint32_t user, std::span<const std::uint32_t> list,
                       const dataio::InteractionDataset& test, std::size_t k);

}  // namespace recfair::effmetrics
