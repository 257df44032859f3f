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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recfair/effmetrics.hpp"
#include "recfair/simkit.hpp"

namespace recfair::fairmetrics {

// Pairwise user unfairness: mean over unordered user pairs of
// sim(u,u') * |S(u) - S(u')|, in [0,1] for normalized similarities and
// scores in [0,1]. Lower is fairer. Expects min-max-normalized similarities
// (callers that pass raw values should surface a warning, see full_report).
double puf(const simkit::PairwiseSimilarities& sims,
           std::span<const double> scores);

// Population standard deviation of the per-user scores.
double sd(std::span<const double> scores);

// Gini index over ascending-sorted scores; nullopt when every score is zero
// (the distribution has no mass to compare).
std::optional<double> gini(std::span<const double> scores);

struct EnvyStats {
  double me = 0.0;   // mean over users of mean positive envy toward others
  double mme = 0.0;  // mean over users of max envy
  double peu = 0.0;  // fraction of users whose max envy exceeds epsilon
};

// Envy of u toward u' is max(0, P@k of u on L_u' - P@k of u on L_u),
// computed over users with test interactions and lists. `zero_relevance`,
// when non-empty, is aligned with user rows and marks users whose
// recommendations carry no relevance for anyone (the degraded users of the
// relevance-sweep protocol): their utilities on any list, and anyone's
// utility on their list, are zero.
EnvyStats envy_suite(const effmetrics::RankedRun& run,
                     const dataio::InteractionDataset& test, std::size_t k,
                     double epsilon,
                     const std::vector<bool>& zero_relevance = {});

// Distance-based unfairness over similar user pairs (reference formulation;
// the original measure's exact equation is published elsewhere):
//   tau  = mean pairwise similarity,
//   P    = pairs with sim >= tau,
//   D    = mean cosine distance between the item profile vectors of the two
//          lists' items (k*k pairs, each in [0,1]),
//   UF   = min(1, log_B(1 + sum_{P} sim * D)), B = C(m,2).
// Independent of test relevance by construction. Requires m >= 3.
// `item_profiles` holds one row per item (the transposed train matrix).
double uf(const simkit::PairwiseSimilarities& sims_raw,
          std::span<const std::vector<std::uint32_t>> lists,
          const BinaryMatrix& item_profiles);

// One run's full fairness + effectiveness table. Entries keep a fixed order;
// a missing value (Gini over all-zero scores) is explicit.
struct FairnessReport {
  std::size_t k = 0;
  double epsilon = 0.0;
  std::string run_id;
  std::string dataset_id;
  std::vector<std::pair<std::string, std::optional<double>>> entries;
  std::vector<std::string> warnings;

  std::optional<double> value(std::string_view name) const;
};

// Computes the six effectiveness means plus all twelve fairness entries.
// Similarities come from the train profiles of the evaluated users and are
// min-max normalized before PUF; UF consumes the raw Jaccard similarities.
FairnessReport full_report(const effmetrics::RankedRun& run,
                           const dataio::InteractionDataset& test,
                           const BinaryMatrix& train_profiles, std::size_t k,
                           double epsilon, std::string run_id = "",
                           std::string dataset_id = "");

// JSON with an explicit "undefined" sentinel for missing entries.
std::string report_json(const FairnessReport& report);
FairnessReport report_from_json(const std::string& text);

// Two-line CSV (header + row), measure columns in report order.
std::string report_csv(const FairnessReport& report);

}  // namespace recfair::fairmetrics
