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

#include "recfair/effmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recfair::effmetrics {

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::hr: return "HR";
    case Measure::mrr: return "MRR";
    case Measure::precision: return "P";
    case Measure::recall: return "R";
    case Measure::map: return "MAP";
    case Measure::ndcg: return "NDCG";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (Measure m : kAllMeasures)
    if (measure_name(m) == name) return m;
  return std::nullopt;
}

namespace {

struct UserScores {
  double hr, mrr, p, r, map, ndcg;
};

// Discount table: inv_log[r] = 1/log2(r+2) for 0-based rank r.
std::vector<double> discounts(std::size_t k) {
  std::vector<double> inv_log(k);
  for (std::size_t r = 0; r < k; ++r)
    inv_log[r] = 1.0 / std::log2(static_cast<double>(r) + 2.0);
  return inv_log;
}

UserScores score_user(std::span<const std::uint32_t> list,
                      std::span<const std::uint32_t> rel, std::size_t k,
                      std::span<const double> inv_log) {
  const std::size_t r_u = rel.size();
  std::size_t hits = 0;
  std::size_t first_hit = 0;  // 1-based, 0 = none
  double ap_sum = 0.0;
  double dcg = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    if (!std::binary_search(rel.begin(), rel.end(), list[r])) continue;
    ++hits;
    if (first_hit == 0) first_hit = r + 1;
    ap_sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    dcg += inv_log[r];
  }
  const std::size_t ideal = std::min(k, r_u);
  double idcg = 0.0;
  for (std::size_t r = 0; r < ideal; ++r) idcg += inv_log[r];

  UserScores s{};
  s.hr = hits > 0 ? 1.0 : 0.0;
  s.mrr = first_hit == 0 ? 0.0 : 1.0 / static_cast<double>(first_hit);
  s.p = static_cast<double>(hits) / static_cast<double>(k);
  s.r = static_cast<double>(hits) / static_cast<double>(r_u);
  s.map = ap_sum / static_cast<double>(ideal);
  s.ndcg = idcg == 0.0 ? 0.0 : dcg / idcg;
  return s;
}

}  // namespace

std::array<EffectivenessVector, 6> evaluate_all(
    const RankedRun& run, const dataio::InteractionDataset& test,
    std::size_t k) {
  if (k == 0) throw std::invalid_argument("cutoff k must be >= 1");
  if (k > run.k) throw std::invalid_argument("cutoff k exceeds list length");

  std::array<EffectivenessVector, 6> out;
  for (std::size_t i = 0; i < 6; ++i) {
    out[i].measure = kAllMeasures[i];
    out[i].k = k;
  }

  const auto inv_log = discounts(k);
  const std::size_t m =
      std::min(run.lists.size(), test.profiles.row_count());
  for (std::size_t u = 0; u < m; ++u) {
    const auto& rel = test.profiles.rows[u];
    const auto& list = run.lists[u];
    if (rel.empty() || list.empty()) continue;  // not an evaluated user
    const UserScores s = score_user(list, rel, k, inv_log);
    const double values[6] = {s.hr, s.mrr, s.p, s.r, s.map, s.ndcg};
    for (std::size_t i = 0; i < 6; ++i) {
      out[i].users.push_back(static_cast<std::uint32_t>(u));
      out[i].scores.push_back(values[i]);
    }
  }
  return out;
}

EffectivenessVector evaluate(const RankedRun& run,
                             const dataio::InteractionDataset& test,
                             Measure measure, std::size_t k) {
  auto all = evaluate_all(run, test, k);
  for (auto& v : all)
    if (v.measure == measure) return std::move(v);
  throw std::invalid_argument("unknown measure");
}

double utility_on_list(std::uint32_t user, std::span<const std::uint32_t> list,
                       const dataio::InteractionDataset& test, std::size_t k) {
  if (list.size() < k)
    throw std::invalid_argument("list shorter than the cutoff");
  const auto& rel = test.profiles.rows[user];
  std::size_t hits = 0;
  for (std::size_t r = 0; r < k; ++r)
    if (std::binary_search(rel.begin(), rel.end(), list[r])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace recfair::effmetrics
