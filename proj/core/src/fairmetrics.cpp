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

#include "recfair/fairmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "recfair/parallel.hpp"

namespace recfair::fairmetrics {

namespace {
constexpr std::size_t kPairBlock = 1 << 14;
}

double puf(const simkit::PairwiseSimilarities& sims,
           std::span<const double> scores) {
  const std::size_t m = scores.size();
  if (m < 2) throw std::invalid_argument("puf needs at least 2 users");
  if (sims.m != m)
    throw std::invalid_argument("similarity/score dimension mismatch");
  for (double s : scores)
    if (!(s >= 0.0 && s <= 1.0))
      throw std::invalid_argument("effectiveness scores must lie in [0,1]");

  const std::size_t n_pairs = simkit::pair_count(m);
  const double sum = parallel_block_sum(
      n_pairs, kPairBlock, [&](std::size_t begin, std::size_t end) {
        auto [u, v] = simkit::condensed_pair(m, begin);
        double acc = 0.0;
        for (std::size_t idx = begin; idx < end; ++idx) {
          acc += sims.values[idx] * std::abs(scores[u] - scores[v]);
          if (++v == m) {
            ++u;
            v = u + 1;
          }
        }
        return acc;
      });
  return sum / static_cast<double>(n_pairs);
}

double sd(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("sd needs at least 1 score");
  const bool constant =
      std::all_of(scores.begin(), scores.end(),
                  [&](double s) { return s == scores.front(); });
  if (constant) return 0.0;  // keep the degenerate case exact
  const double n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  return std::sqrt(var / n);
}

std::optional<double> gini(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n < 2) throw std::invalid_argument("gini needs at least 2 scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += sorted[i];
    weighted += (2.0 * static_cast<double>(i + 1) - static_cast<double>(n) - 1.0) *
                sorted[i];
  }
  if (total == 0.0) return std::nullopt;
  return weighted / (static_cast<double>(n) * total);
}

EnvyStats envy_suite(const effmetrics::RankedRun& run,
                     const dataio::InteractionDataset& test, std::size_t k,
                     double epsilon, const std::vector<bool>& zero_relevance) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (k == 0 || k > run.k)
    throw std::invalid_argument("invalid cutoff for envy computation");

  std::vector<std::uint32_t> users;
  const std::size_t m = std::min(run.lists.size(), test.profiles.row_count());
  for (std::size_t u = 0; u < m; ++u)
    if (!test.profiles.rows[u].empty() && !run.lists[u].empty())
      users.push_back(static_cast<std::uint32_t>(u));
  const std::size_t me = users.size();
  if (me < 2) throw std::invalid_argument("envy needs at least 2 evaluated users");

  auto degraded = [&](std::uint32_t u) {
    return !zero_relevance.empty() && zero_relevance[u];
  };

  std::vector<double> mean_envy(me, 0.0), max_envy(me, 0.0);
  parallel_blocks(me, 8, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<bool> is_rel(test.profiles.cols, false);
    for (std::size_t a = begin; a < end; ++a) {
      const std::uint32_t u = users[a];
      if (degraded(u)) continue;  // zeroed relevance: utilities all 0
      for (std::uint32_t item : test.profiles.rows[u]) is_rel[item] = true;

      auto utility = [&](std::uint32_t owner) {
        if (degraded(owner)) return 0.0;
        const auto& list = run.lists[owner];
        std::size_t hits = 0;
        for (std::size_t r = 0; r < k; ++r)
          if (is_rel[list[r]]) ++hits;
        return static_cast<double>(hits) / static_cast<double>(k);
      };

      const double own = utility(u);
      double sum = 0.0, best = 0.0;
      for (std::size_t b = 0; b < me; ++b) {
        if (b == a) continue;
        const double envy = std::max(0.0, utility(users[b]) - own);
        sum += envy;
        best = std::max(best, envy);
      }
      mean_envy[a] = sum / static_cast<double>(me - 1);
      max_envy[a] = best;
      for (std::uint32_t item : test.profiles.rows[u]) is_rel[item] = false;
    }
  });

  EnvyStats stats;
  std::size_t envious = 0;
  for (std::size_t a = 0; a < me; ++a) {
    stats.me += mean_envy[a];
    stats.mme += max_envy[a];
    if (max_envy[a] > epsilon) ++envious;
  }
  stats.me /= static_cast<double>(me);
  stats.mme /= static_cast<double>(me);
  stats.peu = static_cast<double>(envious) / static_cast<double>(me);
  return stats;
}

namespace {

// Compact item-distance table for the items that actually appear in lists.
// Dense when small enough, recomputed per lookup otherwise.
class ItemDistances {
 public:
  ItemDistances(std::span<const std::vector<std::uint32_t>> lists,
                const BinaryMatrix& item_profiles)
      : profiles_(item_profiles) {
    local_.assign(item_profiles.row_count(), kUnmapped);
    for (const auto& list : lists)
      for (std::uint32_t item : list)
        if (local_[item] == kUnmapped) {
          local_[item] = static_cast<std::uint32_t>(items_.size());
          items_.push_back(item);
        }
    inv_norm_.resize(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const std::size_t deg = profiles_.rows[items_[i]].size();
      inv_norm_[i] = deg == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(deg));
    }
    const std::size_t r = items_.size();
    dense_ = r * r <= kDenseLimit;
    if (dense_) {
      table_.resize(r * r);
      parallel_blocks(r, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
          for (std::size_t j = 0; j < r; ++j)
            table_[i * r + j] = compute(i, j);
      });
    }
  }

  // Mean pairwise distance between the items of two lists, in [0,1].
  double list_distance(std::span<const std::uint32_t> a,
                       std::span<const std::uint32_t> b) const {
    double sum = 0.0;
    const std::size_t r = items_.size();
    for (std::uint32_t ia : a) {
      const std::uint32_t la = local_[ia];
      for (std::uint32_t ib : b) {
        const std::uint32_t lb = local_[ib];
        sum += dense_ ? table_[static_cast<std::size_t>(la) * r + lb]
                      : compute(la, lb);
      }
    }
    return sum / static_cast<double>(a.size() * b.size());
  }

 private:
  static constexpr std::uint32_t kUnmapped = 0xffffffffu;
  static constexpr std::size_t kDenseLimit = 64u * 1024u * 1024u;

  double compute(std::size_t i, std::size_t j) const {
    const auto& a = profiles_.rows[items_[i]];
    const auto& b = profiles_.rows[items_[j]];
    if (a.empty() || b.empty()) return 1.0;  // no interaction evidence
    const std::size_t inter = intersection_size(a, b);
    if (inter == a.size() && inter == b.size()) return 0.0;  // identical sets
    const double cos =
        static_cast<double>(inter) * inv_norm_[i] * inv_norm_[j];
    return std::clamp(1.0 - cos, 0.0, 1.0);
  }

  const BinaryMatrix& profiles_;
  std::vector<std::uint32_t> local_;
  std::vector<std::uint32_t> items_;
  std::vector<double> inv_norm_;
  std::vector<double> table_;
  bool dense_ = false;
};

}  // namespace

double uf(const simkit::PairwiseSimilarities& sims_raw,
          std::span<const std::vector<std::uint32_t>> lists,
          const BinaryMatrix& item_profiles) {
  const std::size_t m = lists.size();
  if (m < 3) throw std::invalid_argument("uf needs at least 3 users");
  if (sims_raw.m != m)
    throw std::invalid_argument("similarity/list dimension mismatch");

  double tau = 0.0;
  for (double v : sims_raw.values) tau += v;
  tau /= static_cast<double>(sims_raw.values.size());
  // The mean can drift a few ulps above the max when all values are equal;
  // clamping keeps the threshold admitting at least one pair.
  tau = std::min(tau, *std::max_element(sims_raw.values.begin(),
                                        sims_raw.values.end()));

  const ItemDistances distances(lists, item_profiles);

  const std::size_t n_pairs = simkit::pair_count(m);
  const double sum = parallel_block_sum(
      n_pairs, kPairBlock / 8, [&](std::size_t begin, std::size_t end) {
        auto [u, v] = simkit::condensed_pair(m, begin);
        double acc = 0.0;
        for (std::size_t idx = begin; idx < end; ++idx) {
          const double sim = sims_raw.values[idx];
          if (sim >= tau)
            acc += sim * distances.list_distance(lists[u], lists[v]);
          if (++v == m) {
            ++u;
            v = u + 1;
          }
        }
        return acc;
      });

  const double base = static_cast<double>(n_pairs);
  const double value = std::log1p(sum) / std::log(base);
  return std::min(1.0, value);
}

std::optional<double> FairnessReport::value(std::string_view name) const {
  for (const auto& [key, val] : entries)
    if (key == name) return val;
  return std::nullopt;
}

FairnessReport full_report(const effmetrics::RankedRun& run,
                           const dataio::InteractionDataset& test,
                           const BinaryMatrix& train_profiles, std::size_t k,
                           double epsilon, std::string run_id,
                           std::string dataset_id) {
  FairnessReport report;
  report.k = k;
  report.epsilon = epsilon;
  report.run_id = std::move(run_id);
  report.dataset_id = std::move(dataset_id);

  const auto eff = effmetrics::evaluate_all(run, test, k);
  const auto& users = eff[0].users;
  if (users.size() < 2)
    throw std::runtime_error("fairness report needs at least 2 evaluated users");

  for (const auto& v : eff) {
    double mean = 0.0;
    for (double s : v.scores) mean += s;
    mean /= static_cast<double>(v.scores.size());
    report.entries.emplace_back(std::string(measure_name(v.measure)), mean);
  }
  const auto& p_scores = eff[2].scores;
  const auto& ndcg_scores = eff[5].scores;

  const BinaryMatrix sub_profiles = select_rows(train_profiles, users);
  const auto cos_raw = simkit::cosine_similarities(sub_profiles);
  const auto jacc_raw = simkit::jaccard_similarities(sub_profiles);
  const auto cos_norm = simkit::minmax_normalize(cos_raw);
  const auto jacc_norm = simkit::minmax_normalize(jacc_raw);
  if (cos_norm.degenerate || jacc_norm.degenerate)
    report.warnings.push_back(
        "constant similarity values: min-max normalization mapped all pairs to 0");

  report.entries.emplace_back("SD-P", sd(p_scores));
  report.entries.emplace_back("SD-NDCG", sd(ndcg_scores));
  report.entries.emplace_back("Gini-P", gini(p_scores));
  report.entries.emplace_back("Gini-NDCG", gini(ndcg_scores));

  const EnvyStats envy = envy_suite(run, test, k, epsilon);
  report.entries.emplace_back("ME", envy.me);
  report.entries.emplace_back("MME", envy.mme);
  report.entries.emplace_back("PEU", envy.peu);

  std::vector<std::vector<std::uint32_t>> lists;
  lists.reserve(users.size());
  for (std::uint32_t u : users) lists.push_back(run.lists[u]);
  if (users.size() >= 3) {
    report.entries.emplace_back(
        "UF", uf(jacc_raw, lists, train_profiles.transposed()));
  } else {
    report.entries.emplace_back("UF", std::nullopt);
    report.warnings.push_back("UF undefined: needs at least 3 evaluated users");
  }

  report.entries.emplace_back("PUF-Prec-Cos", puf(cos_norm, p_scores));
  report.entries.emplace_back("PUF-Prec-Jacc", puf(jacc_norm, p_scores));
  report.entries.emplace_back("PUF-NDCG-Cos", puf(cos_norm, ndcg_scores));
  report.entries.emplace_back("PUF-NDCG-Jacc", puf(jacc_norm, ndcg_scores));
  return report;
}

std::string report_json(const FairnessReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["epsilon"] = report.epsilon;
  j["run_id"] = report.run_id;
  j["dataset_id"] = report.dataset_id;
  nlohmann::ordered_json measures;
  for (const auto& [key, val] : report.entries) {
    if (val)
      measures[key] = *val;
    else
      measures[key] = "undefined";
  }
  j["measures"] = std::move(measures);
  j["warnings"] = report.warnings;
  return j.dump(2);
}

FairnessReport report_from_json(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  FairnessReport report;
  report.k = j.at("k").get<std::size_t>();
  report.epsilon = j.at("epsilon").get<double>();
  report.run_id = j.at("run_id").get<std::string>();
  report.dataset_id = j.at("dataset_id").get<std::string>();
  for (const auto& [key, val] : j.at("measures").items()) {
    if (val.is_string()) {
      if (val.get<std::string>() != "undefined")
        throw std::runtime_error("unexpected measure value for " + key);
      report.entries.emplace_back(key, std::nullopt);
    } else {
      report.entries.emplace_back(key, val.get<double>());
    }
  }
  if (j.contains("warnings"))
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
  return report;
}

std::string report_csv(const FairnessReport& report) {
  std::ostringstream header, row;
  char buf[64];
  header << "run_id,dataset_id,k,epsilon";
  row << report.run_id << ',' << report.dataset_id << ',' << report.k << ',';
  std::snprintf(buf, sizeof buf, "%.17g", report.epsilon);
  row << buf;
  for (const auto& [key, val] : report.entries) {
    header << ',' << key;
    if (val) {
      std::snprintf(buf, sizeof buf, "%.17g", *val);
      row << ',' << buf;
    } else {
      row << ",undefined";
    }
  }
  return header.str() + "\n" + row.str() + "\n";
}

}  // namespace recfair::fairmetrics
