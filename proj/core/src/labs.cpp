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

#include "recfair/labs.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "recfair/rng.hpp"

namespace recfair::labs {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Shared scaffolding of the relevance-variation protocols: the fixed initial
// run, base per-measure scores, degradation schedule, and train-derived
// Jaccard similarities over the evaluated users.
struct SweepCore {
  std::size_t k = 0;
  double step_fraction = 0.1;
  std::size_t steps = 10;
  std::vector<std::uint32_t> users;                    // evaluated rows
  std::vector<std::vector<std::uint32_t>> eval_lists;  // aligned with users
  effmetrics::RankedRun run;                           // full width
  std::vector<std::size_t> degrade_order;              // positions into users
  std::array<std::vector<double>, 6> base;             // per-measure scores
  simkit::PairwiseSimilarities jacc_raw;
  simkit::PairwiseSimilarities jacc_norm;
  BinaryMatrix item_profiles;

  std::size_t degraded_at(std::size_t point) const {
    if (point >= steps) return users.size();
    return static_cast<std::size_t>(std::llround(
        static_cast<double>(point) * step_fraction *
        static_cast<double>(users.size())));
  }
};

SweepCore build_sweep_core(const dataio::InteractionDataset& train,
                           const dataio::InteractionDataset& test,
                           std::size_t k, double step_fraction,
                           std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("cutoff k must be >= 1");
  if (!(step_fraction > 0.0 && step_fraction <= 1.0))
    throw std::invalid_argument("step fraction must lie in (0,1]");

  SweepCore core;
  core.k = k;
  core.step_fraction = step_fraction;
  core.steps = static_cast<std::size_t>(std::llround(1.0 / step_fraction));

  const std::size_t m = test.profiles.row_count();
  const std::size_t n = test.profiles.cols;
  for (std::size_t u = 0; u < m; ++u)
    if (!test.profiles.rows[u].empty())
      core.users.push_back(static_cast<std::uint32_t>(u));
  const std::size_t me = core.users.size();
  if (me < 3)
    throw std::runtime_error("relevance sweep needs at least 3 test users");

  Rng rng(mix_seed(seed, 2));
  core.run.k = k;
  core.run.lists.resize(m);
  for (std::uint32_t u : core.users) {
    const auto& rel = test.profiles.rows[u];
    std::vector<std::uint32_t> list;
    if (rel.size() >= k) {
      list.assign(rel.begin(), rel.end());
      shuffle_in_place(list, rng);
      list.resize(k);
    } else {
      if (n - rel.size() < k - rel.size())
        throw std::runtime_error("item universe too small for irrelevant fill");
      list.assign(rel.begin(), rel.end());  // relevant items lead the ranking
      std::set<std::uint32_t> used(rel.begin(), rel.end());
      while (list.size() < k) {
        const auto item = static_cast<std::uint32_t>(uniform_below(rng, n));
        if (used.insert(item).second) list.push_back(item);
      }
    }
    core.run.lists[u] = std::move(list);
    core.eval_lists.push_back(core.run.lists[u]);
  }

  const auto eff = effmetrics::evaluate_all(core.run, test, k);
  for (std::size_t i = 0; i < 6; ++i) core.base[i] = eff[i].scores;

  core.degrade_order.resize(me);
  for (std::size_t i = 0; i < me; ++i) core.degrade_order[i] = i;
  shuffle_in_place(core.degrade_order, rng);

  const BinaryMatrix sub = select_rows(train.profiles, core.users);
  core.jacc_raw = simkit::jaccard_similarities(sub);
  core.jacc_norm = simkit::minmax_normalize(core.jacc_raw);
  core.item_profiles = train.profiles.transposed();
  return core;
}

std::vector<double> pair_abs_diffs(std::span<const double> scores) {
  const std::size_t me = scores.size();
  std::vector<double> diffs(simkit::pair_count(me));
  std::size_t idx = 0;
  for (std::size_t u = 0; u + 1 < me; ++u)
    for (std::size_t v = u + 1; v < me; ++v)
      diffs[idx++] = std::abs(scores[u] - scores[v]);
  return diffs;
}

}  // namespace

ExperimentTrace relevance_sweep(const dataio::InteractionDataset& train,
                                const dataio::InteractionDataset& test,
                                std::size_t k, double step_fraction,
                                std::uint64_t seed, double epsilon) {
  SweepCore core = build_sweep_core(train, test, k, step_fraction, seed);
  const std::size_t me = core.users.size();

  ExperimentTrace trace;
  trace.protocol = "relevance_sweep";
  trace.seed = seed;
  trace.config = "k=" + std::to_string(k) + ";step=" + fmt(step_fraction) +
                 ";epsilon=" + fmt(epsilon);

  std::vector<bool> zero_rel(core.run.lists.size(), false);
  std::array<std::vector<double>, 6> masked = core.base;
  std::size_t marked = 0;

  for (std::size_t point = 0; point <= core.steps; ++point) {
    const std::size_t count = core.degraded_at(point);
    for (; marked < count; ++marked) {
      const std::size_t pos = core.degrade_order[marked];
      zero_rel[core.users[pos]] = true;
      for (auto& scores : masked) scores[pos] = 0.0;
    }

    TracePoint pt;
    pt.x = static_cast<double>(point) * step_fraction;
    for (std::size_t i = 0; i < 6; ++i)
      pt.entries.emplace_back(
          std::string(effmetrics::measure_name(effmetrics::kAllMeasures[i])),
          mean(masked[i]));
    const auto& p_scores = masked[2];
    const auto& n_scores = masked[5];
    pt.entries.emplace_back("SD-P", fairmetrics::sd(p_scores));
    pt.entries.emplace_back("SD-NDCG", fairmetrics::sd(n_scores));
    pt.entries.emplace_back("Gini-P", fairmetrics::gini(p_scores));
    pt.entries.emplace_back("Gini-NDCG", fairmetrics::gini(n_scores));
    const auto envy = fairmetrics::envy_suite(core.run, test, k, epsilon, zero_rel);
    pt.entries.emplace_back("ME", envy.me);
    pt.entries.emplace_back("MME", envy.mme);
    pt.entries.emplace_back("PEU", envy.peu);
    pt.entries.emplace_back(
        "UF", fairmetrics::uf(core.jacc_raw, core.eval_lists, core.item_profiles));
    pt.entries.emplace_back("PUF-Prec-Jacc",
                            fairmetrics::puf(core.jacc_norm, p_scores));
    pt.entries.emplace_back("PUF-NDCG-Jacc",
                            fairmetrics::puf(core.jacc_norm, n_scores));
    trace.points.push_back(std::move(pt));
  }
  (void)me;
  return trace;
}

ExperimentTrace extreme_case(const dataio::InteractionDataset& train,
                             const dataio::InteractionDataset& test,
                             std::size_t k, double step_fraction,
                             double lambda, simkit::AssignMode mode,
                             std::uint64_t seed) {
  SweepCore core = build_sweep_core(train, test, k, step_fraction, seed);
  const std::size_t me = core.users.size();
  const std::size_t n_pairs = simkit::pair_count(me);

  ExperimentTrace trace;
  trace.protocol = "extreme_case";
  trace.seed = seed;
  trace.config =
      "k=" + std::to_string(k) + ";step=" + fmt(step_fraction) + ";lambda=" +
      fmt(lambda) + ";mode=" +
      (mode == simkit::AssignMode::most_fair ? "most_fair" : "most_unfair");

  std::vector<double> masked_p = core.base[2];
  std::vector<double> masked_n = core.base[5];
  std::size_t marked = 0;

  for (std::size_t point = 0; point <= core.steps; ++point) {
    const std::size_t count = core.degraded_at(point);
    for (; marked < count; ++marked) {
      const std::size_t pos = core.degrade_order[marked];
      masked_p[pos] = 0.0;
      masked_n[pos] = 0.0;
    }

    // Identical multiset across modes at a given point: the draw depends on
    // (seed, point) only.
    auto samples =
        simkit::sample_weibull(lambda, n_pairs, mix_seed(seed, 4627 + point));
    simkit::minmax_normalize_values(samples);

    const auto assigned_p =
        simkit::assign_sorted(samples, pair_abs_diffs(masked_p), mode);
    const auto assigned_n =
        simkit::assign_sorted(samples, pair_abs_diffs(masked_n), mode);

    TracePoint pt;
    pt.x = static_cast<double>(point) * step_fraction;
    pt.entries.emplace_back("PUF-Prec", fairmetrics::puf(assigned_p, masked_p));
    pt.entries.emplace_back("PUF-NDCG", fairmetrics::puf(assigned_n, masked_n));
    pt.entries.emplace_back(
        "UF-Prec",
        fairmetrics::uf(assigned_p, core.eval_lists, core.item_profiles));
    pt.entries.emplace_back(
        "UF-NDCG",
        fairmetrics::uf(assigned_n, core.eval_lists, core.item_profiles));
    trace.points.push_back(std::move(pt));
  }
  return trace;
}

ExperimentTrace similarity_sweep(const dataio::InteractionDataset& train,
                                 const dataio::InteractionDataset& test,
                                 const effmetrics::RankedRun& run,
                                 std::size_t k,
                                 std::span<const double> lambdas,
                                 std::uint64_t seed) {
  const auto eff = effmetrics::evaluate_all(run, test, k);
  const auto& users = eff[0].users;
  const std::size_t me = users.size();
  if (me < 3)
    throw std::runtime_error("similarity sweep needs at least 3 evaluated users");
  const auto& p_scores = eff[2].scores;
  const auto& n_scores = eff[5].scores;

  std::vector<std::vector<std::uint32_t>> eval_lists;
  eval_lists.reserve(me);
  for (std::uint32_t u : users) eval_lists.push_back(run.lists[u]);
  const BinaryMatrix item_profiles = train.profiles.transposed();

  ExperimentTrace trace;
  trace.protocol = "similarity_sweep";
  trace.seed = seed;
  {
    std::string ls;
    for (double l : lambdas) ls += (ls.empty() ? "" : ",") + fmt(l);
    trace.config = "k=" + std::to_string(k) + ";lambdas=" + ls;
  }

  const std::size_t n_pairs = simkit::pair_count(me);
  const std::size_t n_dists = lambdas.size() + 1;
  for (std::size_t d = 0; d < n_dists; ++d) {
    std::vector<double> samples;
    std::string label;
    if (d < lambdas.size()) {
      samples = simkit::sample_weibull(lambdas[d], n_pairs, mix_seed(seed, 100 + d));
      label = "weibull-" + fmt(lambdas[d]);
    } else {
      samples = simkit::sample_normal(n_pairs, mix_seed(seed, 100 + d));
      label = "normal";
    }
    simkit::minmax_normalize_values(samples);
    Rng assign_rng(mix_seed(seed, 900 + d));
    shuffle_in_place(samples, assign_rng);

    const auto skew = simkit::skewness(samples);
    if (!skew) throw std::runtime_error("degenerate similarity sample");

    simkit::PairwiseSimilarities sims;
    sims.m = me;
    sims.kind = simkit::SimilarityKind::synthetic;
    sims.normalized = true;
    sims.values = std::move(samples);

    TracePoint pt;
    pt.x = *skew;
    pt.label = std::move(label);
    pt.entries.emplace_back("PUF-Prec", fairmetrics::puf(sims, p_scores));
    pt.entries.emplace_back("PUF-NDCG", fairmetrics::puf(sims, n_scores));
    pt.entries.emplace_back("UF",
                            fairmetrics::uf(sims, eval_lists, item_profiles));
    pt.entries.emplace_back("SD-P", fairmetrics::sd(p_scores));
    pt.entries.emplace_back("SD-NDCG", fairmetrics::sd(n_scores));
    trace.points.push_back(std::move(pt));
  }

  std::stable_sort(trace.points.begin(), trace.points.end(),
                   [](const TracePoint& a, const TracePoint& b) { return a.x < b.x; });
  return trace;
}

std::optional<double> kendall_tau_b(std::span<const double> x,
                                    std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw std::invalid_argument("tau-b needs two equal-length vectors, n >= 2");

  long long s = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++ties_x;
      if (dy == 0.0) ++ties_y;
      const int sx = dx > 0.0 ? 1 : dx < 0.0 ? -1 : 0;
      const int sy = dy > 0.0 ? 1 : dy < 0.0 ? -1 : 0;
      s += sx * sy;
    }
  }
  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  if (ties_x == n0 || ties_y == n0) return std::nullopt;  // constant vector
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x) *
                                 static_cast<double>(n0 - ties_y));
  return static_cast<double>(s) / denom;
}

AgreementMatrix agreement_matrix(
    const std::vector<fairmetrics::FairnessReport>& reports,
    bool flip_unfairness) {
  if (reports.size() < 2)
    throw std::invalid_argument("agreement needs at least 2 models");
  const auto& first = reports.front().entries;
  for (const auto& r : reports) {
    if (r.entries.size() != first.size())
      throw std::invalid_argument("reports carry different measure sets");
    for (std::size_t i = 0; i < first.size(); ++i)
      if (r.entries[i].first != first[i].first)
        throw std::invalid_argument("reports carry different measure sets");
  }

  auto is_effectiveness = [](const std::string& name) {
    return effmetrics::parse_measure(name).has_value();
  };

  AgreementMatrix out;
  std::vector<std::vector<double>> vectors;
  for (std::size_t i = 0; i < first.size(); ++i) {
    std::vector<double> v;
    bool defined = true;
    for (const auto& r : reports) {
      const auto& val = r.entries[i].second;
      if (!val) {
        defined = false;
        break;
      }
      const bool flip = flip_unfairness && !is_effectiveness(first[i].first);
      v.push_back(flip ? -*val : *val);
    }
    if (!defined) continue;  // undefined for some model: measure excluded
    out.measures.push_back(first[i].first);
    vectors.push_back(std::move(v));
  }
  for (const auto& r : reports) out.models.push_back(r.run_id);

  const std::size_t mm = out.measures.size();
  out.tau.assign(mm, std::vector<std::optional<double>>(mm));
  for (std::size_t i = 0; i < mm; ++i)
    for (std::size_t j = i; j < mm; ++j) {
      const auto t = kendall_tau_b(vectors[i], vectors[j]);
      out.tau[i][j] = t;
      out.tau[j][i] = t;
    }
  return out;
}

std::string agreement_csv(const AgreementMatrix& matrix) {
  std::ostringstream os;
  os << "measure";
  for (const auto& name : matrix.measures) os << ',' << name;
  os << '\n';
  for (std::size_t i = 0; i < matrix.measures.size(); ++i) {
    os << matrix.measures[i];
    for (std::size_t j = 0; j < matrix.measures.size(); ++j) {
      os << ',';
      if (matrix.tau[i][j]) os << fmt(*matrix.tau[i][j]);
    }
    os << '\n';
  }
  return os.str();
}

std::string trace_csv(const ExperimentTrace& trace) {
  std::ostringstream os;
  os << "x,label";
  if (!trace.points.empty())
    for (const auto& [key, _] : trace.points.front().entries) os << ',' << key;
  os << '\n';
  for (const auto& pt : trace.points) {
    os << fmt(pt.x) << ',' << pt.label;
    for (const auto& [_, val] : pt.entries) {
      os << ',';
      if (val) os << fmt(*val);
    }
    os << '\n';
  }
  return os.str();
}

std::string trace_json(const ExperimentTrace& trace) {
  nlohmann::ordered_json j;
  j["protocol"] = trace.protocol;
  j["seed"] = trace.seed;
  j["config"] = trace.config;
  auto points = nlohmann::ordered_json::array();
  for (const auto& pt : trace.points) {
    nlohmann::ordered_json p;
    p["x"] = pt.x;
    if (!pt.label.empty()) p["label"] = pt.label;
    nlohmann::ordered_json entries;
    for (const auto& [key, val] : pt.entries) {
      if (val)
        entries[key] = *val;
      else
        entries[key] = nullptr;
    }
    p["entries"] = std::move(entries);
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  return j.dump(2);
}

std::string trace_basename(const ExperimentTrace& trace) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(trace.config)));
  return trace.protocol + "_seed" + std::to_string(trace.seed) + "_" +
         std::string(hash).substr(0, 8);
}

std::vector<std::string> default_bench_measures() {
  return {"SD-P",         "SD-NDCG",      "Gini-P",       "Gini-NDCG",
          "ME",           "MME",          "PEU",          "UF",
          "PUF-Prec-Cos", "PUF-Prec-Jacc", "PUF-NDCG-Cos", "PUF-NDCG-Jacc"};
}

std::vector<BenchRow> bench(std::span<const std::string> measures,
                            std::size_t m, std::size_t k, std::uint64_t seed,
                            std::size_t repeats) {
  if (repeats < 1) throw std::invalid_argument("bench needs >= 1 repeat");
  SyntheticConfig cfg;
  cfg.users = m;
  cfg.items = m;
  cfg.train_degree = 16;
  cfg.test_degree = 8;
  cfg.seed = seed;
  const SyntheticData data = synthetic_split(cfg);
  const auto run = random_run(m, m, k, mix_seed(seed, 7));

  const auto eff = effmetrics::evaluate_all(run, data.test, k);
  const auto& users = eff[0].users;
  if (users.size() < 3) throw std::runtime_error("bench dataset too small");
  const auto& p_scores = eff[2].scores;
  const auto& n_scores = eff[5].scores;

  // Untimed preparation: similarities once per PUF variant, plus the item
  // profile transpose (dataset representation, not measure work).
  const BinaryMatrix sub = select_rows(data.train.profiles, users);
  const auto cos_norm = simkit::minmax_normalize(simkit::cosine_similarities(sub));
  const auto jacc_raw = simkit::jaccard_similarities(sub);
  const auto jacc_norm = simkit::minmax_normalize(jacc_raw);
  std::vector<std::vector<std::uint32_t>> eval_lists;
  for (std::uint32_t u : users) eval_lists.push_back(run.lists[u]);
  const BinaryMatrix item_profiles = data.train.profiles.transposed();

  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::vector<BenchRow> rows;
  for (const auto& name : measures) rows.push_back({name, 0.0, 0.0});

  for (std::size_t rep = 0; rep < repeats; ++rep) {
    // One envy pass covers ME/MME/PEU; each requested row is charged the
    // suite's end-to-end time.
    bool need_envy = false;
    for (auto& row : rows)
      need_envy |= row.measure == "ME" || row.measure == "MME" || row.measure == "PEU";
    double envy_seconds = 0.0;
    fairmetrics::EnvyStats envy;
    if (need_envy) {
      const auto t0 = Clock::now();
      envy = fairmetrics::envy_suite(run, data.test, k, 0.05);
      envy_seconds = seconds_since(t0);
    }

    for (auto& row : rows) {
      double value = 0.0;
      double elapsed = 0.0;
      if (row.measure == "SD-P" || row.measure == "SD-NDCG") {
        const auto& s = row.measure == "SD-P" ? p_scores : n_scores;
        const auto t0 = Clock::now();
        value = fairmetrics::sd(s);
        elapsed = seconds_since(t0);
      } else if (row.measure == "Gini-P" || row.measure == "Gini-NDCG") {
        const auto& s = row.measure == "Gini-P" ? p_scores : n_scores;
        const auto t0 = Clock::now();
        value = fairmetrics::gini(s).value_or(
            std::numeric_limits<double>::quiet_NaN());
        elapsed = seconds_since(t0);
      } else if (row.measure == "ME" || row.measure == "MME" ||
                 row.measure == "PEU") {
        value = row.measure == "ME" ? envy.me
                : row.measure == "MME" ? envy.mme
                                       : envy.peu;
        elapsed = envy_seconds;
      } else if (row.measure == "UF") {
        const auto t0 = Clock::now();
        value = fairmetrics::uf(jacc_raw, eval_lists, item_profiles);
        elapsed = seconds_since(t0);
      } else if (row.measure == "PUF-Prec-Cos" || row.measure == "PUF-NDCG-Cos" ||
                 row.measure == "PUF-Prec-Jacc" ||
                 row.measure == "PUF-NDCG-Jacc") {
        const auto& sims =
            row.measure.find("Cos") != std::string::npos ? cos_norm : jacc_norm;
        const auto& s =
            row.measure.find("Prec") != std::string::npos ? p_scores : n_scores;
        const auto t0 = Clock::now();
        value = fairmetrics::puf(sims, s);
        elapsed = seconds_since(t0);
      } else {
        throw std::invalid_argument("unknown bench measure: " + row.measure);
      }
      row.mean_seconds += elapsed / static_cast<double>(repeats);
      row.value = value;
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "measure,mean_seconds,value\n";
  for (const auto& row : rows) {
    os << row.measure << ',' << fmt(row.mean_seconds) << ',';
    if (std::isnan(row.value))
      os << "undefined";
    else
      os << fmt(row.value);
    os << '\n';
  }
  return os.str();
}

}  // namespace recfair::labs
