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

#include "recfair/fairmetrics.hpp"
#include "recfair/synthetic.hpp"

namespace recfair::labs {

inline constexpr double kDefaultLambdas[] = {0.5, 1.0, 2.0, 5.0, 10.0, 50.0};

struct TracePoint {
  double x = 0.0;
  std::string label;
  std::vector<std::pair<std::string, std::optional<double>>> entries;
};

// One protocol run: points ordered by x, every point carrying the same
// measure keys; deterministic given (protocol, config, seed).
struct ExperimentTrace {
  std::string protocol;
  std::uint64_t seed = 0;
  std::string config;
  std::vector<TracePoint> points;
};

std::string trace_csv(const ExperimentTrace& trace);   // missing value = empty cell
std::string trace_json(const ExperimentTrace& trace);  // missing value = null
// "<protocol>_seed<seed>_<config hash>" for reproducible artifact names.
std::string trace_basename(const ExperimentTrace& trace);

// Relevance variation: builds one run giving every test user k relevant items
// (random-k subset when they have more, random irrelevant fill when fewer),
// then degrades a growing random user fraction per point. Degrading a user
// zeroes the relevance of their fixed list (for them and for everyone), so
// every effectiveness-based measure sees the drop while UF's inputs stay
// untouched. PUF uses train-derived Jaccard similarities.
ExperimentTrace relevance_sweep(const dataio::InteractionDataset& train,
                                const dataio::InteractionDataset& test,
                                std::size_t k, double step_fraction,
                                std::uint64_t seed, double epsilon = 0.05);

// Similarity variation: redraws the pairwise similarities of a fixed run from
// Weibull(lambda) for each lambda plus N(0,1), min-max normalizes, randomly
// assigns them to pairs, and records PUF/UF/SD against the measured skewness.
ExperimentTrace similarity_sweep(const dataio::InteractionDataset& train,
                                 const dataio::InteractionDataset& test,
                                 const effmetrics::RankedRun& run,
                                 std::size_t k,
                                 std::span<const double> lambdas,
                                 std::uint64_t seed);

// Extreme assignment: per relevance-sweep point, draws a Weibull(lambda)
// similarity multiset and sorts it against the pairwise effectiveness
// differences (most_fair: high similarity with low difference; most_unfair:
// high with high), separately for P and NDCG.
ExperimentTrace extreme_case(const dataio::InteractionDataset& train,
                             const dataio::InteractionDataset& test,
                             std::size_t k, double step_fraction,
                             double lambda, simkit::AssignMode mode,
                             std::uint64_t seed);

// Kendall tau-b with tie correction; nullopt when either vector is constant.
std::optional<double> kendall_tau_b(std::span<const double> x,
                                    std::span<const double> y);

struct AgreementMatrix {
  std::vector<std::string> measures;
  std::vector<std::string> models;
  std::vector<std::vector<std::optional<double>>> tau;  // square, symmetric
};

// Pairwise tau-b between measure score vectors across models. Reports must
// share the same entry keys; a measure undefined for any model is excluded.
// flip_unfairness negates every non-effectiveness measure so that agreement
// with effectiveness reads directionally.
AgreementMatrix agreement_matrix(
    const std::vector<fairmetrics::FairnessReport>& reports,
    bool flip_unfairness = false);

std::string agreement_csv(const AgreementMatrix& matrix);

struct BenchRow {
  std::string measure;
  double mean_seconds = 0.0;
  double value = 0.0;  // identical across repeats for a fixed seed
};

// Wall-clock timing on a seeded synthetic dataset. User similarities are
// precomputed once per PUF variant and excluded from PUF's timing; the envy
// suite (one pass yields ME/MME/PEU) and UF are timed end to end.
std::vector<BenchRow> bench(std::span<const std::string> measures,
                            std::size_t m, std::size_t k, std::uint64_t seed,
                            std::size_t repeats = 3);

std::vector<std::string> default_bench_measures();
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace recfair::labs
