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
#include <optional>
#include <span>
#include <vector>

#include "recfair/binary_matrix.hpp"
#include "recfair/pairwise.hpp"

namespace recfair::simkit {

// Pairwise cosine similarity over binary profile rows:
// |P_u ∩ P_v| / (sqrt(|P_u|) * sqrt(|P_v|)). All-zero rows score 0 against
// everything. Requires m >= 2.
PairwiseSimilarities cosine_similarities(const BinaryMatrix& profiles);

// Pairwise Jaccard similarity: |P_u ∩ P_v| / |P_u ∪ P_v|, with 0 for a pair
// of all-zero rows. Requires m >= 2.
PairwiseSimilarities jaccard_similarities(const BinaryMatrix& profiles);

// Affine rescale of the condensed values to [0,1]. A constant input maps to
// all zeros and sets `degenerate` instead of failing.
PairwiseSimilarities minmax_normalize(PairwiseSimilarities sims);

// In-place min-max of a plain vector; returns false when all values were
// equal (output is all zeros in that case).
bool minmax_normalize_values(std::vector<double>& values);

// Weibull(shape=lambda, scale=1) samples by inversion:
// x = (-ln(1-U))^(1/lambda). Requires lambda > 0, count >= 1.
std::vector<double> sample_weibull(double lambda, std::size_t count,
                                   std::uint64_t seed);

// Standard normal samples. Requires count >= 1.
std::vector<double> sample_normal(std::size_t count, std::uint64_t seed);

// Fisher-Pearson moment coefficient g1 = m3 / m2^(3/2), biased form.
// nullopt for fewer than 3 values or zero variance.
std::optional<double> skewness(std::span<const double> values);

enum class AssignMode { most_fair, most_unfair };

// Reassigns the similarity multiset across pairs by sorted rank:
// most_fair pairs the i-th largest similarity with the i-th smallest
// effectiveness difference, most_unfair with the i-th largest. Ties keep the
// original pair order (stable). The result is indexed like `diffs`.
PairwiseSimilarities assign_sorted(std::span<const double> sims,
                                   std::span<const double> diffs,
                                   AssignMode mode);

}  // namespace recfair::simkit
