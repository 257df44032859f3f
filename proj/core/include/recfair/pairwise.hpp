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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace recfair::simkit {

enum class SimilarityKind { cosine, jaccard, synthetic };

constexpr std::size_t pair_count(std::size_t m) { return m * (m - 1) / 2; }

// Canonical index of the unordered pair (u, v), u < v, in row-major upper
// triangular order: (0,1), (0,2), ..., (0,m-1), (1,2), ...
constexpr std::size_t condensed_index(std::size_t m, std::size_t u,
                                      std::size_t v) {
  return u * m - u * (u + 1) / 2 + (v - u - 1);
}

// Inverse of condensed_index.
std::pair<std::uint32_t, std::uint32_t> condensed_pair(std::size_t m,
                                                       std::size_t index);

// Recovers m from a condensed vector length; throws if the length is not a
// valid C(m,2). maybe_users_for_pair_count returns 0 instead of throwing.
std::size_t users_for_pair_count(std::size_t n_pairs);
std::size_t maybe_users_for_pair_count(std::size_t n_pairs);

// Condensed vector of C(m,2) user-pair similarities in [0,1]. Symmetric by
// construction; only unordered pairs are stored.
struct PairwiseSimilarities {
  std::size_t m = 0;
  SimilarityKind kind = SimilarityKind::synthetic;
  bool normalized = false;
  bool degenerate = false;  // min-max normalization saw max == min
  std::vector<double> values;

  double at(std::size_t u, std::size_t v) const {
    return values[condensed_index(m, u < v ? u : v, u < v ? v : u)];
  }
};

// Binary export: u64 little-endian length header followed by the condensed
// values as little-endian IEEE-754 doubles.
void write_condensed(std::ostream& out, const PairwiseSimilarities& sims);
PairwiseSimilarities read_condensed(std::istream& in);

// (u, v, sim) triples, tab-separated, one unordered pair per line.
void write_pairs_tsv(std::ostream& out, const PairwiseSimilarities& sims);

}  // namespace recfair::simkit
