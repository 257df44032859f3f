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
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "recfair/binary_matrix.hpp"

namespace recfair::effmetrics {

// Per-user ordered top-k item lists, aligned with a dataset's user index.
// Users without a list keep an empty vector and are skipped by evaluation.
struct RankedRun {
  std::size_t k = 0;
  std::vector<std::vector<std::uint32_t>> lists;   // each non-empty list has size k
  std::vector<std::vector<double>> model_scores;   // same shape; may be empty
};

// Run file format: "user<TAB>item<TAB>rank<TAB>score" with a header row,
// ranks 1-based and contiguous per user. The loader rejects rank gaps,
// duplicate ranks, repeated items, and unknown ids.
void write_run_tsv(std::ostream& out, const RankedRun& run,
                   const std::vector<std::string>& user_ids,
                   const std::vector<std::string>& item_ids);

RankedRun load_run_tsv(
    std::istream& in,
    const std::unordered_map<std::string, std::uint32_t>& user_index,
    const std::unordered_map<std::string, std::uint32_t>& item_index);

// Pre-scan for external run files: external user and item ids in order of
// first appearance, so callers can extend the id universe before loading.
struct RunIds {
  std::vector<std::string> users;
  std::vector<std::string> items;
};
RunIds scan_run_ids(std::istream& in);

// Checks list shape (k distinct items per listed user) and, when
// train_profiles is given, that no list contains one of the user's train
// items. Throws on violation.
void validate_run(const RankedRun& run,
                  const BinaryMatrix* train_profiles = nullptr);

}  // namespace recfair::effmetrics
