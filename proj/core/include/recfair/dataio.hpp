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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "recfair/binary_matrix.hpp"

namespace recfair::dataio {

struct Interaction {
  std::string user;
  std::string item;
  std::optional<double> rating;
  std::optional<std::int64_t> timestamp;  // epoch seconds
};

// Column mapping for delimiter-separated interaction logs with a header row.
// The delimiter is auto-detected among tab/comma when unset. Empty fields in
// optional columns read as absent values.
struct ColumnSpec {
  std::string user_col;
  std::string item_col;
  std::optional<std::string> rating_col;
  std::optional<std::string> timestamp_col;
  std::optional<char> delimiter;
};

struct InteractionDataset {
  std::vector<Interaction> interactions;
  std::vector<std::string> user_ids;  // row index -> external id
  std::vector<std::string> item_ids;  // column index -> external id
  std::unordered_map<std::string, std::uint32_t> user_index;
  std::unordered_map<std::string, std::uint32_t> item_index;
  BinaryMatrix profiles;  // m x n, 1 = retained interaction

  std::size_t user_count() const { return user_ids.size(); }
  std::size_t item_count() const { return item_ids.size(); }
};

enum class SplitMode { temporal, random };

struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

// All three parts share user/item indices, rebuilt from the union of
// retained interactions after the min-train filter.
struct DatasetSplit {
  InteractionDataset train;
  InteractionDataset validation;
  InteractionDataset test;
  SplitMode mode = SplitMode::random;
  std::uint64_t seed = 0;
};

std::vector<Interaction> load_interactions(const std::filesystem::path& path,
                                           const ColumnSpec& format);

// Preprocessing recipe: duplicate (user,item) pairs resolved by keeping the
// most recent (ties: last occurrence in file order; a missing timestamp sorts
// before any real one); optional rating threshold + binarization; then users
// and items with fewer than min_interactions interactions are removed
// iteratively until a fixed point.
InteractionDataset preprocess(std::vector<Interaction> raw,
                              std::optional<double> rating_threshold,
                              std::size_t min_interactions);

// Global 6:2:2 split, boundaries at floor(0.6 N) and floor(0.8 N). Temporal
// mode sorts by timestamp (ties keep input order), random mode shuffles with
// the seed. Users with fewer than min_train train interactions are removed
// from all splits afterwards; min_train = 0 disables the filter.
DatasetSplit split(const InteractionDataset& ds, SplitMode mode,
                   SplitRatios ratios, std::uint64_t seed,
                   std::size_t min_train = 5);

struct DatasetStats {
  std::size_t users_all = 0;
  std::size_t users_test = 0;
  std::size_t items = 0;
  std::size_t interactions = 0;
  double sparsity_pct = 0.0;
};

DatasetStats stats(const DatasetSplit& split);
std::string stats_json(const DatasetStats& s);

// Split manifest format: "user<TAB>item<TAB>rating<TAB>timestamp" header,
// optional fields left empty. Round-trips through load_interactions.
void write_interactions_tsv(std::ostream& out, const InteractionDataset& ds);

// Builds a dataset over a fixed universe; every interaction must reference a
// known user and item.
InteractionDataset make_dataset(std::vector<Interaction> interactions,
                                std::vector<std::string> user_ids,
                                std::vector<std::string> item_ids);

}  // namespace recfair::dataio
