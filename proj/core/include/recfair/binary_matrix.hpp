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
#include <span>
#include <vector>

namespace recfair {

// Sparse binary matrix stored as sorted, duplicate-free row index lists.
// Rows are user profiles throughout the library; transposed() flips to
// per-item profiles (the one-hot item representation).
struct BinaryMatrix {
  std::size_t cols = 0;
  std::vector<std::vector<std::uint32_t>> rows;

  std::size_t row_count() const { return rows.size(); }
  std::size_t nonzeros() const;
  bool contains(std::size_t row, std::uint32_t col) const;
  BinaryMatrix transposed() const;
};

// |a ∩ b| for two sorted index lists.
std::size_t intersection_size(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b);

// Row subset in the given order; the column universe is unchanged.
BinaryMatrix select_rows(const BinaryMatrix& src,
                         std::span<const std::uint32_t> rows);

}  // namespace recfair
