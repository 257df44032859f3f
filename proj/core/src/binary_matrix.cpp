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

#include "recfair/binary_matrix.hpp"

#include <algorithm>

namespace recfair {

std::size_t BinaryMatrix::nonzeros() const {
  std::size_t total = 0;
  for (const auto& row : rows) total += row.size();
  return total;
}

bool BinaryMatrix::contains(std::size_t row, std::uint32_t col) const {
  const auto& r = rows[row];
  return std::binary_search(r.begin(), r.end(), col);
}

BinaryMatrix BinaryMatrix::transposed() const {
  BinaryMatrix t;
  t.cols = rows.size();
  t.rows.resize(cols);
  std::vector<std::size_t> counts(cols, 0);
  for (const auto& row : rows)
    for (std::uint32_t c : row) ++counts[c];
  for (std::size_t c = 0; c < cols; ++c) t.rows[c].reserve(counts[c]);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::uint32_t c : rows[r])
      t.rows[c].push_back(static_cast<std::uint32_t>(r));
  return t;  // rows scanned in order, so transposed lists stay sorted
}

BinaryMatrix select_rows(const BinaryMatrix& src,
                         std::span<const std::uint32_t> rows) {
  BinaryMatrix out;
  out.cols = src.cols;
  out.rows.reserve(rows.size());
  for (std::uint32_t r : rows) out.rows.push_back(src.rows[r]);
  return out;
}

std::size_t intersection_size(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b) {
  std::size_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace recfair
