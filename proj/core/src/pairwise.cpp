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

#include "recfair/pairwise.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "condensed binary export assumes a little-endian host");

namespace recfair::simkit {

std::pair<std::uint32_t, std::uint32_t> condensed_pair(std::size_t m,
                                                       std::size_t index) {
  // Solve for the row: index lies in row u iff
  // offset(u) <= index < offset(u+1), offset(u) = u*m - u*(u+1)/2.
  const double md = static_cast<double>(m);
  const double disc = (2.0 * md - 1.0) * (2.0 * md - 1.0) -
                      8.0 * static_cast<double>(index);
  std::size_t u = static_cast<std::size_t>(
      std::floor((2.0 * md - 1.0 - std::sqrt(disc)) / 2.0));
  // Guard against rounding at row boundaries.
  while (u > 0 && condensed_index(m, u, u + 1) > index) --u;
  while (condensed_index(m, u + 1, u + 2) <= index && u + 2 < m) ++u;
  const std::size_t v = index - condensed_index(m, u, u + 1) + u + 1;
  return {static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)};
}

std::size_t maybe_users_for_pair_count(std::size_t n_pairs) {
  const std::size_t m = static_cast<std::size_t>(
      std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(n_pairs))) / 2.0));
  return pair_count(m) == n_pairs ? m : 0;
}

std::size_t users_for_pair_count(std::size_t n_pairs) {
  const std::size_t m = maybe_users_for_pair_count(n_pairs);
  if (m == 0)
    throw std::invalid_argument("vector length is not C(m,2) for any m");
  return m;
}

void write_condensed(std::ostream& out, const PairwiseSimilarities& sims) {
  const std::uint64_t n = sims.values.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(sims.values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  if (!out) throw std::runtime_error("failed to write condensed similarities");
}

PairwiseSimilarities read_condensed(std::istream& in) {
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in) throw std::runtime_error("failed to read condensed length header");
  PairwiseSimilarities sims;
  sims.values.resize(n);
  in.read(reinterpret_cast<char*>(sims.values.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("truncated condensed similarity vector");
  sims.m = users_for_pair_count(n);
  return sims;
}

void write_pairs_tsv(std::ostream& out, const PairwiseSimilarities& sims) {
  char buf[64];
  for (std::size_t u = 0; u + 1 < sims.m; ++u) {
    for (std::size_t v = u + 1; v < sims.m; ++v) {
      std::snprintf(buf, sizeof buf, "%zu\t%zu\t%.17g\n", u, v,
                    sims.values[condensed_index(sims.m, u, v)]);
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("failed to write pair similarity tsv");
}

}  // namespace recfair::simkit
