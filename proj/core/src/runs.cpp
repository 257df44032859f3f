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

#include "recfair/runs.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace recfair::effmetrics {

namespace {

constexpr char kHeader[] = "user\titem\trank\tscore";

struct RunRow {
  std::string user, item;
  std::size_t rank;
  double score;
};

RunRow parse_row(const std::string& line, std::size_t row_no) {
  RunRow r;
  std::size_t start = 0;
  std::string fields[4];
  for (int f = 0; f < 4; ++f) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      if (f != 3)
        throw std::runtime_error("run file row " + std::to_string(row_no) +
                                 " has too few fields");
      fields[f] = line.substr(start);
      if (!fields[f].empty() && fields[f].back() == '\r') fields[f].pop_back();
      break;
    }
    fields[f] = line.substr(start, pos - start);
    start = pos + 1;
  }
  r.user = fields[0];
  r.item = fields[1];
  const auto& rank_s = fields[2];
  auto rc = std::from_chars(rank_s.data(), rank_s.data() + rank_s.size(), r.rank);
  if (rc.ec != std::errc{} || rc.ptr != rank_s.data() + rank_s.size() || r.rank < 1)
    throw std::runtime_error("bad rank '" + rank_s + "' at run file row " +
                             std::to_string(row_no));
  const auto& score_s = fields[3];
  auto sc = std::from_chars(score_s.data(), score_s.data() + score_s.size(),
                            r.score);
  if (sc.ec != std::errc{} || sc.ptr != score_s.data() + score_s.size())
    throw std::runtime_error("bad score '" + score_s + "' at run file row " +
                             std::to_string(row_no));
  return r;
}

template <typename RowFn>
void for_each_run_row(std::istream& in, RowFn&& fn) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("run file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw std::runtime_error("run file must start with header '" +
                             std::string(kHeader) + "'");
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    fn(parse_row(line, row_no), row_no);
  }
}

}  // namespace

void write_run_tsv(std::ostream& out, const RankedRun& run,
                   const std::vector<std::string>& user_ids,
                   const std::vector<std::string>& item_ids) {
  out << kHeader << '\n';
  char buf[64];
  for (std::size_t u = 0; u < run.lists.size(); ++u) {
    const auto& list = run.lists[u];
    for (std::size_t r = 0; r < list.size(); ++r) {
      const double score = run.model_scores.empty()
                               ? static_cast<double>(list.size() - r)
                               : run.model_scores[u][r];
      std::snprintf(buf, sizeof buf, "%zu\t%.17g\n", r + 1, score);
      out << user_ids[u] << '\t' << item_ids[list[r]] << '\t' << buf;
    }
  }
  if (!out) throw std::runtime_error("failed to write run file");
}

RankedRun load_run_tsv(
    std::istream& in,
    const std::unordered_map<std::string, std::uint32_t>& user_index,
    const std::unordered_map<std::string, std::uint32_t>& item_index) {
  std::size_t m = 0;
  for (const auto& [id, row] : user_index) m = std::max<std::size_t>(m, row + 1);

  RankedRun run;
  run.lists.resize(m);
  run.model_scores.resize(m);

  for_each_run_row(in, [&](const RunRow& r, std::size_t row_no) {
    const auto u = user_index.find(r.user);
    if (u == user_index.end())
      throw std::runtime_error("unknown user '" + r.user + "' at run file row " +
                               std::to_string(row_no));
    const auto i = item_index.find(r.item);
    if (i == item_index.end())
      throw std::runtime_error("unknown item '" + r.item + "' at run file row " +
                               std::to_string(row_no));
    auto& list = run.lists[u->second];
    auto& scores = run.model_scores[u->second];
    if (r.rank != list.size() + 1)
      throw std::runtime_error("rank gap or duplicate rank for user '" +
                               r.user + "' at run file row " +
                               std::to_string(row_no));
    list.push_back(i->second);
    scores.push_back(r.score);
  });

  for (std::size_t u = 0; u < m; ++u) {
    const auto& list = run.lists[u];
    if (list.empty()) continue;
    if (run.k == 0) run.k = list.size();
    if (list.size() != run.k)
      throw std::runtime_error("inconsistent list lengths across users");
    std::set<std::uint32_t> distinct(list.begin(), list.end());
    if (distinct.size() != list.size())
      throw std::runtime_error("duplicate item in a user's list");
  }
  if (run.k == 0) throw std::runtime_error("run file contains no lists");
  return run;
}

RunIds scan_run_ids(std::istream& in) {
  RunIds ids;
  std::set<std::string> useen, iseen;
  for_each_run_row(in, [&](const RunRow& r, std::size_t) {
    if (useen.insert(r.user).second) ids.users.push_back(r.user);
    if (iseen.insert(r.item).second) ids.items.push_back(r.item);
  });
  return ids;
}

void validate_run(const RankedRun& run, const BinaryMatrix* train_profiles) {
  if (run.k == 0) throw std::invalid_argument("run has no cutoff");
  for (std::size_t u = 0; u < run.lists.size(); ++u) {
    const auto& list = run.lists[u];
    if (list.empty()) continue;
    if (list.size() != run.k)
      throw std::invalid_argument("list for user row " + std::to_string(u) +
                                  " does not have k items");
    std::set<std::uint32_t> distinct(list.begin(), list.end());
    if (distinct.size() != list.size())
      throw std::invalid_argument("list for user row " + std::to_string(u) +
                                  " repeats an item");
    if (train_profiles != nullptr && u < train_profiles->row_count()) {
      for (std::uint32_t item : list)
        if (train_profiles->contains(u, item))
          throw std::invalid_argument("list for user row " + std::to_string(u) +
                                      " contains a train item");
    }
  }
}

}  // namespace recfair::effmetrics
