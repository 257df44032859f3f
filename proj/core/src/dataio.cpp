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

#include "recfair/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "recfair/rng.hpp"

namespace recfair::dataio {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
    fields.back().pop_back();
  return fields;
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::runtime_error("column '" + name + "' not found in header");
}

double parse_rating(const std::string& s, std::size_t row) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("unparsable rating '" + s + "' at row " +
                             std::to_string(row));
  return value;
}

std::int64_t parse_timestamp(const std::string& s, std::size_t row) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("unparsable timestamp '" + s + "' at row " +
                             std::to_string(row));
  return value;
}

}  // namespace

std::vector<Interaction> load_interactions(const std::filesystem::path& path,
                                           const ColumnSpec& format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("input file has no header row: " + path.string());

  char delim = '\t';
  if (format.delimiter) {
    delim = *format.delimiter;
  } else {
    const auto tabs = std::count(line.begin(), line.end(), '\t');
    const auto commas = std::count(line.begin(), line.end(), ',');
    delim = commas > tabs ? ',' : '\t';
  }

  const auto header = split_line(line, delim);
  const std::size_t user_col = find_column(header, format.user_col);
  const std::size_t item_col = find_column(header, format.item_col);
  std::optional<std::size_t> rating_col, ts_col;
  if (format.rating_col) rating_col = find_column(header, *format.rating_col);
  if (format.timestamp_col) ts_col = find_column(header, *format.timestamp_col);

  std::vector<Interaction> out;
  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line, delim);
    const std::size_t needed =
        std::max({user_col, item_col, rating_col.value_or(0), ts_col.value_or(0)});
    if (fields.size() <= needed)
      throw std::runtime_error("row " + std::to_string(row) +
                               " has too few fields");

    Interaction it;
    it.user = fields[user_col];
    it.item = fields[item_col];
    if (it.user.empty() || it.item.empty())
      throw std::runtime_error("empty user or item id at row " +
                               std::to_string(row));
    if (rating_col && !fields[*rating_col].empty())
      it.rating = parse_rating(fields[*rating_col], row);
    if (ts_col && !fields[*ts_col].empty())
      it.timestamp = parse_timestamp(fields[*ts_col], row);
    out.push_back(std::move(it));
  }
  return out;
}

InteractionDataset make_dataset(std::vector<Interaction> interactions,
                                std::vector<std::string> user_ids,
                                std::vector<std::string> item_ids) {
  InteractionDataset ds;
  ds.user_ids = std::move(user_ids);
  ds.item_ids = std::move(item_ids);
  for (std::size_t i = 0; i < ds.user_ids.size(); ++i)
    ds.user_index.emplace(ds.user_ids[i], static_cast<std::uint32_t>(i));
  for (std::size_t i = 0; i < ds.item_ids.size(); ++i)
    ds.item_index.emplace(ds.item_ids[i], static_cast<std::uint32_t>(i));

  ds.profiles.cols = ds.item_ids.size();
  ds.profiles.rows.resize(ds.user_ids.size());
  for (const auto& it : interactions) {
    const auto u = ds.user_index.find(it.user);
    const auto i = ds.item_index.find(it.item);
    if (u == ds.user_index.end() || i == ds.item_index.end())
      throw std::invalid_argument("interaction references an unknown id: " +
                                  it.user + "/" + it.item);
    ds.profiles.rows[u->second].push_back(i->second);
  }
  for (auto& row : ds.profiles.rows) std::sort(row.begin(), row.end());
  ds.interactions = std::move(interactions);
  return ds;
}

namespace {

InteractionDataset dataset_from_interactions(std::vector<Interaction> kept) {
  std::vector<std::string> user_ids, item_ids;
  std::unordered_map<std::string, std::uint32_t> useen, iseen;
  for (const auto& it : kept) {
    if (useen.emplace(it.user, useen.size()).second) user_ids.push_back(it.user);
    if (iseen.emplace(it.item, iseen.size()).second) item_ids.push_back(it.item);
  }
  return make_dataset(std::move(kept), std::move(user_ids), std::move(item_ids));
}

}  // namespace

InteractionDataset preprocess(std::vector<Interaction> raw,
                              std::optional<double> rating_threshold,
                              std::size_t min_interactions) {
  if (min_interactions < 1)
    throw std::invalid_argument("min_interactions must be >= 1");
  if (rating_threshold) {
    for (const auto& it : raw)
      if (!it.rating)
        throw std::invalid_argument(
            "rating threshold given but an interaction has no rating");
  }

  // Deduplicate (user, item), keeping the most recent; a later occurrence
  // wins timestamp ties, and a missing timestamp sorts before any real one.
  std::unordered_map<std::string, std::size_t> latest;
  std::vector<Interaction> dedup;
  constexpr std::int64_t kNoTs = std::numeric_limits<std::int64_t>::min();
  for (auto& it : raw) {
    const std::string key = it.user + '\x1f' + it.item;
    const auto [pos, inserted] = latest.emplace(key, dedup.size());
    if (inserted) {
      dedup.push_back(std::move(it));
    } else {
      Interaction& cur = dedup[pos->second];
      if (it.timestamp.value_or(kNoTs) >= cur.timestamp.value_or(kNoTs))
        cur = std::move(it);
    }
  }

  std::vector<Interaction> kept;
  kept.reserve(dedup.size());
  for (auto& it : dedup) {
    if (rating_threshold) {
      if (*it.rating < *rating_threshold) continue;
      it.rating = 1.0;
    }
    kept.push_back(std::move(it));
  }

  // Iterative core filter: drop users/items below min_interactions until a
  // fixed point.
  for (;;) {
    std::unordered_map<std::string, std::size_t> ucount, icount;
    for (const auto& it : kept) {
      ++ucount[it.user];
      ++icount[it.item];
    }
    std::vector<Interaction> next;
    next.reserve(kept.size());
    for (auto& it : kept)
      if (ucount[it.user] >= min_interactions &&
          icount[it.item] >= min_interactions)
        next.push_back(std::move(it));
    const bool stable = next.size() == kept.size();
    kept = std::move(next);
    if (stable) break;
  }

  if (kept.empty())
    throw std::runtime_error(
        "preprocessing removed every user/item; relax the filters");
  return dataset_from_interactions(std::move(kept));
}

DatasetSplit split(const InteractionDataset& ds, SplitMode mode,
                   SplitRatios ratios, std::uint64_t seed,
                   std::size_t min_train) {
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (!(ratios.train > 0.0) || !(ratios.validation >= 0.0) ||
      !(ratios.test >= 0.0) || std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must be positive and sum to 1");

  std::vector<std::size_t> order(ds.interactions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  if (mode == SplitMode::temporal) {
    for (const auto& it : ds.interactions)
      if (!it.timestamp)
        throw std::runtime_error(
            "temporal split requires timestamps on all interactions");
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return *ds.interactions[a].timestamp <
                              *ds.interactions[b].timestamp;
                     });
  } else {
    Rng rng(seed);
    shuffle_in_place(order, rng);
  }

  const std::size_t n = order.size();
  const auto b1 = static_cast<std::size_t>(std::floor(ratios.train * n));
  const auto b2 = static_cast<std::size_t>(
      std::floor((ratios.train + ratios.validation) * n));

  std::array<std::vector<Interaction>, 3> parts;
  for (std::size_t i = 0; i < n; ++i) {
    const Interaction& it = ds.interactions[order[i]];
    parts[i < b1 ? 0 : i < b2 ? 1 : 2].push_back(it);
  }

  // Users with fewer than min_train train interactions leave every split.
  std::unordered_map<std::string, std::size_t> train_count;
  for (const auto& it : parts[0]) ++train_count[it.user];
  auto user_ok = [&](const std::string& user) {
    if (min_train == 0) return true;
    const auto pos = train_count.find(user);
    return pos != train_count.end() && pos->second >= min_train;
  };
  for (auto& part : parts) {
    std::erase_if(part, [&](const Interaction& it) { return !user_ok(it.user); });
  }
  if (parts[0].empty())
    throw std::runtime_error("train split is empty after the min-train filter");

  // Rebuild shared indices from the union of retained interactions, keeping
  // the parent dataset's row/column order.
  std::vector<bool> user_kept(ds.user_count(), false);
  std::vector<bool> item_kept(ds.item_count(), false);
  for (const auto& part : parts) {
    for (const auto& it : part) {
      user_kept[ds.user_index.at(it.user)] = true;
      item_kept[ds.item_index.at(it.item)] = true;
    }
  }
  std::vector<std::string> user_ids, item_ids;
  for (std::size_t i = 0; i < ds.user_count(); ++i)
    if (user_kept[i]) user_ids.push_back(ds.user_ids[i]);
  for (std::size_t i = 0; i < ds.item_count(); ++i)
    if (item_kept[i]) item_ids.push_back(ds.item_ids[i]);

  DatasetSplit out;
  out.mode = mode;
  out.seed = seed;
  out.train = make_dataset(std::move(parts[0]), user_ids, item_ids);
  out.validation = make_dataset(std::move(parts[1]), user_ids, item_ids);
  out.test = make_dataset(std::move(parts[2]), user_ids, item_ids);
  return out;
}

DatasetStats stats(const DatasetSplit& split) {
  DatasetStats s;
  s.users_all = split.train.user_count();
  s.items = split.train.item_count();
  s.interactions = split.train.interactions.size() +
                   split.validation.interactions.size() +
                   split.test.interactions.size();
  for (const auto& row : split.test.profiles.rows)
    if (!row.empty()) ++s.users_test;
  const double cells =
      static_cast<double>(s.users_all) * static_cast<double>(s.items);
  s.sparsity_pct =
      cells == 0.0 ? 0.0
                   : 100.0 * (1.0 - static_cast<double>(s.interactions) / cells);
  return s;
}

std::string stats_json(const DatasetStats& s) {
  nlohmann::ordered_json j;
  j["users_all"] = s.users_all;
  j["users_test"] = s.users_test;
  j["items"] = s.items;
  j["interactions"] = s.interactions;
  j["sparsity_pct"] = s.sparsity_pct;
  return j.dump(2);
}

void write_interactions_tsv(std::ostream& out, const InteractionDataset& ds) {
  out << "user\titem\trating\ttimestamp\n";
  char buf[512];
  for (const auto& it : ds.interactions) {
    out << it.user << '\t' << it.item << '\t';
    if (it.rating) {
      std::snprintf(buf, sizeof buf, "%.17g", *it.rating);
      out << buf;
    }
    out << '\t';
    if (it.timestamp) out << *it.timestamp;
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed to write interactions tsv");
}

}  // namespace recfair::dataio
