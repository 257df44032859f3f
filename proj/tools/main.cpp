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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recfair/dataio.hpp"
#include "recfair/fairmetrics.hpp"
#include "recfair/labs.hpp"
#include "recfair/neighbors.hpp"
#include "recfair/parallel.hpp"
#include "recfair/runs.hpp"

namespace fs = std::filesystem;
using namespace recfair;

namespace {

bool g_quiet = false;

void log_info(const std::string& msg) {
  if (!g_quiet) std::cerr << msg << '\n';
}

// split manifests and run inputs use the prep output columns
dataio::ColumnSpec manifest_columns() {
  dataio::ColumnSpec spec;
  spec.user_col = "user";
  spec.item_col = "item";
  spec.rating_col = "rating";
  spec.timestamp_col = "timestamp";
  spec.delimiter = '\t';
  return spec;
}

void append_new_ids(const std::vector<dataio::Interaction>& rows,
                    std::vector<std::string>& users,
                    std::vector<std::string>& items,
                    std::unordered_map<std::string, std::uint32_t>& useen,
                    std::unordered_map<std::string, std::uint32_t>& iseen) {
  for (const auto& it : rows) {
    if (useen.emplace(it.user, useen.size()).second) users.push_back(it.user);
    if (iseen.emplace(it.item, iseen.size()).second) items.push_back(it.item);
  }
}

struct EvalBundle {
  dataio::InteractionDataset train;
  dataio::InteractionDataset test;
  effmetrics::RankedRun run;
};

// one id universe spanning train, test, and (optionally) an external run
EvalBundle load_eval_inputs(const fs::path& train_path,
                            const fs::path& test_path,
                            const std::optional<fs::path>& run_path) {
  auto train_rows = dataio::load_interactions(train_path, manifest_columns());
  auto test_rows = dataio::load_interactions(test_path, manifest_columns());

  std::vector<std::string> users, items;
  std::unordered_map<std::string, std::uint32_t> useen, iseen;
  append_new_ids(train_rows, users, items, useen, iseen);
  append_new_ids(test_rows, users, items, useen, iseen);
  if (run_path) {
    std::ifstream in(*run_path);
    if (!in) throw std::runtime_error("cannot open run file: " + run_path->string());
    const auto ids = effmetrics::scan_run_ids(in);
    for (const auto& u : ids.users)
      if (useen.emplace(u, useen.size()).second) users.push_back(u);
    for (const auto& i : ids.items)
      if (iseen.emplace(i, iseen.size()).second) items.push_back(i);
  }

  EvalBundle bundle;
  bundle.train = dataio::make_dataset(std::move(train_rows), users, items);
  bundle.test = dataio::make_dataset(std::move(test_rows), users, items);
  if (run_path) {
    std::ifstream in(*run_path);
    bundle.run = effmetrics::load_run_tsv(in, bundle.train.user_index,
                                          bundle.train.item_index);
  }
  return bundle;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing file: " + path.string());
}

void emit_trace(const labs::ExperimentTrace& trace,
                const std::optional<fs::path>& out_dir) {
  const auto csv = labs::trace_csv(trace);
  if (!out_dir) {
    std::cout << csv;
    return;
  }
  fs::create_directories(*out_dir);
  const auto base = *out_dir / labs::trace_basename(trace);
  write_file(base.string() + ".csv", csv);
  write_file(base.string() + ".json", labs::trace_json(trace));
  std::cout << base.string() + ".csv" << '\n' << base.string() + ".json" << '\n';
  log_info("wrote " + std::to_string(trace.points.size()) + " points");
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    out.push_back(std::stod(part));
  }
  if (out.empty()) throw std::runtime_error("empty lambda list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "recfair: individual user fairness evaluation for top-k recommendation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.get_config_formatter_base()->quoteCharacter('"', '"');

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "Worker thread cap (0 = hardware, results identical for any value)")
      ->capture_default_str()
      ->envname("RECFAIR_THREADS");
  app.add_flag("--quiet", g_quiet, "Suppress informational logs on stderr")
      ->envname("RECFAIR_QUIET");

  // ---- prep ----------------------------------------------------------
  auto* prep = app.add_subcommand(
      "prep", "Preprocess an interaction log and write 6:2:2 split manifests");
  fs::path prep_input, prep_out_dir = ".";
  std::string user_col, item_col, prefix = "split";
  std::optional<std::string> rating_col, ts_col, delimiter;
  std::optional<double> rating_threshold;
  std::size_t min_interactions = 5, min_train = 5;
  std::string split_mode;
  std::uint64_t prep_seed = 42;
  prep->add_option("--input", prep_input, "Interaction log (delimited, header row)")
      ->required();
  prep->add_option("--user-col", user_col, "User id column name")->required();
  prep->add_option("--item-col", item_col, "Item id column name")->required();
  prep->add_option("--rating-col", rating_col, "Rating column name");
  prep->add_option("--ts-col", ts_col, "Timestamp column name (epoch seconds)");
  prep->add_option("--delimiter", delimiter,
                   "Field delimiter (auto-detects tab/comma)");
  prep->add_option("--rating-threshold", rating_threshold,
                   "Keep ratings >= threshold, binarized to 1");
  prep->add_option("--min-interactions", min_interactions,
                   "Iterative user/item core filter threshold")
      ->capture_default_str();
  prep->add_option("--min-train", min_train,
                   "Drop users with fewer train interactions from all splits")
      ->capture_default_str();
  prep->add_option("--split", split_mode, "temporal|random")
      ->required()
      ->check(CLI::IsMember({"temporal", "random"}));
  prep->add_option("--seed", prep_seed, "Shuffle seed for random splits")
      ->capture_default_str()
      ->envname("RECFAIR_SEED");
  prep->add_option("--out-dir", prep_out_dir, "Output directory")
      ->capture_default_str();
  prep->add_option("--prefix", prefix, "Output filename prefix")
      ->capture_default_str();

  // ---- recommend -----------------------------------------------------
  auto* rec = app.add_subcommand(
      "recommend", "Produce a KNN run file from a train manifest");
  fs::path rec_train, rec_out;
  std::string flavor = "user";
  std::size_t rec_neighbors = 50, rec_k = 10;
  rec->add_option("--train", rec_train, "Train split manifest")->required();
  rec->add_option("--flavor", flavor, "user|item")
      ->capture_default_str()
      ->check(CLI::IsMember({"user", "item"}));
  rec->add_option("--neighbors", rec_neighbors, "Neighborhood size K")
      ->capture_default_str();
  rec->add_option("--k", rec_k, "Recommendation list length")
      ->capture_default_str()
      ->envname("RECFAIR_K");
  rec->add_option("--out", rec_out, "Run file path (stdout when omitted)");

  // ---- eval ----------------------------------------------------------
  auto* eval = app.add_subcommand(
      "eval", "Fairness + effectiveness report for a run file");
  fs::path eval_run, eval_test, eval_train;
  std::optional<fs::path> eval_out, eval_csv;
  std::size_t eval_k = 10;
  double eval_epsilon = 0.05;
  bool allow_train_items = false;
  std::string run_id, dataset_id;
  eval->add_option("--run", eval_run, "Run file (user/item/rank/score)")
      ->required();
  eval->add_option("--test", eval_test, "Test split manifest")->required();
  eval->add_option("--train", eval_train, "Train split manifest")->required();
  eval->add_option("--k", eval_k, "Evaluation cutoff")
      ->capture_default_str()
      ->envname("RECFAIR_K");
  eval->add_option("--epsilon", eval_epsilon, "Envy threshold for PEU")
      ->capture_default_str()
      ->envname("RECFAIR_EPSILON");
  eval->add_flag("--allow-train-items", allow_train_items,
                 "Skip the no-train-items run validation");
  eval->add_option("--run-id", run_id, "Report provenance: run id");
  eval->add_option("--dataset-id", dataset_id, "Report provenance: dataset id");
  eval->add_option("--out", eval_out, "Also write the JSON report here");
  eval->add_option("--csv", eval_csv, "Also write a CSV row here");

  // ---- sweep-relevance -------------------------------------------------
  auto* sweep_rel = app.add_subcommand(
      "sweep-relevance", "Degrade a growing user fraction to zero relevance");
  fs::path sr_train, sr_test;
  std::optional<fs::path> sr_out_dir;
  std::size_t sr_k = 10;
  double sr_step = 0.1, sr_epsilon = 0.05;
  std::uint64_t sr_seed = 42;
  sweep_rel->add_option("--train", sr_train, "Train split manifest")->required();
  sweep_rel->add_option("--test", sr_test, "Test split manifest")->required();
  sweep_rel->add_option("--k", sr_k, "Cutoff")->capture_default_str()
      ->envname("RECFAIR_K");
  sweep_rel->add_option("--step", sr_step, "Degraded-user fraction per point")
      ->capture_default_str();
  sweep_rel->add_option("--epsilon", sr_epsilon, "Envy threshold")
      ->capture_default_str();
  sweep_rel->add_option("--seed", sr_seed, "Sweep seed")
      ->capture_default_str()
      ->envname("RECFAIR_SEED");
  sweep_rel->add_option("--out-dir", sr_out_dir,
                        "Write CSV+JSON here (stdout CSV when omitted)");

  // ---- sweep-similarity ------------------------------------------------
  auto* sweep_sim = app.add_subcommand(
      "sweep-similarity",
      "Replace pairwise similarities with synthetic skewed draws");
  fs::path ss_train, ss_test, ss_run;
  std::optional<fs::path> ss_out_dir;
  std::size_t ss_k = 10;
  std::string ss_lambdas = "0.5,1,2,5,10,50";
  std::uint64_t ss_seed = 42;
  sweep_sim->add_option("--train", ss_train, "Train split manifest")->required();
  sweep_sim->add_option("--test", ss_test, "Test split manifest")->required();
  sweep_sim->add_option("--run", ss_run, "Run file whose scores stay fixed")
      ->required();
  sweep_sim->add_option("--k", ss_k, "Cutoff")->capture_default_str()
      ->envname("RECFAIR_K");
  sweep_sim->add_option("--lambdas", ss_lambdas, "Weibull shapes, comma-separated")
      ->capture_default_str();
  sweep_sim->add_option("--seed", ss_seed, "Draw/assignment seed")
      ->capture_default_str()
      ->envname("RECFAIR_SEED");
  sweep_sim->add_option("--out-dir", ss_out_dir,
                        "Write CSV+JSON here (stdout CSV when omitted)");

  // ---- extreme ---------------------------------------------------------
  auto* extreme = app.add_subcommand(
      "extreme", "Sorted similarity assignment against effectiveness gaps");
  fs::path ex_train, ex_test;
  std::optional<fs::path> ex_out_dir;
  std::size_t ex_k = 10;
  double ex_step = 0.1, ex_lambda = 2.0;
  std::string ex_mode = "most_fair";
  std::uint64_t ex_seed = 42;
  extreme->add_option("--train", ex_train, "Train split manifest")->required();
  extreme->add_option("--test", ex_test, "Test split manifest")->required();
  extreme->add_option("--k", ex_k, "Cutoff")->capture_default_str()
      ->envname("RECFAIR_K");
  extreme->add_option("--step", ex_step, "Degraded-user fraction per point")
      ->capture_default_str();
  extreme->add_option("--lambda", ex_lambda, "Weibull shape for the draws")
      ->capture_default_str();
  extreme->add_option("--mode", ex_mode, "most_fair|most_unfair")
      ->capture_default_str()
      ->check(CLI::IsMember({"most_fair", "most_unfair"}));
  extreme->add_option("--seed", ex_seed, "Sweep seed")
      ->capture_default_str()
      ->envname("RECFAIR_SEED");
  extreme->add_option("--out-dir", ex_out_dir,
                      "Write CSV+JSON here (stdout CSV when omitted)");

  // ---- agree -----------------------------------------------------------
  auto* agree = app.add_subcommand(
      "agree", "Kendall tau-b agreement matrix across model reports");
  std::vector<fs::path> agree_reports;
  std::optional<fs::path> agree_out;
  bool agree_flip = false;
  agree->add_option("--reports", agree_reports, "Two or more report JSON files")
      ->required()
      ->expected(-2);
  agree->add_flag("--flip", agree_flip,
                  "Negate unfairness measures before correlating");
  agree->add_option("--out", agree_out, "Also write the CSV matrix here");

  // ---- bench -----------------------------------------------------------
  auto* bench_cmd = app.add_subcommand(
      "bench", "Wall-clock timing of the fairness measures on synthetic data");
  std::size_t bench_m = 2000, bench_k = 10, bench_repeats = 3;
  std::uint64_t bench_seed = 42;
  std::string bench_measures;
  bench_cmd->add_option("--m", bench_m, "Synthetic user count")
      ->capture_default_str();
  bench_cmd->add_option("--k", bench_k, "Cutoff")->capture_default_str()
      ->envname("RECFAIR_K");
  bench_cmd->add_option("--repeats", bench_repeats, "Timing repeats per measure")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "Synthetic data seed")
      ->capture_default_str()
      ->envname("RECFAIR_SEED");
  bench_cmd->add_option("--measures", bench_measures,
                        "Comma-separated measure subset (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
  }

  set_thread_count(threads);

  try {
    if (*prep) {
      dataio::ColumnSpec spec;
      spec.user_col = user_col;
      spec.item_col = item_col;
      spec.rating_col = rating_col;
      spec.timestamp_col = ts_col;
      if (delimiter && !delimiter->empty()) spec.delimiter = (*delimiter)[0];

      const auto rows = dataio::load_interactions(prep_input, spec);
      log_info("loaded " + std::to_string(rows.size()) + " interactions");
      const auto ds = dataio::preprocess(rows, rating_threshold, min_interactions);
      const auto mode = split_mode == "temporal" ? dataio::SplitMode::temporal
                                                 : dataio::SplitMode::random;
      const auto sp = dataio::split(ds, mode, {}, prep_seed, min_train);

      fs::create_directories(prep_out_dir);
      const auto write_part = [&](const char* name,
                                  const dataio::InteractionDataset& part) {
        std::ostringstream os;
        dataio::write_interactions_tsv(os, part);
        write_file(prep_out_dir / (prefix + "." + name + ".tsv"), os.str());
      };
      write_part("train", sp.train);
      write_part("validation", sp.validation);
      write_part("test", sp.test);

      const auto stats_text = dataio::stats_json(dataio::stats(sp));
      write_file(prep_out_dir / (prefix + ".stats.json"), stats_text + "\n");
      std::cout << stats_text << '\n';
    } else if (*rec) {
      const auto train_rows = dataio::load_interactions(rec_train, manifest_columns());
      std::vector<std::string> users, items;
      std::unordered_map<std::string, std::uint32_t> useen, iseen;
      append_new_ids(train_rows, users, items, useen, iseen);
      const auto train = dataio::make_dataset(train_rows, users, items);

      neighbors::KnnConfig cfg;
      cfg.flavor = flavor == "user" ? neighbors::KnnFlavor::user
                                    : neighbors::KnnFlavor::item;
      cfg.neighbors = rec_neighbors;
      cfg.cutoff = rec_k;
      const auto run = neighbors::recommend(train, cfg);

      std::ostringstream os;
      effmetrics::write_run_tsv(os, run, train.user_ids, train.item_ids);
      if (rec_out.empty())
        std::cout << os.str();
      else
        write_file(rec_out, os.str());
    } else if (*eval) {
      auto bundle = load_eval_inputs(eval_train, eval_test, eval_run);
      if (!allow_train_items)
        effmetrics::validate_run(bundle.run, &bundle.train.profiles);
      if (run_id.empty()) run_id = eval_run.stem().string();
      if (dataset_id.empty()) dataset_id = eval_test.stem().string();

      const auto report =
          fairmetrics::full_report(bundle.run, bundle.test, bundle.train.profiles,
                                   eval_k, eval_epsilon, run_id, dataset_id);
      for (const auto& w : report.warnings) log_info("warning: " + w);
      const auto json = fairmetrics::report_json(report);
      std::cout << json << '\n';
      if (eval_out) write_file(*eval_out, json + "\n");
      if (eval_csv) write_file(*eval_csv, fairmetrics::report_csv(report));
    } else if (*sweep_rel) {
      const auto bundle = load_eval_inputs(sr_train, sr_test, std::nullopt);
      const auto trace = labs::relevance_sweep(bundle.train, bundle.test, sr_k,
                                               sr_step, sr_seed, sr_epsilon);
      emit_trace(trace, sr_out_dir);
    } else if (*sweep_sim) {
      auto bundle = load_eval_inputs(ss_train, ss_test, ss_run);
      const auto trace = labs::similarity_sweep(
          bundle.train, bundle.test, bundle.run, ss_k, parse_lambdas(ss_lambdas),
          ss_seed);
      emit_trace(trace, ss_out_dir);
    } else if (*extreme) {
      const auto bundle = load_eval_inputs(ex_train, ex_test, std::nullopt);
      const auto mode = ex_mode == "most_fair" ? simkit::AssignMode::most_fair
                                               : simkit::AssignMode::most_unfair;
      const auto trace = labs::extreme_case(bundle.train, bundle.test, ex_k,
                                            ex_step, ex_lambda, mode, ex_seed);
      emit_trace(trace, ex_out_dir);
    } else if (*agree) {
      std::vector<fairmetrics::FairnessReport> reports;
      for (const auto& path : agree_reports) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open report: " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        reports.push_back(fairmetrics::report_from_json(buf.str()));
      }
      const auto matrix = labs::agreement_matrix(reports, agree_flip);
      const auto csv = labs::agreement_csv(matrix);
      std::cout << csv;
      if (agree_out) write_file(*agree_out, csv);
    } else if (*bench_cmd) {
      std::vector<std::string> names;
      if (bench_measures.empty()) {
        names = labs::default_bench_measures();
      } else {
        std::stringstream ss(bench_measures);
        std::string part;
        while (std::getline(ss, part, ','))
          if (!part.empty()) names.push_back(part);
      }
      const auto rows = labs::bench(names, bench_m, bench_k, bench_seed,
                                    bench_repeats);
      std::cout << labs::bench_csv(rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
    return 1;
  }
  return 0;
}
