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
//
// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero when any criterion fails. Criterion 10 drives the installed CLI
// end to end and needs --cli <path-to-binary>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recfair/fairmetrics.hpp"
#include "recfair/labs.hpp"
#include "recfair/neighbors.hpp"
#include "recfair/rng.hpp"
#include "subprocess.hpp"

namespace fs = std::filesystem;
using namespace recfair;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> failures;
  std::string note;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool passed() const { return failures.empty(); }
};

std::vector<Criterion> g_results;

void report(Criterion c) {
  std::printf("[%s] criterion %d: %s", c.passed() ? "PASS" : "FAIL", c.number,
              c.title.c_str());
  if (!c.note.empty()) std::printf(" (%s)", c.note.c_str());
  std::printf("\n");
  for (const auto& f : c.failures) std::printf("       - %s\n", f.c_str());
  std::fflush(stdout);
  g_results.push_back(std::move(c));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

simkit::PairwiseSimilarities random_sims(Rng& rng, std::size_t m) {
  simkit::PairwiseSimilarities sims;
  sims.m = m;
  sims.normalized = true;
  sims.values.resize(simkit::pair_count(m));
  for (auto& v : sims.values) v = uniform01(rng);
  return sims;
}

double puf_naive(const simkit::PairwiseSimilarities& sims,
                 const std::vector<double>& scores) {
  const std::size_t m = scores.size();
  double sum = 0.0;
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v)
      if (u != v) sum += sims.at(u, v) * std::abs(scores[u] - scores[v]);
  return sum / (static_cast<double>(m) * static_cast<double>(m - 1));
}

std::optional<double> entry(const labs::TracePoint& pt, const std::string& key) {
  for (const auto& [k, v] : pt.entries)
    if (k == key) return v;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

void criterion_1() {
  Criterion c{1, "PUF matches the naive double-loop oracle"};
  const auto t0 = Clock::now();
  Rng rng(101);
  const std::size_t sizes[] = {2, 3, 10, 50, 200};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t m = sizes[i % 5];
    const auto sims = random_sims(rng, m);
    std::vector<double> scores(m);
    for (auto& s : scores) s = uniform01(rng);
    const double diff =
        std::abs(fairmetrics::puf(sims, scores) - puf_naive(sims, scores));
    worst = std::max(worst, diff);
  }
  const double elapsed = seconds_since(t0);
  c.expect(worst <= 1e-10, "max deviation " + fmt(worst) + " exceeds 1e-10");
  c.expect(elapsed < 10.0, "runtime " + fmt(elapsed) + "s exceeds 10s");
  c.note = "max dev " + fmt(worst) + ", " + fmt(elapsed) + "s";
  report(std::move(c));
}

void criterion_2() {
  Criterion c{2, "PUF range and zero/one pins"};
  Rng rng(202);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 2 + uniform_below(rng, 50);
    const auto sims = random_sims(rng, m);
    std::vector<double> scores(m);
    const bool constant = i % 4 == 0;
    const double fixed = uniform01(rng);
    for (auto& s : scores) s = constant ? fixed : uniform01(rng);
    const double value = fairmetrics::puf(sims, scores);
    c.expect(value >= 0.0 && value <= 1.0,
             "value " + fmt(value) + " outside [0,1] at m=" + std::to_string(m));
    if (constant)
      c.expect(value == 0.0, "constant scores gave " + fmt(value));
    if (!c.failures.empty()) break;
  }
  simkit::PairwiseSimilarities unit;
  unit.m = 2;
  unit.normalized = true;
  unit.values = {1.0};
  c.expect(fairmetrics::puf(unit, std::vector<double>{1.0, 0.0}) == 1.0,
           "the (m=2, sim=1, S=(1,0)) case is not exactly 1");
  report(std::move(c));
}

struct SweepArtifacts {
  labs::SyntheticData data;
  labs::ExperimentTrace trace;
  double seconds = 0.0;
};

SweepArtifacts run_criterion3_sweep() {
  SweepArtifacts art{labs::synthetic_split({1000, 2000, 16, 6, 2026}), {}, 0.0};
  const auto t0 = Clock::now();
  art.trace =
      labs::relevance_sweep(art.data.train, art.data.test, 10, 0.1, 7);
  art.seconds = seconds_since(t0);
  return art;
}

void criterion_3(const SweepArtifacts& art) {
  Criterion c{3, "relevance sweep shape on synthetic m=1000, n=2000"};
  const auto& pts = art.trace.points;
  c.expect(pts.size() == 11, "expected 11 sweep points");
  if (pts.size() == 11) {
    const auto& first = pts.front();
    const auto& mid = pts[5];
    const auto& last = pts.back();
    for (const char* key : {"PUF-Prec-Jacc", "PUF-NDCG-Jacc", "SD-P", "SD-NDCG"}) {
      c.expect(*entry(mid, key) > *entry(first, key),
               std::string(key) + " at 50% does not exceed the 0% endpoint");
      c.expect(*entry(mid, key) > *entry(last, key),
               std::string(key) + " at 50% does not exceed the 100% endpoint");
    }
    const double uf0 = *entry(first, "UF");
    for (const auto& pt : pts)
      c.expect(*entry(pt, "UF") == uf0, "UF differs at x=" + fmt(pt.x));
    c.expect(!entry(last, "Gini-P").has_value(),
             "Gini-P defined at 100% degradation");
    c.expect(!entry(last, "Gini-NDCG").has_value(),
             "Gini-NDCG defined at 100% degradation");
    for (std::size_t i = 1; i < pts.size(); ++i)
      c.expect(*entry(pts[i], "NDCG") < *entry(pts[i - 1], "NDCG"),
               "mean NDCG not strictly decreasing at point " + std::to_string(i));
  }
  c.expect(art.seconds < 120.0, "runtime " + fmt(art.seconds) + "s exceeds 2min");
  c.note = fmt(art.seconds) + "s";
  report(std::move(c));
}

void criterion_4(const SweepArtifacts& art) {
  Criterion c{4, "MME observed range stays below 1e-2"};
  std::vector<double> mme_values;
  for (const auto& pt : art.trace.points)
    mme_values.push_back(*entry(pt, "MME"));

  // desk-scale dataset with a realistic (Zipf) item popularity: list overlap
  // across users is what compresses envy in practice
  const auto desk = labs::synthetic_split({200, 300, 14, 6, 515, 1.0});
  for (const auto flavor : {neighbors::KnnFlavor::user, neighbors::KnnFlavor::item}) {
    const auto run = neighbors::recommend(desk.train, {flavor, 50, 10});
    const auto report_ =
        fairmetrics::full_report(run, desk.test, desk.train.profiles, 10, 0.05);
    mme_values.push_back(*report_.value("MME"));
  }
  const auto [lo, hi] = std::minmax_element(mme_values.begin(), mme_values.end());
  const double range = *hi - *lo;
  c.expect(range < 1e-2, "MME range " + fmt(range) + " is not below 1e-2");
  c.note = "range " + fmt(range) + " over " +
           std::to_string(mme_values.size()) + " values";
  report(std::move(c));
}

void criterion_5(const SweepArtifacts& art) {
  Criterion c{5, "similarity sweep: SD invariant, PUF tracks skewness"};
  const auto t0 = Clock::now();
  const auto run =
      neighbors::recommend(art.data.train, {neighbors::KnnFlavor::user, 50, 10});
  const auto trace = labs::similarity_sweep(art.data.train, art.data.test, run,
                                            10, labs::kDefaultLambdas, 7);
  const double elapsed = seconds_since(t0);

  c.expect(trace.points.size() == 7, "expected 7 distribution points");
  const double sd_p = *entry(trace.points.front(), "SD-P");
  const double sd_n = *entry(trace.points.front(), "SD-NDCG");
  for (const auto& pt : trace.points) {
    c.expect(*entry(pt, "SD-P") == sd_p, "SD-P varies at " + pt.label);
    c.expect(*entry(pt, "SD-NDCG") == sd_n, "SD-NDCG varies at " + pt.label);
  }
  const labs::TracePoint *left = nullptr, *right = nullptr;
  for (const auto& pt : trace.points) {
    if (pt.label == "weibull-50") left = &pt;
    if (pt.label == "weibull-0.5") right = &pt;
  }
  c.expect(left != nullptr && right != nullptr, "lambda points missing");
  if (left && right) {
    for (const char* key : {"PUF-Prec", "PUF-NDCG"}) {
      c.expect(*entry(*left, key) > *entry(*right, key),
               std::string(key) + " not larger at lambda=50 than lambda=0.5");
    }
  }
  const auto& steepest = trace.points.back();  // sorted by skewness
  for (const char* key : {"PUF-Prec", "PUF-NDCG"})
    c.expect(*entry(steepest, key) < 0.05,
             std::string(key) + " = " + fmt(*entry(steepest, key)) +
                 " at the highest-skew point is not below 0.05");
  c.expect(elapsed < 60.0, "runtime " + fmt(elapsed) + "s exceeds 1min");
  c.note = fmt(elapsed) + "s";
  report(std::move(c));
}

void criterion_6(const SweepArtifacts& art) {
  Criterion c{6, "extreme assignment bounds"};
  const auto fair =
      labs::extreme_case(art.data.train, art.data.test, 10, 0.1, 2.0,
                         simkit::AssignMode::most_fair, 7);
  const auto unfair =
      labs::extreme_case(art.data.train, art.data.test, 10, 0.1, 2.0,
                         simkit::AssignMode::most_unfair, 7);
  c.expect(fair.points.size() == unfair.points.size(), "point counts differ");

  double fair_max = 0.0, unfair_max = 0.0, uf_gap_max = 0.0;
  for (std::size_t i = 0; i < fair.points.size(); ++i) {
    const auto& pf = fair.points[i];
    const auto& pu = unfair.points[i];
    for (const char* key : {"PUF-Prec", "PUF-NDCG"}) {
      const double f = *entry(pf, key);
      const double u = *entry(pu, key);
      c.expect(f <= u, std::string(key) + " most_fair exceeds most_unfair at x=" +
                           fmt(pf.x));
      fair_max = std::max(fair_max, f);
      unfair_max = std::max(unfair_max, u);
    }
    for (const char* key : {"UF-Prec", "UF-NDCG"}) {
      const double gap = std::abs(*entry(pf, key) - *entry(pu, key));
      uf_gap_max = std::max(uf_gap_max, gap);
    }
  }
  c.expect(fair_max < 0.05,
           "most_fair PUF reaches " + fmt(fair_max) + ", not below 0.05");
  c.expect(unfair_max < 0.2,
           "most_unfair PUF reaches " + fmt(unfair_max) + ", not below 0.2");
  c.expect(uf_gap_max < 0.05,
           "UF gap between modes reaches " + fmt(uf_gap_max));
  c.note = "fair max " + fmt(fair_max) + ", unfair max " + fmt(unfair_max) +
           ", UF gap " + fmt(uf_gap_max);
  report(std::move(c));
}

// count-based tau-b, written independently of labs::kendall_tau_b
std::optional<double> tau_counts(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, tx = 0, ty = 0, txy = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x[i] == x[j] && y[i] == y[j]) {
        ++txy;
      } else if (x[i] == x[j]) {
        ++tx;
      } else if (y[i] == y[j]) {
        ++ty;
      } else if ((x[i] < x[j]) == (y[i] < y[j])) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  if (n0 == tx + txy || n0 == ty + txy) return std::nullopt;
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(n0 - tx - txy) *
                   static_cast<double>(n0 - ty - txy));
}

void criterion_7() {
  Criterion c{7, "Kendall tau-b equals exhaustive pair enumeration"};
  const auto t0 = Clock::now();
  long long compared = 0;
  for (std::size_t n = 2; n <= 8 && c.failures.empty(); ++n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    std::vector<double> x(n), y(n);
    for (std::size_t cx = 0; cx < total && c.failures.empty(); ++cx) {
      std::size_t vx = cx;
      for (std::size_t i = 0; i < n; ++i, vx /= 3)
        x[i] = static_cast<double>(1 + vx % 3);
      for (std::size_t cy = 0; cy < total; ++cy) {
        std::size_t vy = cy;
        for (std::size_t i = 0; i < n; ++i, vy /= 3)
          y[i] = static_cast<double>(1 + vy % 3);
        const auto got = labs::kendall_tau_b(x, y);
        const auto want = tau_counts(x, y);
        ++compared;
        if (got.has_value() != want.has_value() ||
            (got.has_value() && *got != *want)) {
          c.expect(false, "mismatch at n=" + std::to_string(n));
          break;
        }
      }
    }
  }
  const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 2, 4};
  const double tie_example = *labs::kendall_tau_b(a, b);
  c.expect(std::abs(tie_example - 0.9129) <= 1e-4,
           "tie example evaluates to " + fmt(tie_example));
  c.note = std::to_string(compared) + " vector pairs, " +
           fmt(seconds_since(t0)) + "s";
  report(std::move(c));
}

void criterion_8() {
  Criterion c{8, "timing ordering at m=2000"};
  const auto t0 = Clock::now();
  const auto names = labs::default_bench_measures();
  const auto rows = labs::bench(names, 2000, 10, 2026, 3);
  std::map<std::string, double> secs;
  for (const auto& row : rows) secs[row.measure] = row.mean_seconds;

  const double puf_max =
      std::max({secs["PUF-Prec-Cos"], secs["PUF-Prec-Jacc"],
                secs["PUF-NDCG-Cos"], secs["PUF-NDCG-Jacc"]});
  c.expect(secs["ME"] >= 5.0 * puf_max,
           "envy suite " + fmt(secs["ME"]) + "s is not 5x PUF " + fmt(puf_max) + "s");
  c.expect(secs["UF"] >= 5.0 * puf_max,
           "UF " + fmt(secs["UF"]) + "s is not 5x PUF " + fmt(puf_max) + "s");
  for (const char* key : {"SD-P", "SD-NDCG", "Gini-P", "Gini-NDCG"})
    c.expect(secs[key] < 0.1, std::string(key) + " above 0.1s");
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 600.0, "runtime " + fmt(elapsed) + "s exceeds 10min");
  c.note = "PUF " + fmt(puf_max) + "s, envy " + fmt(secs["ME"]) + "s, UF " +
           fmt(secs["UF"]) + "s, total " + fmt(elapsed) + "s";
  report(std::move(c));
}

void criterion_9() {
  Criterion c{9, "effectiveness oracles and hit-count identity"};
  // exhaustive DCG/AP tables for lists up to length 5 and up to 3 test items
  for (std::size_t len = 1; len <= 5 && c.failures.empty(); ++len) {
    for (std::uint32_t pattern = 0; pattern < (1u << len); ++pattern) {
      const int hits = std::popcount(pattern);
      if (hits > 3) continue;
      for (int r_u = std::max(1, hits); r_u <= 3; ++r_u) {
        std::vector<std::string> user_ids{"u0"}, item_ids;
        for (int i = 0; i < 110; ++i) item_ids.push_back("i" + std::to_string(i));
        std::vector<dataio::Interaction> rows;
        std::vector<std::uint32_t> list(len);
        for (std::size_t i = 0; i < len; ++i) {
          list[i] = static_cast<std::uint32_t>(i);
          if (pattern & (1u << i))
            rows.push_back({"u0", item_ids[i], std::nullopt, std::nullopt});
        }
        for (int extra = hits; extra < r_u; ++extra)
          rows.push_back({"u0", item_ids[100 + extra], std::nullopt, std::nullopt});
        const auto test = dataio::make_dataset(rows, user_ids, item_ids);
        effmetrics::RankedRun run;
        run.k = len;
        run.lists = {list};
        const auto all = effmetrics::evaluate_all(run, test, len);

        double dcg = 0.0, idcg = 0.0, ap = 0.0;
        int seen = 0;
        for (std::size_t r = 1; r <= len; ++r) {
          if (pattern & (1u << (r - 1))) {
            ++seen;
            dcg += 1.0 / std::log2(static_cast<double>(r) + 1.0);
            ap += static_cast<double>(seen) / static_cast<double>(r);
          }
        }
        const std::size_t ideal = std::min<std::size_t>(len, r_u);
        for (std::size_t r = 1; r <= ideal; ++r)
          idcg += 1.0 / std::log2(static_cast<double>(r) + 1.0);
        const double ndcg = idcg == 0.0 ? 0.0 : dcg / idcg;
        const double map = ap / static_cast<double>(ideal);
        if (all[5].scores[0] != ndcg || all[4].scores[0] != map) {
          c.expect(false, "table mismatch at len=" + std::to_string(len));
          break;
        }
      }
    }
  }

  Rng rng(909);
  for (int trial = 0; trial < 1000 && c.failures.empty(); ++trial) {
    const std::size_t k = 10;
    const std::size_t r_u = 1 + uniform_below(rng, 20);
    std::vector<std::string> user_ids{"u0"}, item_ids;
    for (int i = 0; i < 50; ++i) item_ids.push_back("i" + std::to_string(i));
    std::vector<dataio::Interaction> rows;
    for (std::size_t i = 0; i < r_u; ++i)
      rows.push_back({"u0", item_ids[i], std::nullopt, std::nullopt});
    const auto test = dataio::make_dataset(rows, user_ids, item_ids);

    std::vector<std::uint32_t> universe(50);
    for (std::size_t i = 0; i < universe.size(); ++i)
      universe[i] = static_cast<std::uint32_t>(i);
    shuffle_in_place(universe, rng);
    universe.resize(k);
    std::size_t hits = 0;
    for (auto item : universe)
      if (item < r_u) ++hits;

    effmetrics::RankedRun run;
    run.k = k;
    run.lists = {universe};
    const auto all = effmetrics::evaluate_all(run, test, k);
    const bool ok =
        all[2].scores[0] * static_cast<double>(k) == static_cast<double>(hits) &&
        all[3].scores[0] * static_cast<double>(r_u) == static_cast<double>(hits);
    c.expect(ok, "hit identity failed at trial " + std::to_string(trial));
  }
  report(std::move(c));
}

void criterion_10(const std::string& cli) {
  Criterion c{10, "pipeline determinism across reruns and thread counts"};
  if (cli.empty()) {
    c.expect(false, "no --cli binary supplied");
    report(std::move(c));
    return;
  }
  const auto root = fs::temp_directory_path() / "recfair_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  // bundled fixture: 200 users, duplicated/low-rated rows included
  const auto raw = root / "fixture.tsv";
  {
    const auto rows = labs::synthetic_interactions(200, 300, 15, 4242);
    std::ofstream out(raw);
    out << "user\titem\trating\ttimestamp\n";
    for (const auto& it : rows)
      out << it.user << '\t' << it.item << '\t' << *it.rating << '\t'
          << *it.timestamp << '\n';
  }

  struct PipelineOutput {
    std::string bytes;
    bool ok = false;
  };
  auto pipeline = [&](const std::string& tag, unsigned threads) {
    PipelineOutput result;
    const auto dir = root / tag;
    fs::create_directories(dir);
    const std::string t = " --threads " + std::to_string(threads) + " --quiet ";

    const auto prep = testutil::run_command(
        cli + t + "prep --input " + raw.string() +
        " --user-col user --item-col item --rating-col rating"
        " --ts-col timestamp --rating-threshold 3 --split temporal --seed 11"
        " --out-dir " + dir.string());
    if (prep.exit_code != 0) return result;
    const auto rec = testutil::run_command(
        cli + t + "recommend --train " + (dir / "split.train.tsv").string() +
        " --flavor user --neighbors 20 --k 10 --out " +
        (dir / "run.tsv").string());
    if (rec.exit_code != 0) return result;
    const auto eval = testutil::run_command(
        cli + t + "eval --run " + (dir / "run.tsv").string() + " --test " +
        (dir / "split.test.tsv").string() + " --train " +
        (dir / "split.train.tsv").string() + " --out " +
        (dir / "report.json").string() + " --csv " +
        (dir / "report.csv").string());
    if (eval.exit_code != 0) return result;

    result.bytes = prep.out + eval.out;
    for (const char* name :
         {"split.train.tsv", "split.validation.tsv", "split.test.tsv",
          "split.stats.json", "run.tsv", "report.json", "report.csv"})
      result.bytes += testutil::slurp(dir / name);
    result.ok = true;
    return result;
  };

  const auto a = pipeline("a_t8", 8);
  const auto b = pipeline("b_t8", 8);
  const auto s = pipeline("c_t1", 1);
  c.expect(a.ok && b.ok && s.ok, "a pipeline stage exited nonzero");
  if (a.ok && b.ok && s.ok) {
    c.expect(a.bytes == b.bytes, "rerun with identical settings differs");
    c.expect(a.bytes == s.bytes, "--threads 1 differs from --threads 8");
    c.note = std::to_string(a.bytes.size()) + " bytes compared";
  }
  report(std::move(c));
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  criterion_1();
  criterion_2();
  const auto art = run_criterion3_sweep();
  criterion_3(art);
  criterion_4(art);
  criterion_5(art);
  criterion_6(art);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(cli);

  int failed = 0;
  for (const auto& c : g_results)
    if (!c.passed()) ++failed;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
              g_results.size());
  return failed == 0 ? 0 : 1;
}
