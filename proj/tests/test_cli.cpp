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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "subprocess.hpp"

namespace fs = std::filesystem;
using testutil::run_command;
using testutil::slurp;

namespace {

std::string cli() {
  const char* bin = std::getenv("RECFAIR_CLI_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "recfair_cli_tests";
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// small shared fixture: 4 users, manifest-format train/test plus a run file
struct Fixture {
  fs::path train, test, run;
  Fixture() {
    const auto dir = scratch();
    train = dir / "train.tsv";
    test = dir / "test.tsv";
    run = dir / "run.tsv";
    write(train,
          "user\titem\trating\ttimestamp\n"
          "u0\ta\t1\t\nu0\tb\t1\t\n"
          "u1\ta\t1\t\nu1\tc\t1\t\n"
          "u2\tb\t1\t\nu2\tc\t1\t\n"
          "u3\ta\t1\t\nu3\td\t1\t\n");
    write(test,
          "user\titem\trating\ttimestamp\n"
          "u0\tx\t1\t\nu1\ty\t1\t\nu2\tx\t1\t\nu3\ty\t1\t\n");
    write(run,
          "user\titem\trank\tscore\n"
          "u0\tx\t1\t2\nu0\ty\t2\t1\n"
          "u1\tx\t1\t2\nu1\td\t2\t1\n"
          "u2\ty\t1\t2\nu2\td\t2\t1\n"
          "u3\ty\t1\t2\nu3\tx\t2\t1\n");
  }
};

}  // namespace

TEST_CASE("eval emits a fairness report on stdout") {
  Fixture f;
  const auto r = run_command(cli() + " eval --run " + f.run.string() +
                             " --test " + f.test.string() + " --train " +
                             f.train.string() + " --k 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"PUF-Prec-Cos\"") != std::string::npos);
  CHECK(r.out.find("\"UF\"") != std::string::npos);
  CHECK(r.out.find("\"k\": 2") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  Fixture f;
  SUBCASE("missing required --test") {
    const auto r = run_command(cli() + " eval --run " + f.run.string() +
                               " --train " + f.train.string());
    CHECK(r.exit_code == 2);
  }
  SUBCASE("unknown flag") {
    const auto r = run_command(cli() + " eval --no-such-flag");
    CHECK(r.exit_code == 2);
  }
  SUBCASE("no subcommand") {
    CHECK(run_command(cli()).exit_code == 2);
  }
}

TEST_CASE("runtime failures exit with code 1 and a structured error") {
  Fixture f;
  const auto r = run_command(cli() + " eval --run /does/not/exist.tsv --test " +
                             f.test.string() + " --train " + f.train.string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("{\"error\":") != std::string::npos);
}

TEST_CASE("help text carries the defaults") {
  const auto top = run_command(cli() + " --help");
  CHECK(top.exit_code == 0);
  const auto r = run_command(cli() + " eval --help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("10") != std::string::npos);    // k default
  CHECK(r.out.find("0.05") != std::string::npos);  // epsilon default
}

TEST_CASE("prep writes three manifests plus a stats block") {
  const auto dir = scratch() / "prep_out";
  fs::remove_all(dir);
  const auto raw = scratch() / "raw.tsv";
  std::string log = "user\titem\trating\tts\n";
  // 8 users x 8 items, dense block so the 5-core keeps everything
  int ts = 0;
  for (int u = 0; u < 8; ++u)
    for (int i = 0; i < 8; ++i)
      log += "u" + std::to_string(u) + "\ti" + std::to_string(i) + "\t4\t" +
             std::to_string(1000 + ts++) + "\n";
  write(raw, log);

  const auto r = run_command(
      cli() + " prep --input " + raw.string() +
      " --user-col user --item-col item --rating-col rating --ts-col ts" +
      " --rating-threshold 3 --split temporal --seed 5 --min-train 0" +
      " --out-dir " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"users_all\": 8") != std::string::npos);
  CHECK(fs::exists(dir / "split.train.tsv"));
  CHECK(fs::exists(dir / "split.validation.tsv"));
  CHECK(fs::exists(dir / "split.test.tsv"));
  CHECK(fs::exists(dir / "split.stats.json"));

  // 6:2:2 over 64 interactions
  const auto train = slurp(dir / "split.train.tsv");
  CHECK(std::count(train.begin(), train.end(), '\n') == 1 + 38);  // floor(0.6*64)
}

TEST_CASE("recommend produces a loadable run for eval") {
  Fixture f;
  const auto out = scratch() / "knn_run.tsv";
  const auto r = run_command(cli() + " recommend --train " + f.train.string() +
                             " --flavor user --neighbors 2 --k 2 --out " +
                             out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out));
  const auto e = run_command(cli() + " eval --run " + out.string() + " --test " +
                             f.test.string() + " --train " + f.train.string() +
                             " --k 2");
  CHECK(e.exit_code == 0);
  CHECK(e.out.find("\"NDCG\"") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across reruns") {
  Fixture f;
  const auto dir_a = scratch() / "sweep_a";
  const auto dir_b = scratch() / "sweep_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  const std::string base = cli() + " sweep-relevance --train " +
                           f.train.string() + " --test " + f.test.string() +
                           " --k 2 --step 0.5 --seed 7 --out-dir ";
  CHECK(run_command(base + dir_a.string()).exit_code == 0);
  CHECK(run_command(base + dir_b.string()).exit_code == 0);

  bool compared = false;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const auto twin = dir_b / entry.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(slurp(entry.path()) == slurp(twin));
    compared = true;
  }
  CHECK(compared);
}

TEST_CASE("agree correlates eval reports") {
  Fixture f;
  const auto dir = scratch();
  const auto rep_a = dir / "rep_a.json";
  const auto rep_b = dir / "rep_b.json";
  const auto knn = dir / "agree_run.tsv";
  CHECK(run_command(cli() + " recommend --train " + f.train.string() +
                    " --flavor item --neighbors 2 --k 2 --out " + knn.string())
            .exit_code == 0);
  CHECK(run_command(cli() + " eval --run " + f.run.string() + " --test " +
                    f.test.string() + " --train " + f.train.string() +
                    " --k 2 --out " + rep_a.string())
            .exit_code == 0);
  CHECK(run_command(cli() + " eval --run " + knn.string() + " --test " +
                    f.test.string() + " --train " + f.train.string() +
                    " --k 2 --out " + rep_b.string())
            .exit_code == 0);

  const auto r = run_command(cli() + " agree --reports " + rep_a.string() + " " +
                             rep_b.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("measure,", 0) == 0);
}

TEST_CASE("bench prints a timing table") {
  const auto r = run_command(cli() +
                             " bench --m 50 --k 5 --seed 3 --repeats 1 "
                             "--measures SD-P,PUF-Prec-Cos");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("measure,mean_seconds,value", 0) == 0);
  CHECK(r.out.find("PUF-Prec-Cos") != std::string::npos);
}

TEST_CASE("config file supplies defaults, flags win") {
  Fixture f;
  const auto cfg = scratch() / "rf.toml";
  write(cfg, "threads=2\n");
  const auto r = run_command(cli() + " --config " + cfg.string() + " eval --run " +
                             f.run.string() + " --test " + f.test.string() +
                             " --train " + f.train.string() + " --k 2");
  CHECK(r.exit_code == 0);
}
