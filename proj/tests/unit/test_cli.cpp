// Copyright 2026 The hdlabel Authors
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

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <json.hpp>
#include <string>

#include "test_util.hpp"

#ifndef HDLABEL_CLI_PATH
#error "HDLABEL_CLI_PATH must point at the hdlabel executable"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult Run(const testutil::TempDir& dir, const std::string& args) {
  const std::string out = dir.File("stdout.txt"), err = dir.File("stderr.txt");
  const std::string cmd =
      std::string("'") + HDLABEL_CLI_PATH + "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testutil::ReadFile(out);
  r.err = testutil::ReadFile(err);
  return r;
}

// Writes a small synthetic task into dir and returns the shared path flags.
std::string MakeTask(const testutil::TempDir& dir) {
  const auto r = Run(dir, "gen-synth --classes 3 --dim 4 --per-class 40 --sigma 0.3 "
                          "--labeled-fraction 0.25 --seed 5 --labeled " + dir.File("l.emb") +
                              " --labels " + dir.File("l.csv") + " --unlabeled " +
                              dir.File("u.emb") + " --truth " + dir.File("t.csv"));
  REQUIRE(r.exit_code == 0);
  return "--labeled " + dir.File("l.emb") + " --labels " + dir.File("l.csv") + " --unlabeled " +
         dir.File("u.emb");
}

}  // namespace

TEST_CASE("label, eval and manifest") {
  testutil::TempDir dir;
  const std::string task = MakeTask(dir);
  const auto r = Run(dir, "label " + task + " --k 3 --seed 1 --out " + dir.File("o.csv"));
  REQUIRE(r.exit_code == 0);
  const std::string csv = testutil::ReadFile(dir.File("o.csv"));
  CHECK(csv.rfind("index,label,level,rank,margin\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 91);
  const auto manifest = nlohmann::json::parse(r.err);
  CHECK(manifest["chosen_k"] == 3);
  CHECK(manifest.contains("level_count"));
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest["config"]["method"] == "hdl");

  const auto e = Run(dir, "eval --output " + dir.File("o.csv") + " --truth " + dir.File("t.csv"));
  REQUIRE(e.exit_code == 0);
  const auto j = nlohmann::json::parse(e.out);
  CHECK(j["accuracy"].get<double>() > 0.9);
  CHECK(j["confusion"].size() == 3);
}

TEST_CASE("adaptive k and clusterability commands") {
  testutil::TempDir dir;
  const std::string task = MakeTask(dir);
  const std::string lab = "--labeled " + dir.File("l.emb") + " --labels " + dir.File("l.csv");
  const auto s = Run(dir, "select-k " + lab + " --seed 3 --p 0.5 --k-upper-limit 8");
  REQUIRE(s.exit_code == 0);
  CHECK(s.out.rfind("k,mu,beta,product\n", 0) == 0);
  CHECK(s.out.find("\nchosen,") != std::string::npos);

  const auto m = Run(dir, "estimate-mu " + lab + " --seed 3 --p 0.5 --k-min 1 --k-max 4");
  REQUIRE(m.exit_code == 0);
  CHECK(m.out.rfind("k,mu\n1,", 0) == 0);
  CHECK(std::count(m.out.begin(), m.out.end(), '\n') == 5);

  const auto a = Run(dir, "label " + task + " --k auto --p 0.5 --k-upper-limit 8 --seed 3 --out " +
                              dir.File("o.csv"));
  REQUIRE(a.exit_code == 0);
  const auto manifest = nlohmann::json::parse(a.err);
  CHECK(s.out.find("chosen," + std::to_string(manifest["chosen_k"].get<int>()) + "\n") !=
        std::string::npos);
}

TEST_CASE("exit codes") {
  testutil::TempDir dir;
  const std::string task = MakeTask(dir);
  const std::string out = " --out " + dir.File("o.csv");
  auto r = Run(dir, "label " + task + " --k 0 --seed 1" + out);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("--k") != std::string::npos);
  CHECK(Run(dir, "label " + task + " --k 3" + out).exit_code == 2);  // missing --seed
  CHECK(Run(dir, "label " + task + " --k 3 --seed 1 --method nope" + out).exit_code == 2);
  CHECK(Run(dir, "frobnicate").exit_code == 2);
  CHECK(Run(dir, "label " + task + " --k 3 --seed 1 --out " + dir.File("l.emb")).exit_code == 2);

  r = Run(dir, "label " + task + " --k 500 --seed 1" + out);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("KTooLarge") != std::string::npos);
  testutil::WriteFile(dir.File("bad.emb"), "EMB0");
  r = Run(dir, "label --labeled " + dir.File("bad.emb") + " --labels " + dir.File("l.csv") +
                   " --unlabeled " + dir.File("u.emb") + " --k 3 --seed 1" + out);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("MalformedFile") != std::string::npos);
}

TEST_CASE("byte determinism across runs and thread counts") {
  testutil::TempDir dir;
  const std::string task = MakeTask(dir);
  for (const std::string method : {"hdl", "knn-dv"}) {
    const std::string base = "label " + task + " --method " + method + " --k 5 --seed 9 ";
    REQUIRE(Run(dir, base + "--threads 1 --out " + dir.File("a.csv")).exit_code == 0);
    REQUIRE(Run(dir, base + "--threads 1 --out " + dir.File("b.csv")).exit_code == 0);
    REQUIRE(Run(dir, base + "--threads 8 --out " + dir.File("c.csv")).exit_code == 0);
    const std::string a = testutil::ReadFile(dir.File("a.csv"));
    CHECK(a == testutil::ReadFile(dir.File("b.csv")));
    CHECK(a == testutil::ReadFile(dir.File("c.csv")));
  }
}
