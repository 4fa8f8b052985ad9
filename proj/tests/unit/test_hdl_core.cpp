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

#include <map>

#include "hdlabel/error.hpp"
#include "hdlabel/hdl_core.hpp"
#include "hdlabel/knn_dv.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace hdlabel;
using testutil::MakeSet;

namespace {

// 1-D positions embedded as (x + 5, 1) so no row is the zero vector; the
// euclidean geometry is unchanged by the shift.
EmbeddingSet Line(std::initializer_list<float> xs) {
  oracle::Points pts;
  for (float x : xs) pts.push_back({x + 5.0f, 1.0f});
  return MakeSet(pts);
}

}  // namespace

TEST_CASE("labeled neighbor counts on small configurations") {
  SUBCASE("all neighbors labeled") {
    const auto labeled = MakeSet({{1, 0}, {0.9f, 0.1f}, {0.8f, 0.2f}});
    const LabelVector labels({0, 1, 0}, 2);
    const auto unlabeled = MakeSet({{1, 0.05f}});
    const UnionIndex index(labeled, unlabeled);
    const LabelStatus status(labels, 1);
    const auto counts = LabeledNeighborCounts(index, status, 3);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0] == NeighborCount{3, 3});
  }
  SUBCASE("line with labeled ends") {
    const auto labeled = Line({0, 10});
    const LabelVector labels({0, 1}, 2);
    const auto unlabeled = Line({1, 5, 9});
    const UnionIndex index(labeled, unlabeled, Metric::kEuclidean);
    const LabelStatus status(labels, 3);
    const auto counts = LabeledNeighborCounts(index, status, 2);
    REQUIRE(counts.size() == 3);
    CHECK(counts[0] == NeighborCount{2, 1});  // x=1: neighbors 0 and 5
    CHECK(counts[1] == NeighborCount{3, 0});  // x=5: neighbors 1 and 9
    CHECK(counts[2] == NeighborCount{4, 1});  // x=9: neighbors 10 and 5
  }
  SUBCASE("all three neighbors unlabeled") {
    const auto labeled = Line({100, 101});
    const LabelVector labels({0, 1}, 2);
    const auto unlabeled = Line({0, 1, 2, 3});
    const UnionIndex index(labeled, unlabeled, Metric::kEuclidean);
    const LabelStatus status(labels, 4);
    CHECK(LabeledNeighborCounts(index, status, 3)[0].count == 0);
  }
}

TEST_CASE("first level is the argmax set") {
  const std::vector<NeighborCount> a{{10, 2}, {11, 3}, {12, 3}};
  CHECK(SelectFirstLevel(a) == std::vector<GlobalId>{11, 12});
  const std::vector<NeighborCount> zeros{{5, 0}, {4, 0}};
  CHECK(SelectFirstLevel(zeros) == std::vector<GlobalId>{4, 5});
  const std::vector<NeighborCount> single{{7, 1}};
  CHECK(SelectFirstLevel(single) == std::vector<GlobalId>{7});
  CHECK(SelectFirstLevel({}).empty());
}

TEST_CASE("second-level ordering") {
  SUBCASE("single member scores zero") {
    const auto labeled = Line({0, 1});
    const LabelVector labels({0, 1}, 2);
    const auto unlabeled = Line({0.5f});
    const UnionIndex index(labeled, unlabeled, Metric::kEuclidean);
    const LabelStatus status(labels, 1);
    const std::vector<GlobalId> members{2};
    const LevelPlan plan = SecondLevelOrder(index, status, members, 2);
    CHECK(plan.scores == std::vector<std::int64_t>{0});
    CHECK(plan.order == std::vector<GlobalId>{2});
    CHECK(plan.max_count == 2);
  }
  SUBCASE("two isolated members tie and fall back to id order") {
    const auto labeled = MakeSet({{0, 1}, {0.1f, 1}, {10, 1}, {10.1f, 1}});
    const LabelVector labels({0, 0, 1, 1}, 2);
    const auto unlabeled = MakeSet({{10.05f, 1.05f}, {0.05f, 1.05f}});
    const UnionIndex index(labeled, unlabeled, Metric::kEuclidean);
    const LabelStatus status(labels, 2);
    const std::vector<GlobalId> members{5, 4};
    const LevelPlan plan = SecondLevelOrder(index, status, members, 2);
    CHECK(plan.members == std::vector<GlobalId>{4, 5});
    CHECK(plan.scores == std::vector<std::int64_t>{2, 2});
    CHECK(plan.order == std::vector<GlobalId>{4, 5});
  }
  SUBCASE("shared neighbor is labeled first") {
    // p sits in the 3-NN of both q and r; neither q nor r is in any
    // member's 3-NN; every member starts with two labeled neighbors.
    const auto labeled = MakeSet({{5, 5.1f}, {5, 4.9f}, {3.8f, 5}, {3.7f, 5}, {6.2f, 5}, {6.3f, 5}});
    const LabelVector labels({0, 0, 1, 1, 0, 0}, 2);
    const auto unlabeled = MakeSet({{5, 5}, {4, 5}, {6, 5}, {5, 5.05f}});  // p, q, r, u
    const UnionIndex index(labeled, unlabeled, Metric::kEuclidean);
    const LabelStatus status(labels, 4);
    const std::vector<GlobalId> members{6, 7, 8};
    const LevelPlan plan = SecondLevelOrder(index, status, members, 3);
    CHECK(plan.max_count == 2);
    CHECK(plan.scores == std::vector<std::int64_t>{6, 4, 4});
    CHECK(plan.order == std::vector<GlobalId>{6, 7, 8});
  }
  SUBCASE("empty member set is rejected") {
    const auto labeled = Line({0, 1});
    const LabelVector labels({0, 1}, 2);
    const auto unlabeled = Line({0.5f});
    const UnionIndex index(labeled, unlabeled, Metric::kEuclidean);
    const LabelStatus status(labels, 1);
    CHECK_THROWS_AS(SecondLevelOrder(index, status, {}, 1), Error);
  }
}

TEST_CASE("run_hdl degenerate inputs") {
  const auto labeled = MakeSet({{1, 0}, {0.9f, 0.1f}, {0, 1}, {0.1f, 0.9f}});
  const LabelVector labels({0, 0, 1, 1}, 2);
  SUBCASE("no unlabeled points") {
    const HdlResult r = RunHdl(labeled, labels, EmbeddingSet{}, 2);
    CHECK(r.output.empty());
    CHECK(r.levels.empty());
  }
  SUBCASE("single point matches knn-dv when its neighbors are all labeled") {
    const auto unlabeled = MakeSet({{0.95f, 0.02f}});
    const HdlResult r = RunHdl(labeled, labels, unlabeled, 3);
    const LabeledOutput dv = RunKnnDv(labeled, labels, unlabeled, 3);
    REQUIRE(r.output.size() == 1);
    CHECK(r.output[0].label == dv[0].label);
    CHECK(r.output[0].margin == dv[0].margin);
    CHECK(r.levels.size() == 1);
  }
  SUBCASE("k too large") {
    const auto unlabeled = MakeSet({{0.95f, 0.02f}});
    CHECK_THROWS_AS(RunHdl(labeled, labels, unlabeled, 5), Error);
    try {
      RunHdl(labeled, labels, unlabeled, 5);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kKTooLarge);
    }
  }
}

TEST_CASE("zero-voter fallback labels through the nearest labeled points") {
  // The unlabeled chain is far from the labeled pair, so every union 2-NN
  // of the chain is unlabeled at the start.
  const auto labeled = Line({0, 0.5f});
  const LabelVector labels({1, 1}, 2);
  const auto unlabeled = Line({20, 21, 22, 23});
  const HdlResult r = RunHdl(labeled, labels, unlabeled, 2, Metric::kEuclidean);
  REQUIRE(r.levels.size() >= 1);
  CHECK(r.levels[0].max_count == 0);
  for (const auto& rec : r.output) CHECK(rec.label == 1);
  CHECK_NOTHROW(ValidateOutput(r.output, 4));
}

TEST_CASE("run_hdl equals the literal transcription on random instances") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t d = seed % 2 == 0 ? 2 : 8;
    const int c = 2 + static_cast<int>(seed % 4);
    const std::size_t k = std::vector<std::size_t>{1, 3, 5}[seed % 3];
    const auto inst = testutil::RandomInstance(seed, 10 + seed % 25, 5 + seed % 20, d, c);
    const auto labeled = MakeSet(inst.labeled);
    const auto unlabeled = MakeSet(inst.unlabeled);
    const LabelVector labels(std::vector<ClassId>(inst.labels.begin(), inst.labels.end()), c);
    for (Metric metric : {Metric::kCosine, Metric::kEuclidean}) {
      HdlOptions opts;
      opts.verify_counts = true;
      const HdlResult r = RunHdl(labeled, labels, unlabeled, k, metric, opts);
      const auto lit = oracle::LiteralHdl(inst.labeled, inst.labels, inst.unlabeled, k,
                                          metric == Metric::kCosine, c);
      REQUIRE(lit.trace.size() == r.output.size());
      for (const auto& row : lit.trace) {
        const auto& rec = r.output[row.m];
        CHECK(rec.level == row.level);
        CHECK(rec.rank == row.rank);
        CHECK(rec.label == row.label);
      }
      REQUIRE(lit.members.size() == r.levels.size());
      for (std::size_t lv = 0; lv < r.levels.size(); ++lv) {
        CHECK(r.levels[lv].members == lit.members[lv]);
        for (std::size_t i = 0; i < lit.members[lv].size(); ++i)
          CHECK(r.levels[lv].scores[i] == lit.row_sums[lv][i]);
      }
      CHECK_NOTHROW(ValidateOutput(r.output, unlabeled.count()));
      ++checked;
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("run_hdl properties") {
  const auto inst = testutil::RandomInstance(99, 40, 60, 4, 3);
  const auto labeled = MakeSet(inst.labeled);
  const auto unlabeled = MakeSet(inst.unlabeled);
  const LabelVector labels(std::vector<ClassId>(inst.labels.begin(), inst.labels.end()), 3);
  HdlOptions opts;
  opts.verify_counts = true;
  const HdlResult base = RunHdl(labeled, labels, unlabeled, 4, Metric::kCosine, opts);

  SUBCASE("levels partition the unlabeled set") {
    std::size_t total = 0;
    for (const auto& lv : base.levels) {
      CHECK(!lv.members.empty());
      total += lv.members.size();
    }
    CHECK(total == unlabeled.count());
    CHECK(base.levels.size() <= unlabeled.count());
  }
  SUBCASE("thread count does not change the result") {
    HdlOptions threaded;
    threaded.threads = 4;
    const HdlResult r = RunHdl(labeled, labels, unlabeled, 4, Metric::kCosine, threaded);
    CHECK(FormatOutput(r.output) == FormatOutput(base.output));
  }
  SUBCASE("cosine scale invariance") {
    auto scale = [](const oracle::Points& pts) {
      oracle::Points out = pts;
      for (auto& p : out)
        for (auto& v : p) v *= 3.7f;
      return MakeSet(out);
    };
    const HdlResult r = RunHdl(scale(inst.labeled), labels, scale(inst.unlabeled), 4);
    CHECK(FormatOutput(r.output) == FormatOutput(base.output));
  }
  SUBCASE("plans are ordered by descending score then id") {
    for (const auto& lv : base.levels) {
      std::map<GlobalId, std::int64_t> score;
      for (std::size_t i = 0; i < lv.members.size(); ++i) score[lv.members[i]] = lv.scores[i];
      for (std::size_t i = 1; i < lv.order.size(); ++i) {
        const auto a = lv.order[i - 1], b = lv.order[i];
        CHECK((score[a] > score[b] || (score[a] == score[b] && a < b)));
      }
    }
  }
}
