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

#include "hdlabel/hdl_core.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hdlabel/error.hpp"
#include "hdlabel/parallel.hpp"
#include "hdlabel/voting.hpp"

namespace hdlabel {

LabelStatus::LabelStatus(const LabelVector& labels, std::size_t unlabeled_count)
    : labels_(labels.labels().begin(), labels.labels().end()), remaining_(unlabeled_count) {
  labels_.resize(labels.size() + unlabeled_count, -1);
}

void LabelStatus::Assign(GlobalId id, ClassId label) {
  if (id >= labels_.size() || labels_[id] >= 0)
    throw Error(ErrorCode::kInvalidArgument,
                "id " + std::to_string(id) + " is out of range or already labeled");
  if (label < 0) throw Error(ErrorCode::kNegativeLabel, "negative label assigned");
  labels_[id] = label;
  --remaining_;
}

NeighborTable::NeighborTable(const UnionIndex& index, std::size_t k, unsigned threads)
    : k_(k), first_(index.labeled_count()) {
  const std::size_t m = index.unlabeled_count();
  ids_.resize(m * k);
  ParallelFor(m, threads, [&](std::size_t i) {
    const NeighborList nn = index.Knn(first_ + i, k);
    for (std::size_t j = 0; j < k; ++j) ids_[i * k + j] = nn.entries[j].id;
  });
}

std::vector<NeighborCount> LabeledNeighborCounts(const UnionIndex& index,
                                                 const LabelStatus& status, std::size_t k) {
  std::vector<NeighborCount> counts;
  for (GlobalId id = index.labeled_count(); id < index.size(); ++id) {
    if (status.IsLabeled(id)) continue;
    const NeighborList nn = index.Knn(id, k);
    int n = 0;
    for (const auto& e : nn.entries) n += status.IsLabeled(e.id) ? 1 : 0;
    counts.push_back({id, n});
  }
  return counts;
}

std::vector<GlobalId> SelectFirstLevel(std::span<const NeighborCount> counts) {
  std::vector<GlobalId> members;
  if (counts.empty()) return members;
  int best = counts.front().count;
  for (const auto& c : counts) best = std::max(best, c.count);
  for (const auto& c : counts)
    if (c.count == best) members.push_back(c.id);
  std::sort(members.begin(), members.end());
  return members;
}

LevelPlan SecondLevelOrder(const NeighborTable& table, const LabelStatus& status,
                           std::span<const GlobalId> members, std::size_t level) {
  if (members.empty()) throw Error(ErrorCode::kInvalidArgument, "empty first level");
  LevelPlan plan;
  plan.level = level;
  plan.members.assign(members.begin(), members.end());
  std::sort(plan.members.begin(), plan.members.end());
  const std::size_t s = plan.members.size();

  // Position of each member in plan.members, looked up through a sorted span.
  auto position = [&](GlobalId id) -> std::ptrdiff_t {
    auto it = std::lower_bound(plan.members.begin(), plan.members.end(), id);
    if (it == plan.members.end() || *it != id) return -1;
    return it - plan.members.begin();
  };

  std::vector<std::int64_t> base(s, 0);
  std::vector<std::int64_t> in_degree(s, 0);
  for (std::size_t j = 0; j < s; ++j) {
    const GlobalId id = plan.members[j];
    if (id < table.first_unlabeled() || status.IsLabeled(id))
      throw Error(ErrorCode::kInvalidArgument,
                  "first-level member " + std::to_string(id) + " is not unlabeled");
    for (GlobalId nb : table.Neighbors(id)) {
      if (status.IsLabeled(nb)) ++base[j];
      const std::ptrdiff_t p = position(nb);
      if (p >= 0) ++in_degree[static_cast<std::size_t>(p)];
    }
  }
  plan.max_count = static_cast<int>(*std::max_element(base.begin(), base.end()));

  const std::int64_t base_total = std::accumulate(base.begin(), base.end(), std::int64_t{0});
  plan.scores.resize(s);
  for (std::size_t i = 0; i < s; ++i) plan.scores[i] = base_total - base[i] + in_degree[i];

  std::vector<std::size_t> perm(s);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return plan.scores[a] > plan.scores[b];
  });
  plan.order.reserve(s);
  for (std::size_t p : perm) plan.order.push_back(plan.members[p]);
  return plan;
}

LevelPlan SecondLevelOrder(const UnionIndex& index, const LabelStatus& status,
                           std::span<const GlobalId> members, std::size_t k,
                           std::size_t level) {
  const NeighborTable table(index, k);
  return SecondLevelOrder(table, status, members, level);
}

namespace {

// Labeled-neighbor counts maintained incrementally through the reverse kNN
// graph, with one lazily-cleaned bucket of candidate ids per count value.
class CountTracker {
 public:
  CountTracker(const NeighborTable& table, const LabelStatus& status, std::size_t total)
      : first_(table.first_unlabeled()),
        counts_(total - first_, 0),
        buckets_(table.k() + 1) {
    const std::size_t m = total - first_;
    std::vector<std::size_t> degree(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (GlobalId nb : table.Neighbors(first_ + i)) {
        if (status.IsLabeled(nb))
          ++counts_[i];
        else
          ++degree[nb - first_ + 1];
      }
    }
    std::partial_sum(degree.begin(), degree.end(), degree.begin());
    rev_offsets_ = degree;
    rev_ids_.resize(degree.back());
    std::vector<std::size_t> fill(degree.begin(), degree.end() - 1);
    for (std::size_t i = 0; i < m; ++i)
      for (GlobalId nb : table.Neighbors(first_ + i))
        if (!status.IsLabeled(nb)) rev_ids_[fill[nb - first_]++] = first_ + i;
    for (std::size_t i = 0; i < m; ++i)
      if (!status.IsLabeled(first_ + i)) buckets_[counts_[i]].push_back(first_ + i);
  }

  int Count(GlobalId id) const { return counts_[id - first_]; }

  // Pops every unlabeled id sharing the current maximal count.
  std::vector<GlobalId> PopFirstLevel(const LabelStatus& status) {
    for (std::size_t b = buckets_.size(); b-- > 0;) {
      auto& bucket = buckets_[b];
      std::erase_if(bucket, [&](GlobalId id) {
        return status.IsLabeled(id) || counts_[id - first_] != static_cast<int>(b);
      });
      if (bucket.empty()) continue;
      std::vector<GlobalId> members;
      members.swap(bucket);
      std::sort(members.begin(), members.end());
      return members;
    }
    return {};
  }

  // Called after id has been transferred into the labeled pool.
  void OnLabeled(GlobalId id, const LabelStatus& status) {
    const std::size_t slot = id - first_;
    for (std::size_t r = rev_offsets_[slot]; r < rev_offsets_[slot + 1]; ++r) {
      const GlobalId dependent = rev_ids_[r];
      if (status.IsLabeled(dependent)) continue;
      const int c = ++counts_[dependent - first_];
      buckets_[static_cast<std::size_t>(c)].push_back(dependent);
    }
  }

 private:
  std::size_t first_;
  std::vector<int> counts_;
  std::vector<std::vector<GlobalId>> buckets_;
  std::vector<std::size_t> rev_offsets_;
  std::vector<GlobalId> rev_ids_;
};

void VerifyCounts(const UnionIndex& index, const LabelStatus& status, std::size_t k,
                  const CountTracker& tracker, std::vector<int>& last_seen) {
  for (const auto& c : LabeledNeighborCounts(index, status, k)) {
    if (c.count != tracker.Count(c.id))
      throw Error(ErrorCode::kInternal, "incremental count diverged for id " +
                                            std::to_string(c.id));
    int& prev = last_seen[c.id - index.labeled_count()];
    if (c.count < prev)
      throw Error(ErrorCode::kInternal, "labeled-neighbor count decreased for id " +
                                            std::to_string(c.id));
    prev = c.count;
  }
}

}  // namespace

HdlResult RunHdl(const EmbeddingSet& labeled, const LabelVector& labels,
                 const EmbeddingSet& unlabeled, std::size_t k, Metric metric,
                 const HdlOptions& options) {
  if (labels.size() != labeled.count())
    throw Error(ErrorCode::kCountMismatch, "labeled set has " +
                                               std::to_string(labeled.count()) +
                                               " rows but " + std::to_string(labels.size()) +
                                               " labels");
  if (labeled.count() == 0)
    throw Error(ErrorCode::kInvalidArgument, "labeled set is empty");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  const std::size_t total = labeled.count() + unlabeled.count();
  if (k > total - 1)
    throw Error(ErrorCode::kKTooLarge, "k=" + std::to_string(k) + " exceeds N+M-1=" +
                                           std::to_string(total - 1));
  HdlResult result;
  if (unlabeled.count() == 0) return result;

  const UnionIndex index(labeled, unlabeled, metric);
  const NeighborTable table(index, k, options.threads);
  LabelStatus status(labels, unlabeled.count());
  CountTracker tracker(table, status, total);
  std::vector<int> last_seen(unlabeled.count(), 0);
  result.output.resize(unlabeled.count());

  std::vector<ClassId> voters;
  voters.reserve(k);
  while (status.remaining() > 0) {
    if (options.verify_counts) VerifyCounts(index, status, k, tracker, last_seen);
    const std::vector<GlobalId> members = tracker.PopFirstLevel(status);
    if (members.empty()) throw Error(ErrorCode::kInternal, "no first-level candidates left");
    LevelPlan plan = SecondLevelOrder(table, status, members, result.levels.size());

    for (std::size_t rank = 0; rank < plan.order.size(); ++rank) {
      const GlobalId id = plan.order[rank];
      voters.clear();
      for (GlobalId nb : table.Neighbors(id))
        if (status.IsLabeled(nb)) voters.push_back(status.Label(nb));
      if (voters.empty()) {
        // Nothing labeled among the union neighbors yet: fall back to the
        // nearest points of the current labeled pool.
        const NeighborList nn = index.KnnFiltered(
            id, k, [&](GlobalId c) { return status.IsLabeled(c); }, true);
        for (const auto& e : nn.entries) voters.push_back(status.Label(e.id));
      }
      const VoteTally tally = Vote(voters, labels.num_classes());
      status.Assign(id, tally.winner);
      tracker.OnLabeled(id, status);
      const std::size_t m = id - labeled.count();
      result.output[m] = OutputRecord{m, tally.winner, plan.level, rank, tally.margin,
                                      tally.tied};
    }
    result.levels.push_back(std::move(plan));
  }
  return result;
}

}  // namespace hdlabel
