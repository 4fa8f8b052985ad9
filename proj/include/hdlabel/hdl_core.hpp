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

#ifndef HDLABEL_HDL_CORE_HPP_
#define HDLABEL_HDL_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdlabel/embedding_store.hpp"
#include "hdlabel/knn_index.hpp"

namespace hdlabel {

// Which global ids are currently in the labeled pool, and with what label.
// Ids below N start labeled; the rest are transferred in one at a time and
// never leave.
class LabelStatus {
 public:
  LabelStatus(const LabelVector& labels, std::size_t unlabeled_count);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t remaining() const noexcept { return remaining_; }
  bool IsLabeled(GlobalId id) const noexcept { return labels_[id] >= 0; }
  ClassId Label(GlobalId id) const noexcept { return labels_[id]; }

  // Throws InvalidArgument if id is already labeled.
  void Assign(GlobalId id, ClassId label);

 private:
  std::vector<ClassId> labels_;  // -1 while unlabeled
  std::size_t remaining_ = 0;
};

// k union-nearest neighbors of every unlabeled point, computed once; the
// geometry never changes while labels flow in.
class NeighborTable {
 public:
  NeighborTable(const UnionIndex& index, std::size_t k, unsigned threads = 1);

  std::size_t k() const noexcept { return k_; }
  std::size_t first_unlabeled() const noexcept { return first_; }
  std::span<const GlobalId> Neighbors(GlobalId unlabeled_id) const noexcept {
    return {ids_.data() + (unlabeled_id - first_) * k_, k_};
  }

 private:
  std::size_t k_ = 0;
  std::size_t first_ = 0;
  std::vector<GlobalId> ids_;  // row-major, (distance, id) order per row
};

struct NeighborCount {
  GlobalId id = 0;
  int count = 0;
  friend bool operator==(const NeighborCount&, const NeighborCount&) = default;
};

// Labeled-neighbor count L for every still-unlabeled id (ascending ids),
// recomputed from scratch against the index.
std::vector<NeighborCount> LabeledNeighborCounts(const UnionIndex& index,
                                                 const LabelStatus& status, std::size_t k);

// All ids attaining the maximal count, ascending. The maximum may be 0.
std::vector<GlobalId> SelectFirstLevel(std::span<const NeighborCount> counts);

struct LevelPlan {
  std::size_t level = 0;
  std::vector<GlobalId> members;     // ascending ids
  int max_count = 0;                 // shared labeled-neighbor count at level start
  std::vector<std::int64_t> scores;  // parallel to members
  std::vector<GlobalId> order;       // descending score, then ascending id
};

// Orders first-level members. The score of member i is the total
// labeled-neighbor count of the other members once i alone has been
// labeled, i.e. sum_{j != i} (L_j + [i in kNN(j)]).
LevelPlan SecondLevelOrder(const NeighborTable& table, const LabelStatus& status,
                           std::span<const GlobalId> members, std::size_t level = 0);
LevelPlan SecondLevelOrder(const UnionIndex& index, const LabelStatus& status,
                           std::span<const GlobalId> members, std::size_t k,
                           std::size_t level = 0);

struct HdlOptions {
  unsigned threads = 1;
  // Recount L naively at every level and check it against the incremental
  // counts (and that no count decreased). Throws Internal on mismatch.
  bool verify_counts = false;
};

struct HdlResult {
  LabeledOutput output;  // one record per unlabeled row, in row order
  std::vector<LevelPlan> levels;
};

// Hierarchical dynamic labeling. Throws KTooLarge when k > N + M - 1.
HdlResult RunHdl(const EmbeddingSet& labeled, const LabelVector& labels,
                 const EmbeddingSet& unlabeled, std::size_t k,
                 Metric metric = Metric::kCosine, const HdlOptions& options = {});

}  // namespace hdlabel

#endif  // HDLABEL_HDL_CORE_HPP_
