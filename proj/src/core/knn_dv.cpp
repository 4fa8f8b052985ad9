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

#include "hdlabel/knn_dv.hpp"

#include <string>

#include "hdlabel/error.hpp"
#include "hdlabel/parallel.hpp"
#include "hdlabel/voting.hpp"

namespace hdlabel {

LabeledOutput RunKnnDv(const EmbeddingSet& labeled, const LabelVector& labels,
                       const EmbeddingSet& unlabeled, std::size_t k, Metric metric,
                       unsigned threads) {
  if (labels.size() != labeled.count())
    throw Error(ErrorCode::kCountMismatch, "labeled set has " +
                                               std::to_string(labeled.count()) +
                                               " rows but " + std::to_string(labels.size()) +
                                               " labels");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  if (k > labeled.count())
    throw Error(ErrorCode::kKTooLarge, "k=" + std::to_string(k) + " exceeds N=" +
                                           std::to_string(labeled.count()));
  const UnionIndex index(labeled, unlabeled, metric);
  LabeledOutput out(unlabeled.count());
  ParallelFor(unlabeled.count(), threads, [&](std::size_t m) {
    const NeighborList nn = index.KnnWithinLabeled(index.UnlabeledId(m), k);
    std::vector<ClassId> voters;
    voters.reserve(nn.entries.size());
    for (const auto& e : nn.entries) voters.push_back(labels[e.id]);
    const VoteTally tally = Vote(voters, labels.num_classes());
    out[m] = OutputRecord{m, tally.winner, 0, m, tally.margin, tally.tied};
  });
  return out;
}

}  // namespace hdlabel
