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

#include "hdlabel/knn_index.hpp"

#include "hdlabel/parallel.hpp"

namespace hdlabel {

const char* MetricName(Metric metric) noexcept {
  return metric == Metric::kCosine ? "cosine" : "euclidean";
}

Metric ParseMetric(std::string_view name) {
  if (name == "cosine") return Metric::kCosine;
  if (name == "euclidean") return Metric::kEuclidean;
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + std::string(name) + "'");
}

UnionIndex::UnionIndex(const EmbeddingSet& labeled, const EmbeddingSet& unlabeled,
                       Metric metric)
    : labeled_count_(labeled.count()),
      size_(labeled.count() + unlabeled.count()),
      metric_(metric) {
  if (labeled.dim() != 0 && unlabeled.dim() != 0 && labeled.dim() != unlabeled.dim())
    throw Error(ErrorCode::kDimMismatch, "labeled dim " + std::to_string(labeled.dim()) +
                                             " != unlabeled dim " +
                                             std::to_string(unlabeled.dim()));
  dim_ = labeled.dim() != 0 ? labeled.dim() : unlabeled.dim();
  data_.reserve(size_ * dim_);
  data_.insert(data_.end(), labeled.data().begin(), labeled.data().end());
  data_.insert(data_.end(), unlabeled.data().begin(), unlabeled.data().end());
  norms_.reserve(size_);
  norms_.insert(norms_.end(), labeled.norms().begin(), labeled.norms().end());
  norms_.insert(norms_.end(), unlabeled.norms().begin(), unlabeled.norms().end());
}

void UnionIndex::CheckQuery(GlobalId query, std::size_t k) const {
  if (query >= size_)
    throw Error(ErrorCode::kInvalidArgument, "query id " + std::to_string(query) +
                                                 " out of range [0, " +
                                                 std::to_string(size_) + ")");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  if (k > size_ - 1)
    throw Error(ErrorCode::kKTooLarge, "k=" + std::to_string(k) + " exceeds the " +
                                           std::to_string(size_ - 1) + " other points");
}

NeighborList UnionIndex::Knn(GlobalId query, std::size_t k) const {
  return KnnFiltered(query, k, [](GlobalId) { return true; });
}

NeighborList UnionIndex::KnnWithinLabeled(GlobalId query, std::size_t k) const {
  const std::size_t n = labeled_count_;
  return KnnFiltered(query, k, [n](GlobalId c) { return c < n; });
}

std::vector<NeighborList> UnionIndex::KnnBatch(std::span<const GlobalId> queries,
                                               std::size_t k, unsigned threads) const {
  std::vector<NeighborList> out(queries.size());
  ParallelFor(queries.size(), threads, [&](std::size_t i) { out[i] = Knn(queries[i], k); });
  return out;
}

}  // namespace hdlabel
