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

#ifndef HDLABEL_KNN_INDEX_HPP_
#define HDLABEL_KNN_INDEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdlabel/embedding_store.hpp"
#include "hdlabel/error.hpp"

namespace hdlabel {

enum class Metric { kCosine, kEuclidean };

const char* MetricName(Metric metric) noexcept;
// Accepts "cosine" / "euclidean"; throws InvalidArgument otherwise.
Metric ParseMetric(std::string_view name);

// Global ids: [0, N) labeled rows, [N, N+M) unlabeled rows.
using GlobalId = std::size_t;

struct Neighbor {
  GlobalId id = 0;
  double distance = 0.0;

  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborList {
  GlobalId query_id = 0;
  std::vector<Neighbor> entries;  // ascending by (distance, id), query excluded
};

// Exact brute-force index over the union of a labeled and an unlabeled set.
// Immutable after construction; all queries are const and thread-safe.
class UnionIndex {
 public:
  // Throws DimMismatch when both sets are non-empty with different dims.
  UnionIndex(const EmbeddingSet& labeled, const EmbeddingSet& unlabeled,
             Metric metric = Metric::kCosine);

  std::size_t labeled_count() const noexcept { return labeled_count_; }
  std::size_t unlabeled_count() const noexcept { return size_ - labeled_count_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return dim_; }
  Metric metric() const noexcept { return metric_; }

  GlobalId UnlabeledId(std::size_t m) const noexcept { return labeled_count_ + m; }

  // Cosine: 1 - <x,y>/(|x||y|) clamped to [0, 2]. Euclidean: L2. Both are
  // accumulated in double from the stored floats.
  double Distance(GlobalId a, GlobalId b) const noexcept {
    const float* x = data_.data() + a * dim_;
    const float* y = data_.data() + b * dim_;
    double acc = 0.0;
    if (metric_ == Metric::kCosine) {
      for (std::size_t j = 0; j < dim_; ++j)
        acc += static_cast<double>(x[j]) * static_cast<double>(y[j]);
      const double d = 1.0 - acc / (norms_[a] * norms_[b]);
      return std::clamp(d, 0.0, 2.0);
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      const double diff = static_cast<double>(x[j]) - static_cast<double>(y[j]);
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }

  // k nearest over all other points. Throws KTooLarge if k > size() - 1 and
  // InvalidArgument if k == 0.
  NeighborList Knn(GlobalId query, std::size_t k) const;

  // k nearest among labeled ids (< N), excluding the query itself.
  NeighborList KnnWithinLabeled(GlobalId query, std::size_t k) const;

  // k nearest among ids accepted by the predicate (query always excluded).
  // With allow_fewer, returns every accepted candidate when fewer than k
  // exist; otherwise that is KTooLarge.
  template <typename Accept>
  NeighborList KnnFiltered(GlobalId query, std::size_t k, Accept&& accept,
                           bool allow_fewer = false) const;

  // Knn for each query; identical to sequential calls for any thread count.
  std::vector<NeighborList> KnnBatch(std::span<const GlobalId> queries, std::size_t k,
                                     unsigned threads = 1) const;

 private:
  void CheckQuery(GlobalId query, std::size_t k) const;

  std::size_t labeled_count_ = 0;
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  Metric metric_ = Metric::kCosine;
  std::vector<float> data_;
  std::vector<double> norms_;
};

template <typename Accept>
NeighborList UnionIndex::KnnFiltered(GlobalId query, std::size_t k, Accept&& accept,
                                     bool allow_fewer) const {
  CheckQuery(query, k);
  NeighborList out{query, {}};
  auto& best = out.entries;
  best.reserve(k + 1);
  std::size_t available = 0;
  for (GlobalId c = 0; c < size_; ++c) {
    if (c == query || !accept(c)) continue;
    ++available;
    const Neighbor cand{c, Distance(query, c)};
    if (best.size() == k && !(cand < best.back())) continue;
    best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
    if (best.size() > k) best.pop_back();
  }
  if (available < k && !allow_fewer)
    throw Error(ErrorCode::kKTooLarge, "k=" + std::to_string(k) + " exceeds the " +
                                           std::to_string(available) +
                                           " candidates available to query " +
                                           std::to_string(query));
  return out;
}

}  // namespace hdlabel

#endif  // HDLABEL_KNN_INDEX_HPP_
