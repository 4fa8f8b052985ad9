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

#ifndef HDLABEL_KNN_DV_HPP_
#define HDLABEL_KNN_DV_HPP_

#include <cstddef>

#include "hdlabel/embedding_store.hpp"
#include "hdlabel/knn_index.hpp"

namespace hdlabel {

// Baseline labeler: every unlabeled point independently takes the majority
// label of its k nearest labeled points. All records are level 0 with rank
// equal to the input row. Throws KTooLarge when k > N.
LabeledOutput RunKnnDv(const EmbeddingSet& labeled, const LabelVector& labels,
                       const EmbeddingSet& unlabeled, std::size_t k,
                       Metric metric = Metric::kCosine, unsigned threads = 1);

}  // namespace hdlabel

#endif  // HDLABEL_KNN_DV_HPP_
