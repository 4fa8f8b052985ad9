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

#ifndef HDLABEL_VOTING_HPP_
#define HDLABEL_VOTING_HPP_

#include <span>
#include <vector>

#include "hdlabel/embedding_store.hpp"

namespace hdlabel {

struct VoteTally {
  std::vector<int> counts;  // length C
  ClassId winner = 0;       // smallest id attaining the max count
  double margin = 0.0;      // counts[winner] / voters
  int voters = 0;
  bool tied = false;        // another class shares the max count
};

// Plain one-hot majority vote. Throws EmptyVoterSet on an empty sequence and
// LabelOutOfRange on ids outside [0, num_classes).
VoteTally Vote(std::span<const ClassId> neighbor_labels, int num_classes);

}  // namespace hdlabel

#endif  // HDLABEL_VOTING_HPP_
