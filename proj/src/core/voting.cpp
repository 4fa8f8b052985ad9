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

#include "hdlabel/voting.hpp"

#include <string>

#include "hdlabel/error.hpp"

namespace hdlabel {

VoteTally Vote(std::span<const ClassId> neighbor_labels, int num_classes) {
  if (neighbor_labels.empty()) throw Error(ErrorCode::kEmptyVoterSet, "no labeled voters");
  if (num_classes < 1) throw Error(ErrorCode::kInvalidArgument, "num_classes must be positive");
  VoteTally tally;
  tally.counts.assign(static_cast<std::size_t>(num_classes), 0);
  for (ClassId label : neighbor_labels) {
    if (label < 0 || label >= num_classes)
      throw Error(ErrorCode::kLabelOutOfRange, "voter label " + std::to_string(label) +
                                                   " outside [0, " +
                                                   std::to_string(num_classes) + ")");
    ++tally.counts[static_cast<std::size_t>(label)];
  }
  tally.voters = static_cast<int>(neighbor_labels.size());
  int best = -1;
  for (int c = 0; c < num_classes; ++c) {
    const int n = tally.counts[static_cast<std::size_t>(c)];
    if (n > best) {
      best = n;
      tally.winner = c;
      tally.tied = false;
    } else if (n == best) {
      tally.tied = true;
    }
  }
  tally.margin = static_cast<double>(best) / static_cast<double>(tally.voters);
  return tally;
}

}  // namespace hdlabel
