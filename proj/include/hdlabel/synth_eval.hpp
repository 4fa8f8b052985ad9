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

#ifndef HDLABEL_SYNTH_EVAL_HPP_
#define HDLABEL_SYNTH_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdlabel/embedding_store.hpp"

namespace hdlabel {

struct SynthSpec {
  int num_classes = 2;
  std::size_t dim = 2;
  std::vector<std::size_t> class_counts;  // one entry per class
  // Cluster centers; empty means radius * e_c (requires dim >= num_classes).
  std::vector<std::vector<double>> means;
  double radius = 1.0;
  double sigma = 0.1;
  double labeled_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct SynthData {
  EmbeddingSet labeled;
  LabelVector labels;
  EmbeddingSet unlabeled;
  LabelVector truth;  // ground truth for the unlabeled rows
  double imbalance_factor = 1.0;
};

// n_c = round(max_count * IF^(-c / (C - 1))), floored at 1.
std::vector<std::size_t> LongTailCounts(std::size_t max_count, int num_classes,
                                        double imbalance_factor);

// max count / min count.
double ImbalanceFactor(const std::vector<std::size_t>& class_counts);

// ceil(count * fraction), the per-class labeled quota.
std::size_t LabeledQuota(std::size_t count, double fraction);

// Isotropic Gaussian clusters drawn class by class from Rng(seed); each class
// is split into its first LabeledQuota() draws (labeled) and the rest, and
// both sets are then shuffled with the same stream. Throws InvalidSpec.
SynthData Generate(const SynthSpec& spec);

struct EvalResult {
  std::string method;
  double accuracy = 0.0;
  std::vector<std::optional<double>> per_class;  // nullopt: class absent from truth
  std::vector<std::vector<std::int64_t>> confusion;  // [truth][predicted]
};

// Throws CountMismatch when the output does not cover exactly the truth rows.
EvalResult Evaluate(const LabeledOutput& output, const LabelVector& truth,
                    const std::string& method);

// {"method", "accuracy", "per_class", "confusion"}.
std::string EvalToJson(const EvalResult& result);

}  // namespace hdlabel

#endif  // HDLABEL_SYNTH_EVAL_HPP_
