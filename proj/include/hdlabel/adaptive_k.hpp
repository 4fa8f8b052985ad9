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

#ifndef HDLABEL_ADAPTIVE_K_HPP_
#define HDLABEL_ADAPTIVE_K_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdlabel/embedding_store.hpp"
#include "hdlabel/knn_index.hpp"

namespace hdlabel {

// Regularized incomplete beta I_x(a, b) for integer a, b >= 1, evaluated as
// the binomial tail sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j).
// Throws DomainError for x outside [0, 1] or a, b < 1.
double RegIncBeta(std::int64_t a, std::int64_t b, double x);

// Vote-success factor for k voters and label-error rate e:
// I_{1-e}(k + 1 - k', k' + 1) with k' = ceil((k + 1) / 2) - 1.
double BetaFactor(std::size_t k, double error_rate);

// Center draws for the clusterability estimate; uniform over [0, n).
std::vector<std::size_t> SampleCenters(std::size_t n, std::size_t sample_size,
                                       std::uint64_t seed, bool with_replacement = true);

struct MuOptions {
  double sample_fraction = 0.1;  // p
  std::uint64_t seed = 0;
  bool with_replacement = true;
  Metric metric = Metric::kCosine;
  unsigned threads = 1;
};

// Fraction of sampled labeled centers whose k nearest labeled neighbors
// (self excluded) all carry the center's label. Throws EmptySample when
// floor(N * p) == 0 and KTooLarge when k > N - 1.
double EstimateMu(const EmbeddingSet& labeled, const LabelVector& labels, std::size_t k,
                  const MuOptions& options);

struct KSelectionParams {
  double sample_fraction = 0.1;
  double error_rate = 0.15;
  std::size_t k_upper_limit = 20;  // candidates are 1 .. k_upper_limit - 1
  std::uint64_t seed = 0;          // candidate k samples with seed + k
  bool with_replacement = true;
  Metric metric = Metric::kCosine;
  unsigned threads = 1;
};

struct KCandidate {
  std::size_t k = 0;
  double mu = 0.0;
  double beta = 0.0;
  double product = 0.0;
};

struct KSelectionReport {
  std::vector<KCandidate> candidates;
  std::size_t chosen_k = 0;  // first k attaining the maximal product
  KSelectionParams params;
};

KSelectionReport SelectK(const EmbeddingSet& labeled, const LabelVector& labels,
                         const KSelectionParams& params);

// "k,mu,beta,product" rows then "chosen,<k>".
std::string FormatKReport(const KSelectionReport& report);

}  // namespace hdlabel

#endif  // HDLABEL_ADAPTIVE_K_HPP_
