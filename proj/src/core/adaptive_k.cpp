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

#include "hdlabel/adaptive_k.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "hdlabel/error.hpp"
#include "hdlabel/parallel.hpp"
#include "hdlabel/rng.hpp"

namespace hdlabel {

namespace {

// Up to this many trials every binomial coefficient is an exact double.
constexpr std::int64_t kExactBinomialLimit = 56;

// sum_{j=lo}^{hi} C(n, j) x^j (1-x)^(n-j).
double BinomialRangeExact(std::int64_t lo, std::int64_t hi, std::int64_t n, double x) {
  // C(n, j) built by the multiplicative recurrence; exact below 2^53.
  double coeff = 1.0;
  for (std::int64_t j = 0; j < lo; ++j)
    coeff = coeff * static_cast<double>(n - j) / static_cast<double>(j + 1);
  double sum = 0.0;
  for (std::int64_t j = lo; j <= hi; ++j) {
    sum += coeff * std::pow(x, static_cast<double>(j)) *
           std::pow(1.0 - x, static_cast<double>(n - j));
    coeff = coeff * static_cast<double>(n - j) / static_cast<double>(j + 1);
  }
  return sum;
}

double BinomialRangeLog(std::int64_t lo, std::int64_t hi, std::int64_t n, double x) {
  const double log_x = std::log(x);
  const double log_1mx = std::log1p(-x);
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  double sum = 0.0;
  for (std::int64_t j = lo; j <= hi; ++j) {
    const double jd = static_cast<double>(j);
    const double log_term = log_n_fact - std::lgamma(jd + 1.0) -
                            std::lgamma(static_cast<double>(n - j) + 1.0) + jd * log_x +
                            static_cast<double>(n - j) * log_1mx;
    sum += std::exp(log_term);
  }
  return sum;
}

double BinomialRange(std::int64_t lo, std::int64_t hi, std::int64_t n, double x) {
  return n <= kExactBinomialLimit ? BinomialRangeExact(lo, hi, n, x)
                                  : BinomialRangeLog(lo, hi, n, x);
}

}  // namespace

double RegIncBeta(std::int64_t a, std::int64_t b, double x) {
  if (a < 1 || b < 1)
    throw Error(ErrorCode::kDomainError, "incomplete beta needs a, b >= 1 (got a=" +
                                             std::to_string(a) + ", b=" + std::to_string(b) +
                                             ")");
  if (!(x >= 0.0 && x <= 1.0))
    throw Error(ErrorCode::kDomainError, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const std::int64_t n = a + b - 1;
  // Sum whichever side of the mode is the smaller tail so that values near
  // 1 keep full relative accuracy in their complement.
  const double sum = static_cast<double>(a) > static_cast<double>(n) * x
                         ? BinomialRange(a, n, n, x)
                         : 1.0 - BinomialRange(0, a - 1, n, x);
  return std::clamp(sum, 0.0, 1.0);
}

double BetaFactor(std::size_t k, double error_rate) {
  if (k == 0) throw Error(ErrorCode::kDomainError, "k must be positive");
  const auto kk = static_cast<std::int64_t>(k);
  const std::int64_t k_prime = (kk + 2) / 2 - 1;  // ceil((k+1)/2) - 1
  return RegIncBeta(kk + 1 - k_prime, k_prime + 1, 1.0 - error_rate);
}

std::vector<std::size_t> SampleCenters(std::size_t n, std::size_t sample_size,
                                       std::uint64_t seed, bool with_replacement) {
  if (n == 0 || sample_size == 0)
    throw Error(ErrorCode::kEmptySample, "cannot sample centers from an empty set");
  Rng rng(seed);
  std::vector<std::size_t> centers;
  centers.reserve(sample_size);
  if (with_replacement) {
    for (std::size_t i = 0; i < sample_size; ++i) centers.push_back(rng.UniformIndex(n));
    return centers;
  }
  if (sample_size > n)
    throw Error(ErrorCode::kInvalidArgument, "sample larger than the population");
  // Partial Fisher-Yates.
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < sample_size; ++i) {
    const std::size_t j = i + rng.UniformIndex(n - i);
    std::swap(pool[i], pool[j]);
    centers.push_back(pool[i]);
  }
  return centers;
}

double EstimateMu(const EmbeddingSet& labeled, const LabelVector& labels, std::size_t k,
                  const MuOptions& options) {
  if (labels.size() != labeled.count())
    throw Error(ErrorCode::kCountMismatch, "labels do not match the labeled set");
  if (!(options.sample_fraction > 0.0 && options.sample_fraction <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "sample fraction p must lie in (0, 1]");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  const std::size_t n = labeled.count();
  const auto sample_size =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * options.sample_fraction));
  if (sample_size == 0)
    throw Error(ErrorCode::kEmptySample, "floor(N * p) is zero for N=" + std::to_string(n));
  if (k > n - 1)
    throw Error(ErrorCode::kKTooLarge, "k=" + std::to_string(k) + " exceeds N-1=" +
                                           std::to_string(n - 1));

  const std::vector<std::size_t> centers =
      SampleCenters(n, sample_size, options.seed, options.with_replacement);
  const UnionIndex index(labeled, EmbeddingSet{}, options.metric);
  std::vector<char> clean(centers.size(), 0);
  ParallelFor(centers.size(), options.threads, [&](std::size_t i) {
    const NeighborList nn = index.KnnWithinLabeled(centers[i], k);
    const ClassId own = labels[centers[i]];
    clean[i] = std::all_of(nn.entries.begin(), nn.entries.end(),
                           [&](const Neighbor& e) { return labels[e.id] == own; });
  });
  const auto hits = std::count(clean.begin(), clean.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(centers.size());
}

KSelectionReport SelectK(const EmbeddingSet& labeled, const LabelVector& labels,
                         const KSelectionParams& params) {
  if (params.k_upper_limit < 2)
    throw Error(ErrorCode::kInvalidArgument, "k upper limit must be at least 2");
  if (!(params.error_rate >= 0.0 && params.error_rate <= 1.0))
    throw Error(ErrorCode::kDomainError, "label-error rate e must lie in [0, 1]");
  KSelectionReport report;
  report.params = params;
  MuOptions mu_options;
  mu_options.sample_fraction = params.sample_fraction;
  mu_options.with_replacement = params.with_replacement;
  mu_options.metric = params.metric;
  mu_options.threads = params.threads;
  double best = -1.0;
  for (std::size_t k = 1; k < params.k_upper_limit; ++k) {
    mu_options.seed = params.seed + k;
    KCandidate c;
    c.k = k;
    c.mu = EstimateMu(labeled, labels, k, mu_options);
    c.beta = BetaFactor(k, params.error_rate);
    c.product = c.mu * c.beta;
    if (c.product > best) {
      best = c.product;
      report.chosen_k = k;
    }
    report.candidates.push_back(c);
  }
  return report;
}

std::string FormatKReport(const KSelectionReport& report) {
  std::string out = "k,mu,beta,product\n";
  char buf[160];
  for (const auto& c : report.candidates) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", c.k, c.mu, c.beta, c.product);
    out += buf;
  }
  out += "chosen," + std::to_string(report.chosen_k) + "\n";
  return out;
}

}  // namespace hdlabel
