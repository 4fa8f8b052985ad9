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

#include "hdlabel/synth_eval.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <json.hpp>

#include "hdlabel/error.hpp"
#include "hdlabel/rng.hpp"

namespace hdlabel {

namespace {

template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[rng.UniformIndex(i)]);
}

void CheckSpec(const SynthSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidSpec, msg); };
  if (spec.num_classes < 2) fail("need at least 2 classes");
  if (spec.dim == 0) fail("dim must be positive");
  if (spec.class_counts.size() != static_cast<std::size_t>(spec.num_classes))
    fail("class_counts must have one entry per class");
  for (std::size_t n : spec.class_counts)
    if (n == 0) fail("every class needs at least one point");
  if (!(spec.labeled_fraction > 0.0 && spec.labeled_fraction <= 1.0))
    fail("labeled fraction must lie in (0, 1]");
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) fail("sigma must be finite and >= 0");
  if (spec.means.empty()) {
    if (spec.dim < static_cast<std::size_t>(spec.num_classes))
      fail("default one-hot means need dim >= num_classes");
    if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) fail("radius must be positive");
  } else {
    if (spec.means.size() != static_cast<std::size_t>(spec.num_classes))
      fail("means must have one entry per class");
    for (const auto& m : spec.means)
      if (m.size() != spec.dim) fail("mean dimension differs from dim");
  }
}

}  // namespace

std::vector<std::size_t> LongTailCounts(std::size_t max_count, int num_classes,
                                        double imbalance_factor) {
  if (num_classes < 2 || max_count == 0 || !(imbalance_factor >= 1.0))
    throw Error(ErrorCode::kInvalidSpec, "long-tail profile needs C >= 2, n_1 >= 1, IF >= 1");
  std::vector<std::size_t> counts;
  for (int c = 0; c < num_classes; ++c) {
    const double exponent = -static_cast<double>(c) / static_cast<double>(num_classes - 1);
    const double n = std::round(static_cast<double>(max_count) * std::pow(imbalance_factor, exponent));
    counts.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(n)));
  }
  return counts;
}

double ImbalanceFactor(const std::vector<std::size_t>& class_counts) {
  if (class_counts.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(class_counts.begin(), class_counts.end());
  if (*lo == 0) throw Error(ErrorCode::kInvalidSpec, "empty class in imbalance factor");
  return static_cast<double>(*hi) / static_cast<double>(*lo);
}

std::size_t LabeledQuota(std::size_t count, double fraction) {
  // The relative slack absorbs products such as 30 * 0.1 = 3.0000000000000004.
  const double exact = static_cast<double>(count) * fraction;
  return static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
}

SynthData Generate(const SynthSpec& spec) {
  CheckSpec(spec);
  const std::size_t d = spec.dim;
  Rng rng(spec.seed);

  struct Point {
    std::vector<float> x;
    ClassId label;
  };
  std::vector<Point> labeled, unlabeled;
  for (int c = 0; c < spec.num_classes; ++c) {
    std::vector<double> mean(d, 0.0);
    if (spec.means.empty())
      mean[static_cast<std::size_t>(c)] = spec.radius;
    else
      mean = spec.means[static_cast<std::size_t>(c)];
    const std::size_t n = spec.class_counts[static_cast<std::size_t>(c)];
    const std::size_t quota = LabeledQuota(n, spec.labeled_fraction);
    for (std::size_t i = 0; i < n; ++i) {
      Point p{std::vector<float>(d), c};
      for (std::size_t j = 0; j < d; ++j)
        p.x[j] = static_cast<float>(mean[j] + spec.sigma * rng.Normal());
      (i < quota ? labeled : unlabeled).push_back(std::move(p));
    }
  }
  Shuffle(labeled, rng);
  Shuffle(unlabeled, rng);

  auto pack = [&](const std::vector<Point>& points, std::vector<float>& data,
                  std::vector<ClassId>& labels) {
    for (const auto& p : points) {
      data.insert(data.end(), p.x.begin(), p.x.end());
      labels.push_back(p.label);
    }
  };
  std::vector<float> ldata, udata;
  std::vector<ClassId> llabels, ulabels;
  pack(labeled, ldata, llabels);
  pack(unlabeled, udata, ulabels);

  SynthData out;
  try {
    out.labeled = EmbeddingSet(d, std::move(ldata));
    out.unlabeled = EmbeddingSet(d, std::move(udata));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("generated data is invalid: ") + e.what());
  }
  out.labels = LabelVector(std::move(llabels), spec.num_classes);
  out.truth = LabelVector(std::move(ulabels), spec.num_classes);
  out.imbalance_factor = ImbalanceFactor(spec.class_counts);
  return out;
}

EvalResult Evaluate(const LabeledOutput& output, const LabelVector& truth,
                    const std::string& method) {
  if (output.size() != truth.size())
    throw Error(ErrorCode::kCountMismatch, "output has " + std::to_string(output.size()) +
                                               " records, truth has " +
                                               std::to_string(truth.size()));
  int classes = truth.num_classes();
  for (const auto& r : output) classes = std::max(classes, r.label + 1);
  EvalResult result;
  result.method = method;
  result.confusion.assign(static_cast<std::size_t>(classes),
                          std::vector<std::int64_t>(static_cast<std::size_t>(classes), 0));
  std::vector<char> seen(truth.size(), 0);
  for (const auto& r : output) {
    if (r.index >= truth.size() || seen[r.index])
      throw Error(ErrorCode::kCountMismatch,
                  "output index " + std::to_string(r.index) + " is out of range or repeated");
    seen[r.index] = 1;
    if (r.label < 0) throw Error(ErrorCode::kNegativeLabel, "negative predicted label");
    ++result.confusion[static_cast<std::size_t>(truth[r.index])][static_cast<std::size_t>(r.label)];
  }
  std::int64_t correct = 0;
  for (std::size_t c = 0; c < result.confusion.size(); ++c) {
    std::int64_t row = 0;
    for (std::int64_t v : result.confusion[c]) row += v;
    correct += result.confusion[c][c];
    if (row == 0)
      result.per_class.emplace_back(std::nullopt);
    else
      result.per_class.emplace_back(static_cast<double>(result.confusion[c][c]) /
                                    static_cast<double>(row));
  }
  result.accuracy =
      truth.size() == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
  return result;
}

std::string EvalToJson(const EvalResult& result) {
  nlohmann::json j;
  j["method"] = result.method;
  j["accuracy"] = result.accuracy;
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& v : result.per_class) per_class.push_back(v ? nlohmann::json(*v) : nullptr);
  j["per_class"] = per_class;
  j["confusion"] = result.confusion;
  return j.dump();
}

}  // namespace hdlabel
