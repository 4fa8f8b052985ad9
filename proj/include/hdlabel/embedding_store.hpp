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

#ifndef HDLABEL_EMBEDDING_STORE_HPP_
#define HDLABEL_EMBEDDING_STORE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hdlabel {

using ClassId = std::int32_t;

// Dense row-major N x d matrix of finite floats with cached row norms.
// Construction validates every value; instances are immutable afterwards.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;

  // Throws InvalidArgument (dim == 0 or size mismatch), NonFiniteValue or
  // ZeroNormRow.
  EmbeddingSet(std::size_t dim, std::vector<float> data);

  std::size_t count() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return count_ == 0; }

  std::span<const float> row(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const float> data() const noexcept { return data_; }
  std::span<const double> norms() const noexcept { return norms_; }
  double norm(std::size_t i) const noexcept { return norms_[i]; }

 private:
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::vector<double> norms_;
};

// Class ids in [0, num_classes), 0-based.
class LabelVector {
 public:
  LabelVector() = default;

  // Throws LabelOutOfRange / NegativeLabel, or InvalidArgument when
  // num_classes < 2.
  LabelVector(std::vector<ClassId> labels, int num_classes);

  std::size_t size() const noexcept { return labels_.size(); }
  int num_classes() const noexcept { return num_classes_; }
  ClassId operator[](std::size_t i) const noexcept { return labels_[i]; }
  std::span<const ClassId> labels() const noexcept { return labels_; }

 private:
  std::vector<ClassId> labels_;
  int num_classes_ = 0;
};

struct OutputRecord {
  std::size_t index = 0;  // row in the unlabeled set
  ClassId label = 0;
  std::size_t level = 0;
  std::size_t rank = 0;
  double margin = 0.0;
  bool tied = false;  // audit only; not written to CSV
};

using LabeledOutput = std::vector<OutputRecord>;

// EMB1 binary format: "EMB1", u32 dim, u64 count, count*dim f32, all LE.
EmbeddingSet LoadEmbeddings(const std::string& path);
void SaveEmbeddings(const EmbeddingSet& set, const std::string& path);

// "index,label" CSV. num_classes defaults to 1 + max(label).
LabelVector LoadLabels(const std::string& path, std::size_t expected_count,
                       std::optional<int> num_classes = std::nullopt);
void SaveLabels(const LabelVector& labels, const std::string& path);

// Throws Internal if the records break the LabeledOutput invariants for an
// unlabeled set of size expected_count.
void ValidateOutput(const LabeledOutput& records, std::size_t expected_count);

// "index,label,level,rank,margin" CSV, rows sorted by (level, rank).
void WriteOutput(const LabeledOutput& records, const std::string& path);
std::string FormatOutput(const LabeledOutput& records);
LabeledOutput ReadOutput(const std::string& path);

}  // namespace hdlabel

#endif  // HDLABEL_EMBEDDING_STORE_HPP_
