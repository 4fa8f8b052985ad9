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

#include "hdlabel/embedding_store.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "hdlabel/error.hpp"

namespace hdlabel {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderBytes = 16;

template <typename T>
T ReadLittleEndian(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return std::bit_cast<T>(v);
}

template <typename T>
void AppendLittleEndian(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U v = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::string ReadWholeFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed on '" + path + "'");
  return std::move(ss).str();
}

void WriteWholeFile(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed on '" + path + "'");
}

// Splits on '\n', tolerating CRLF and a single trailing newline.
std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename Int>
bool ParseInt(std::string_view s, Int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string Where(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

}  // namespace

const char* ErrorCodeName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kZeroNormRow: return "ZeroNormRow";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kNegativeLabel: return "NegativeLabel";
    case ErrorCode::kNonIntegerLabel: return "NonIntegerLabel";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kEmptyVoterSet: return "EmptyVoterSet";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

EmbeddingSet::EmbeddingSet(std::size_t dim, std::vector<float> data)
    : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
  if (data_.size() % dim_ != 0)
    throw Error(ErrorCode::kInvalidArgument, "embedding data size is not a multiple of dim");
  count_ = data_.size() / dim_;
  norms_.resize(count_);
  for (std::size_t i = 0; i < count_; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const float v = data_[i * dim_ + j];
      if (!std::isfinite(v))
        throw RowError(ErrorCode::kNonFiniteValue, i,
                       "non-finite value at row " + std::to_string(i) + ", column " +
                           std::to_string(j));
      sq += static_cast<double>(v) * static_cast<double>(v);
    }
    if (!(sq > 0.0))
      throw RowError(ErrorCode::kZeroNormRow, i, "zero-norm row " + std::to_string(i));
    norms_[i] = std::sqrt(sq);
  }
}

LabelVector::LabelVector(std::vector<ClassId> labels, int num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes) {
  if (num_classes_ < 2)
    throw Error(ErrorCode::kInvalidArgument,
                "need at least 2 classes, got " + std::to_string(num_classes_));
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0)
      throw Error(ErrorCode::kNegativeLabel, "negative label at row " + std::to_string(i));
    if (labels_[i] >= num_classes_)
      throw Error(ErrorCode::kLabelOutOfRange,
                  "label " + std::to_string(labels_[i]) + " at row " + std::to_string(i) +
                      " is outside [0, " + std::to_string(num_classes_) + ")");
  }
}

EmbeddingSet LoadEmbeddings(const std::string& path) {
  const std::string bytes = ReadWholeFile(path);
  if (bytes.size() < kHeaderBytes)
    throw Error(ErrorCode::kMalformedFile, path + ": truncated header");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    throw Error(ErrorCode::kMalformedFile, path + ": bad magic (expected EMB1)");
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
  const auto dim = ReadLittleEndian<std::uint32_t>(raw + 4);
  const auto count = ReadLittleEndian<std::uint64_t>(raw + 8);
  if (dim == 0) throw Error(ErrorCode::kMalformedFile, path + ": dim is zero");
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  if (count > payload / (4ull * dim) || payload != count * dim * 4ull)
    throw Error(ErrorCode::kMalformedFile,
                path + ": payload is " + std::to_string(payload) + " bytes, header declares " +
                    std::to_string(count) + " x " + std::to_string(dim) + " floats");
  std::vector<float> data(count * dim);
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = ReadLittleEndian<float>(raw + kHeaderBytes + 4 * i);
  try {
    return EmbeddingSet(dim, std::move(data));
  } catch (const RowError& e) {
    throw RowError(e.code(), e.row(), path + ": " + e.what());
  }
}

void SaveEmbeddings(const EmbeddingSet& set, const std::string& path) {
  std::string out;
  out.reserve(kHeaderBytes + set.data().size() * 4);
  out.append(kMagic.data(), kMagic.size());
  AppendLittleEndian(out, static_cast<std::uint32_t>(set.dim()));
  AppendLittleEndian(out, static_cast<std::uint64_t>(set.count()));
  for (float v : set.data()) AppendLittleEndian(out, v);
  WriteWholeFile(path, out);
}

LabelVector LoadLabels(const std::string& path, std::size_t expected_count,
                       std::optional<int> num_classes) {
  const std::string text = ReadWholeFile(path);
  const auto lines = SplitLines(text);
  if (lines.empty() || lines[0] != "index,label")
    throw Error(ErrorCode::kMalformedFile, path + ": header must be exactly 'index,label'");
  std::vector<ClassId> labels;
  labels.reserve(lines.size() - 1);
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto fields = SplitFields(lines[ln]);
    if (fields.size() != 2)
      throw Error(ErrorCode::kMalformedFile, Where(path, ln + 1) + ": expected 2 fields");
    std::int64_t index = 0;
    if (!ParseInt(fields[0], index) || index != static_cast<std::int64_t>(labels.size()))
      throw Error(ErrorCode::kMalformedFile,
                  Where(path, ln + 1) + ": index must be " + std::to_string(labels.size()));
    std::int64_t label = 0;
    if (!ParseInt(fields[1], label))
      throw Error(ErrorCode::kNonIntegerLabel,
                  Where(path, ln + 1) + ": label '" + std::string(fields[1]) +
                      "' is not an integer");
    if (label < 0)
      throw Error(ErrorCode::kNegativeLabel, Where(path, ln + 1) + ": negative label");
    if (label > std::numeric_limits<ClassId>::max() - 1)
      throw Error(ErrorCode::kLabelOutOfRange, Where(path, ln + 1) + ": label too large");
    labels.push_back(static_cast<ClassId>(label));
  }
  if (labels.size() != expected_count)
    throw Error(ErrorCode::kCountMismatch,
                path + ": " + std::to_string(labels.size()) + " labels, expected " +
                    std::to_string(expected_count));
  int classes = 0;
  if (num_classes) {
    classes = *num_classes;
  } else {
    for (ClassId l : labels) classes = std::max(classes, l + 1);
  }
  try {
    return LabelVector(std::move(labels), classes);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void SaveLabels(const LabelVector& labels, const std::string& path) {
  std::string out = "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
  WriteWholeFile(path, out);
}

void ValidateOutput(const LabeledOutput& records, std::size_t expected_count) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInternal, msg); };
  if (records.size() != expected_count)
    fail("output has " + std::to_string(records.size()) + " records, expected " +
         std::to_string(expected_count));
  std::vector<char> seen(expected_count, 0);
  std::size_t levels = 0;
  for (const auto& r : records) {
    if (r.index >= expected_count || seen[r.index]) fail("bad or duplicate output index");
    seen[r.index] = 1;
    if (!(r.margin >= 0.0 && r.margin <= 1.0)) fail("margin outside [0,1]");
    levels = std::max(levels, r.level + 1);
  }
  std::vector<std::vector<std::size_t>> ranks(levels);
  for (const auto& r : records) ranks[r.level].push_back(r.rank);
  for (auto& level_ranks : ranks) {
    if (level_ranks.empty()) fail("level ordinals are not contiguous");
    std::sort(level_ranks.begin(), level_ranks.end());
    for (std::size_t i = 0; i < level_ranks.size(); ++i)
      if (level_ranks[i] != i) fail("within-level ranks are not a permutation");
  }
}

std::string FormatOutput(const LabeledOutput& records) {
  std::vector<const OutputRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const OutputRecord* a, const OutputRecord* b) {
    return a->level != b->level ? a->level < b->level : a->rank < b->rank;
  });
  std::string out = "index,label,level,rank,margin\n";
  char buf[128];
  for (const auto* r : sorted) {
    std::snprintf(buf, sizeof(buf), "%zu,%d,%zu,%zu,%.6f\n", r->index, r->label, r->level,
                  r->rank, r->margin);
    out += buf;
  }
  return out;
}

void WriteOutput(const LabeledOutput& records, const std::string& path) {
  WriteWholeFile(path, FormatOutput(records));
}

LabeledOutput ReadOutput(const std::string& path) {
  const std::string text = ReadWholeFile(path);
  const auto lines = SplitLines(text);
  if (lines.empty() || lines[0] != "index,label,level,rank,margin")
    throw Error(ErrorCode::kMalformedFile,
                path + ": header must be exactly 'index,label,level,rank,margin'");
  LabeledOutput records;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto f = SplitFields(lines[ln]);
    if (f.size() != 5)
      throw Error(ErrorCode::kMalformedFile, Where(path, ln + 1) + ": expected 5 fields");
    OutputRecord r;
    std::int64_t label = 0;
    if (!ParseInt(f[0], r.index) || !ParseInt(f[2], r.level) || !ParseInt(f[3], r.rank))
      throw Error(ErrorCode::kMalformedFile, Where(path, ln + 1) + ": bad integer field");
    if (!ParseInt(f[1], label))
      throw Error(ErrorCode::kNonIntegerLabel, Where(path, ln + 1) + ": bad label");
    if (label < 0) throw Error(ErrorCode::kNegativeLabel, Where(path, ln + 1) + ": negative label");
    r.label = static_cast<ClassId>(label);
    char* end = nullptr;
    const std::string margin(f[4]);
    r.margin = std::strtod(margin.c_str(), &end);
    if (margin.empty() || end != margin.c_str() + margin.size())
      throw Error(ErrorCode::kMalformedFile, Where(path, ln + 1) + ": bad margin");
    records.push_back(r);
  }
  return records;
}

}  // namespace hdlabel
