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

#ifndef HDLABEL_ERROR_HPP_
#define HDLABEL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hdlabel {

// Values are mirrored one-to-one by hdl_status in hdlabel.h.
enum class ErrorCode : int {
  kMalformedFile = 1,
  kNonFiniteValue = 2,
  kZeroNormRow = 3,
  kCountMismatch = 4,
  kNegativeLabel = 5,
  kNonIntegerLabel = 6,
  kLabelOutOfRange = 7,
  kIoFailure = 8,
  kDimMismatch = 9,
  kKTooLarge = 10,
  kEmptyVoterSet = 11,
  kDomainError = 12,
  kEmptySample = 13,
  kInvalidSpec = 14,
  kInvalidArgument = 15,
  kInternal = 16,
};

const char* ErrorCodeName(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Row-indexed load failures (NonFiniteValue, ZeroNormRow) carry the row.
class RowError : public Error {
 public:
  RowError(ErrorCode code, std::size_t row, const std::string& what)
      : Error(code, what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace hdlabel

#endif  // HDLABEL_ERROR_HPP_
