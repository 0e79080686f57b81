// Copyright 2026 The robdd Authors
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

#ifndef ROBDD_ERROR_HPP_
#define ROBDD_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace robdd {

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  BoundViolation,
  IndexOutOfRange,
  UnknownTag,
  PulseTooLong,
  NonFinite,
  Parse,
  UnknownField,
  UnitOutOfRange,
  MissingField,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can emit a
// machine-readable report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace robdd

#endif  // ROBDD_ERROR_HPP_
