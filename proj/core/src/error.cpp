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

#include "robdd/error.hpp"

namespace robdd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::BoundViolation: return "bound_violation";
    case ErrorKind::IndexOutOfRange: return "index_out_of_range";
    case ErrorKind::UnknownTag: return "unknown_tag";
    case ErrorKind::PulseTooLong: return "pulse_too_long";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::UnknownField: return "unknown_field";
    case ErrorKind::UnitOutOfRange: return "unit_out_of_range";
    case ErrorKind::MissingField: return "missing_field";
    case ErrorKind::Io: return "io_error";
  }
  return "unknown";
}

}  // namespace robdd
