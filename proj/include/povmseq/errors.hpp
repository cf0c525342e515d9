// Copyright 2026 The povmseq Authors
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

#pragma once

/**
 * @file errors.hpp
 * @brief Error codes and the exception type thrown by the library.
 */

#include <stdexcept>
#include <string>

namespace povmseq {

/** Machine-readable failure categories. */
enum class Errc {
  /** An operator expected to be Hermitian is not. */
  NotHermitian,
  /** An operator expected to be positive semidefinite is not. */
  NotPsd,
  /** POVM elements do not sum to the identity. */
  SumNotIdentity,
  /** A density matrix is not a valid quantum state. */
  NotAState,
  /** Operands have incompatible dimensions. */
  DimensionMismatch,
  /** A numerical routine failed to converge or produced garbage. */
  NumericalFailure,
  /** A projector fails to commute with every POVM element. */
  NotCommuting,
  /** A documented precondition of an operation was violated. */
  PreconditionViolated,
  /** A preimage target lies outside the range of the given operator. */
  TargetOutsideRange,
  /** The POVM admits no non-trivial commuting projector. */
  NotRealizable,
  /** A state was annihilated by every available branch projector. */
  DegenerateState,
  /** A measurement tree does not match the POVM it claims to realize. */
  DigestMismatch,
  /** A serialized tree lacks operators required for the operation. */
  MissingOperators,
  /** Tree structure is inconsistent with any per-outcome item ordering. */
  OrderingMismatch,
  /** Malformed input file or JSON document. */
  ParseError,
};

/** Returns a stable identifier for @p code, e.g. "not_hermitian". */
const char* errc_name(Errc code);

/** Exception carrying an Errc plus a human-readable message. */
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace povmseq
