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

#include "povmseq/errors.hpp"

namespace povmseq {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotHermitian:
      return "not_hermitian";
    case Errc::NotPsd:
      return "not_psd";
    case Errc::SumNotIdentity:
      return "sum_not_identity";
    case Errc::NotAState:
      return "not_a_state";
    case Errc::DimensionMismatch:
      return "dimension_mismatch";
    case Errc::NumericalFailure:
      return "numerical_failure";
    case Errc::NotCommuting:
      return "not_commuting";
    case Errc::PreconditionViolated:
      return "precondition_violated";
    case Errc::TargetOutsideRange:
      return "target_outside_range";
    case Errc::NotRealizable:
      return "not_realizable";
    case Errc::DegenerateState:
      return "degenerate_state";
    case Errc::DigestMismatch:
      return "digest_mismatch";
    case Errc::MissingOperators:
      return "missing_operators";
    case Errc::OrderingMismatch:
      return "ordering_mismatch";
    case Errc::ParseError:
      return "parse_error";
  }
  return "unknown";
}

}  // namespace povmseq
