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
 * @file io.hpp
 * @brief JSON file formats for POVMs, states, projectors and trees.
 *
 * Conventions: complex numbers are two-element arrays [re, im]; matrices
 * are row-major nested arrays of complex numbers; vectors are flat arrays
 * of complex numbers.  Serialized doubles use the shortest representation
 * that parses back bit-identically, so a save/load round trip is exact.
 *
 * Schemas:
 *  - POVM file:      {"dim", "elements": [matrix, ...], "labels"?}
 *  - state file:     {"dim", "pure": vector} or {"dim", "density": matrix}
 *  - projector file: {"dim", "matrix": matrix}
 *  - tree file:      {"dim", "outcome_labels", "skip_stage1",
 *                     "povm_digest" (hex string), "root": node}
 *  - tree node:      {"kind": "stage1" | "binary" | "leaf",
 *                     "projector"?, "accumulated"?, "outcome"?,
 *                     "info"?, "hit"?, "miss"?}
 *
 * Accumulated operators are optional on all nodes except the root (they
 * dominate file size); absent ones are recomputed from the projectors
 * along the path at load time, reproducing the compiler's arithmetic
 * exactly.
 */

#include <cstdint>
#include <string>

#include <json.hpp>

#include "povmseq/compiler.hpp"
#include "povmseq/realizability.hpp"
#include "povmseq/simulator.hpp"
#include "povmseq/verifier.hpp"

namespace povmseq {

using Json = nlohmann::json;

/** @name JSON value conversions
 * All parsers throw Error ParseError on malformed documents.
 * @{ */
Json complex_to_json(const Complex& z);
Complex json_to_complex(const Json& j);
Json vector_to_json(const Vector& v);
Vector json_to_vector(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix json_to_matrix(const Json& j);
/** @} */

/** @name Document conversions (validated domain types)
 * @{ */
Json povm_to_json(const Povm& povm);
Povm povm_from_json(const Json& doc, const Tolerances& tol = {});
Json state_to_json(const QuantumState& state);
QuantumState state_from_json(const Json& doc, const Tolerances& tol = {});
Json projector_to_json(const Projector& p);
Projector projector_from_json(const Json& doc, const Tolerances& tol = {});
Json tree_to_json(const ProtocolTree& tree, bool with_operators = false);
ProtocolTree tree_from_json(const Json& doc);
/** @} */

/** @name Result rendering (for the command-line front end and tests)
 * @{ */
Json distribution_to_json(const OutcomeDistribution& dist);
Json histogram_to_json(const std::vector<std::string>& labels,
                       const std::vector<std::uint64_t>& counts);
Json report_to_json(const VerificationReport& report);
Json verdict_to_json(const RealizabilityVerdict& verdict);
/** @} */

/** Reads and parses a JSON file.  @throws Error ParseError. */
Json load_json(const std::string& path);

/** Writes a JSON document with a trailing newline.  @throws Error ParseError
 *  if the file cannot be written. */
void save_json(const std::string& path, const Json& doc);

}  // namespace povmseq
