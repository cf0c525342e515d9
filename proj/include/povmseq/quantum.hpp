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
 * @file quantum.hpp
 * @brief Domain types for states, POVMs and projectors, plus direct
 *        Born-rule probabilities used as the reference throughout.
 */

#include <optional>
#include <string>
#include <vector>

#include "povmseq/numerics.hpp"
#include "povmseq/tolerances.hpp"

namespace povmseq {

/**
 * A quantum state, either a pure unit vector or a density matrix.
 *
 * Construct through validate_state() (or the convenience factories) so the
 * invariants hold: pure vectors have unit norm; density matrices are
 * Hermitian, positive semidefinite and unit trace.
 */
struct QuantumState {
  Eigen::Index dim = 0;
  /** Set for pure states. */
  std::optional<Vector> pure;
  /** Set for mixed states. */
  std::optional<Matrix> density;

  bool is_pure() const { return pure.has_value(); }

  /** Density matrix of the state (formed on demand for pure states). */
  Matrix density_matrix() const {
    if (density) return *density;
    return (*pure) * pure->adjoint();
  }
};

/**
 * A positive-operator-valued measure: Hermitian PSD elements summing to
 * the identity.  Construct through validate_povm().
 */
struct Povm {
  Eigen::Index dim = 0;
  std::vector<Matrix> elements;
  /** Optional outcome names, same length as elements when present. */
  std::vector<std::string> labels;

  int outcome_count() const { return static_cast<int>(elements.size()); }
};

/** An orthogonal projector together with its numerical rank. */
struct Projector {
  Matrix matrix;
  int rank = 0;
};

/**
 * Validates raw matrices as a POVM.
 *
 * @throws Error NotHermitian / NotPsd (naming the offending element index),
 *         SumNotIdentity (reporting the residual), DimensionMismatch.
 */
Povm validate_povm(const std::vector<Matrix>& elements,
                   std::vector<std::string> labels = {},
                   const Tolerances& tol = {});

/**
 * Validates a raw vector as a pure state.  Vectors within 1e-6 of unit norm
 * are renormalized; anything farther off is rejected.
 *
 * @throws Error NotAState.
 */
QuantumState validate_state(const Vector& psi, const Tolerances& tol = {});

/**
 * Validates a raw density matrix as a (possibly mixed) state.
 *
 * @throws Error NotAState naming the violated property (hermiticity,
 *         positivity or trace).
 */
QuantumState validate_state(const Matrix& rho, const Tolerances& tol = {});

/**
 * Validates a projector: Hermitian, idempotent, eigenvalues in {0, 1}.
 *
 * @throws Error PreconditionViolated / NotHermitian.
 */
Projector validate_projector(const Matrix& p, const Tolerances& tol = {});

/**
 * Born-rule outcome distribution p_k = tr(rho E_k), with a pure-state fast
 * path <psi|E_k|psi>.  Values are clamped to [0, 1]; a probability below
 * -1e-12 is a hard error.
 *
 * @throws Error DimensionMismatch, NumericalFailure.
 */
std::vector<double> born_distribution(const Povm& povm,
                                      const QuantumState& state);

}  // namespace povmseq
