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
 * @file realizability.hpp
 * @brief Decides whether a POVM can be realized by sequential projective
 *        measurements on the system alone.
 *
 * The criterion: a POVM on a d-dimensional system is realizable exactly
 * when some projector P with 0 < rank(P) < d commutes with every element.
 * The search space is the commutant of the POVM inside the Hermitian
 * matrices, computed as the nullspace of a stacked real linear system.
 */

#include <optional>
#include <vector>

#include "povmseq/quantum.hpp"

namespace povmseq {

/**
 * Orthonormal (Frobenius) Hermitian basis of the commutant
 * { X = X^dag : [X, E_k] = 0 for all k }.  Contains at least the span of
 * the identity, so dimension >= 1.
 */
struct CommutantBasis {
  Eigen::Index dim = 0;
  std::vector<Matrix> basis;

  int dimension() const { return static_cast<int>(basis.size()); }
};

/** Outcome of the realizability decision. */
struct RealizabilityVerdict {
  bool realizable = false;
  /** Present exactly when realizable. */
  std::optional<Projector> projector;
  int commutant_dimension = 0;
};

/**
 * Computes an orthonormal Hermitian basis of the commutant of the POVM.
 *
 * The commutation constraints of all elements are stacked into one real
 * linear system over the d^2-real-dimensional space of Hermitian matrices;
 * the basis is the system's nullspace (relative singular-value threshold
 * tol.commutant_nullspace()).
 *
 * @throws Error NumericalFailure.
 */
CommutantBasis commutant_basis(const Povm& povm, const Tolerances& tol = {});

/**
 * True iff P commutes with every POVM element within tol.commutation()
 * (scaled by max(1, ||E_k||)) and 0 < rank(P) < dim.  This is the
 * realizability condition a stage-1 projector must satisfy.
 *
 * @throws Error DimensionMismatch.
 */
bool is_realizing_projector(const Povm& povm, const Projector& p,
                            const Tolerances& tol = {});

/**
 * Decides realizability and, when possible, produces a witness projector.
 *
 * When the commutant has dimension >= 2, the basis element farthest from
 * span{I} is eigendecomposed, its eigenvalues are clustered (relative gap
 * tol.cluster_gap()), and P is the eigenprojector sum of the cluster
 * holding the largest eigenvalue (complemented if that yields full rank).
 * The returned projector always satisfies is_realizing_projector.
 *
 * @throws Error NumericalFailure if a witness cannot be validated.
 */
RealizabilityVerdict find_commuting_projector(const Povm& povm,
                                              const Tolerances& tol = {});

/**
 * Orthonormal basis of the intersection of the supports of two states,
 * computed as the kernel of Q1 + Q2 where Q_i projects onto ker(rho_i).
 * Empty when the intersection is trivial.
 *
 * @throws Error DimensionMismatch.
 */
std::vector<Vector> support_intersection(const QuantumState& rho1,
                                         const QuantumState& rho2,
                                         const Tolerances& tol = {});

}  // namespace povmseq
