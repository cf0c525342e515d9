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
 * @file tolerances.hpp
 * @brief Central numerical tolerance policy.
 *
 * All approximate comparisons in the library go through a single
 * Tolerances value so that loosening or tightening the numerics is a
 * one-knob operation.  Three classes are exposed:
 *
 *  - base:      direct floating-point comparisons (hermiticity, PSD
 *               eigenvalue floors, singular-value rank cutoffs);
 *  - derived:   quantities produced by one stage of computation
 *               (kernel residuals, commutation residuals, per-node
 *               operator identities), 10x base;
 *  - compound:  quantities accumulated over many stages (sums over
 *               leaves, telescoping partial sums, eigenvalue cluster
 *               separation), 100x base.
 *
 * Residual checks scale by max(1, ||A||) of the operators involved, so
 * the same policy works for POVM elements of any norm.
 */

namespace povmseq {

/** Tolerance bundle used by every approximate predicate in the library. */
struct Tolerances {
  /** Base tolerance for direct comparisons. */
  double base = 1e-10;

  /** Hermiticity residual ||A - A^dag||_F, scaled by max(1, ||A||_F). */
  double hermitian() const { return base; }
  /** Eigenvalue floor for positive semidefiniteness. */
  double psd() const { return base; }
  /** Relative singular-value cutoff for numerical rank. */
  double rank() const { return base; }

  /** Residual of kernel / orthogonality relations (one linear solve away). */
  double kernel() const { return 10 * base; }
  /** Commutator norm ||[A, B]||_F treated as zero. */
  double commutation() const { return 10 * base; }
  /** Relative singular-value cutoff for commutant nullspace extraction. */
  double commutant_nullspace() const { return 10 * base; }
  /** Contract residual of the adjoint-preimage construction. */
  double preimage_contract() const { return 10 * base; }
  /** Per-node operator identity residual in compiled trees. */
  double node_identity() const { return 10 * base; }

  /** Residual of per-outcome sums over leaves of a compiled tree. */
  double leaf_sum() const { return 100 * base; }
  /** Residual of telescoping partial sums along a branch. */
  double telescoping() const { return 100 * base; }
  /** Minimum gap separating distinct eigenvalue clusters. */
  double cluster_gap() const { return 100 * base; }
  /** Range-membership residual for preimage targets. */
  double range_membership() const { return 100 * base; }

  /** Returns a copy with every tolerance scaled by @p factor. */
  Tolerances scaled(double factor) const { return Tolerances{base * factor}; }
};

}  // namespace povmseq
