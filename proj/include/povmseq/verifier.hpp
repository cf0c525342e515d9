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
 * @file verifier.hpp
 * @brief Independent checks tying a compiled tree back to its POVM.
 *
 * Verification is deliberately separate from compilation: every identity
 * is recomputed from the operators stored in the tree (plus freshly
 * decomposed spectral items), so a compiler bug cannot certify itself.
 *
 * For embedding-mode trees, where stage 1 is skipped, all operator
 * comparisons against POVM elements use the elements restricted to the
 * measured branch, (I-P) E_k (I-P); for stage-1 trees the restriction is
 * the identity and the comparisons are against E_k itself.
 */

#include <utility>
#include <vector>

#include "povmseq/compiler.hpp"

namespace povmseq {

/** Aggregated verification outcome; all residuals are Frobenius norms. */
struct VerificationReport {
  /** Per-outcome residual of sum-over-leaves M^dag M against the element. */
  std::vector<double> leaf_sum_residuals;
  /** Residual of the all-leaves sum against the measured-subspace identity. */
  double completeness_residual = 0.0;
  /** Max over binary nodes of the per-node measurement identity. */
  double node_identity_max_residual = 0.0;
  /** Max over chain positions of the running-sum identity. */
  double telescoping_max_residual = 0.0;
  /** Per-element residual of E_k against its two-branch split. */
  std::vector<double> decomposition_residuals;
  /** Measurements on the longest root-to-leaf path. */
  int depth = 0;
  /** Worst-case measurement bound from the split-element ranks. */
  int depth_bound = 0;
  /** True iff every residual is inside tolerance and depth <= bound. */
  bool pass = false;
  /** The tolerance policy the pass verdict used. */
  Tolerances tolerances;
};

/**
 * Recovers the stage-1 projector from a tree: the root's measurement for
 * stage-1 trees, the complement of the root's accumulated operator for
 * embedding-mode trees.
 *
 * @throws Error MissingOperators if the root carries no operators.
 */
Projector stage1_projector(const ProtocolTree& tree,
                           const Tolerances& tol = {});

/**
 * Per-outcome residuals of the leaf-sum identity: the accumulated
 * operators of all leaves reporting outcome k satisfy
 * sum M^dag M = E_k (restricted to the measured branch in embedding mode).
 *
 * @throws Error DigestMismatch if the tree was not compiled from @p povm,
 *         MissingOperators.
 */
std::vector<double> check_leaf_sums(const ProtocolTree& tree,
                                    const Povm& povm,
                                    const Tolerances& tol = {});

/**
 * Max residual over binary nodes of the per-node identity
 * M^dag (psi psi^dag) M = weight * target target^dag, with M the node's
 * incoming accumulated operator.
 *
 * @throws Error MissingOperators.
 */
double check_node_identities(const ProtocolTree& tree);

/**
 * Max residual of the running-sum identity along every compiled chain:
 * at each node, M^dag M equals the sum of weight * target target^dag over
 * the items not yet consumed (the node's own item, later items on the
 * chain, and the last element's items, which are never measured).
 *
 * @p items must come from spectral_items of every element against the
 * tree's stage-1 projector.
 *
 * @throws Error OrderingMismatch if the tree's structure is inconsistent
 *         with any per-element ordering of @p items; MissingOperators.
 */
double check_telescoping(const ProtocolTree& tree,
                         const std::vector<SpectralItem>& items);

/**
 * Per-element residual of the two-branch split identity
 * E_k = P E_k P + (I-P) E_k (I-P); at most tol.commutation() exactly when
 * the element commutes with P.
 */
std::vector<double> check_decomposition(const Povm& povm,
                                        const Projector& p);

/**
 * (depth, bound): measurements on the longest path, and the worst-case
 * bound computed from the ranks of the split elements with the tree's own
 * last element (stage 1 counted unless skipped).
 */
std::pair<int, int> check_depth_bound(const ProtocolTree& tree,
                                      const Povm& povm, const Projector& p,
                                      const Tolerances& tol = {});

/**
 * Runs every check and aggregates the report.  The pass verdict uses
 * tol.leaf_sum() for leaf sums and completeness, tol.node_identity() for
 * node identities, tol.telescoping() for running sums, tol.commutation()
 * for the split identity, and depth <= bound.
 *
 * @throws Error DigestMismatch, MissingOperators, OrderingMismatch.
 */
VerificationReport verify_tree(const ProtocolTree& tree, const Povm& povm,
                               const Tolerances& tol = {});

}  // namespace povmseq
