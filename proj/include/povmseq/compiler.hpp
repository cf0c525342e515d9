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
 * @file compiler.hpp
 * @brief Compiles a realizable POVM into a binary tree of projective
 *        measurements.
 *
 * The protocol has two stages.  Stage 1 measures {P, I-P} for a projector
 * P commuting with every POVM element; the outcome selects a branch.  On
 * branch a the elements split into compressed parts E_{k,0} = P E_k P and
 * E_{k,1} = (I-P) E_k (I-P), whose spectral items (eigenvalue, eigenvector)
 * are consumed one binary yes/no measurement at a time.  A hit reports the
 * item's outcome; a miss moves on to the next item.  After the last item
 * the remaining outcome is reported without further measurement.
 *
 * The embedding mode trades one extra Hilbert-space dimension for
 * unconditional realizability: any POVM, padded with the projector onto
 * the added axis, commutes with that projector, and states supported on
 * the original space never leave the I-P branch, so stage 1 can be
 * skipped entirely.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "povmseq/quantum.hpp"

namespace povmseq {

/**
 * One spectral item of a compressed element E_{k,a}: an eigenvalue
 * (weight) and unit eigenvector of P E_k P (branch 0) or (I-P) E_k (I-P)
 * (branch 1).  Items with weight at or below the rank threshold are
 * dropped at construction.
 */
struct SpectralItem {
  /** Element index k this item belongs to (0-based). */
  int outcome = 0;
  /** 0 for the P branch, 1 for the I-P branch. */
  int branch = 0;
  /** Position within the (outcome, branch) run, by descending weight. */
  int index = 0;
  /** Eigenvalue of the compressed element; strictly positive. */
  double weight = 0.0;
  /** Unit eigenvector, deterministic phase. */
  Vector vector;
};

/**
 * Result of the adjoint-preimage construction: a unit state with
 * M^dag state = sqrt(gain) * target and gain >= the requested weight.
 */
struct AdjointPreimage {
  double gain = 0.0;
  Vector state;
};

/** Per-node compilation record kept on binary nodes for verification. */
struct BinaryNodeInfo {
  /** Element index this node's hit-leaf reports. */
  int outcome = 0;
  /** Branch (0 or 1) the node lives on. */
  int branch = 0;
  /** Item position within the (outcome, branch) run. */
  int item_index = 0;
  /** Item eigenvalue lambda. */
  double weight = 0.0;
  /** Preimage gain mu (>= weight). */
  double gain = 0.0;
  /** Item eigenvector the node accounts for. */
  Vector target;
  /** Unit preimage of target under the accumulated operator's adjoint. */
  Vector probe;
  /** Kernel vector mixed into the measured direction. */
  Vector padding;
  /** Measured direction: the node projects onto this unit vector. */
  Vector direction;
};

/** A node of the compiled measurement tree. */
struct ProtocolNode {
  enum class Kind { Stage1, Binary, Leaf };

  Kind kind = Kind::Leaf;
  /** Preorder id within the tree (root = 0, hit subtree before miss). */
  int id = 0;
  /** Measurement projector; P for stage 1, rank-1 for binary, unused for
   *  leaves. */
  Matrix projector;
  /** Product of outcome projectors from the root to arrival here. */
  Matrix accumulated;
  /** Reported outcome (element index); leaves only. */
  int outcome = -1;
  /** Compilation record; binary nodes only. */
  std::optional<BinaryNodeInfo> info;
  /** Subtree after the projector fires (outcome "yes"). */
  std::unique_ptr<ProtocolNode> hit;
  /** Subtree after the complement fires (outcome "no"). */
  std::unique_ptr<ProtocolNode> miss;

  bool is_leaf() const { return kind == Kind::Leaf; }
};

/** A compiled measurement protocol. */
struct ProtocolTree {
  Eigen::Index dim = 0;
  /** Outcome names, index-aligned with the source POVM's elements. */
  std::vector<std::string> outcome_labels;
  /** True when stage 1 is omitted (embedding mode). */
  bool skip_stage1 = false;
  /** Fingerprint of the source POVM (see povm_digest). */
  std::uint64_t povm_digest = 0;
  std::unique_ptr<ProtocolNode> root;

  int outcome_count() const {
    return static_cast<int>(outcome_labels.size());
  }
};

/** Options controlling compile_tree. */
struct CompileOptions {
  /** Omit the stage-1 measurement; requires inputs annihilated by P. */
  bool skip_stage1 = false;
  /** Reorder elements to minimize the worst-case measurement count. */
  bool reorder = true;
  Tolerances tol = {};
};

/**
 * Fingerprint of the POVM's numerical content: dimension, element count
 * and entries in order (labels excluded, negative zeros canonicalized).
 * Used to pair trees with the POVM they were compiled from.
 */
std::uint64_t povm_digest(const Povm& povm);

/**
 * Spectral items of element @p outcome of the POVM split by @p p, branch 0
 * first, each run sorted by descending weight.  Items with weight at or
 * below tol.rank() * max(1, ||E_{k,a}||) are dropped.
 *
 * @throws Error NotCommuting if the element fails to commute with @p p.
 */
std::vector<SpectralItem> spectral_items(const Matrix& element,
                                         const Projector& p, int outcome,
                                         const Tolerances& tol = {});

/**
 * Unit vector whose image under M^dag is proportional to @p target, with
 * the proportionality gain maximal.  Requires the accumulated operator to
 * dominate the item: M^dag M - weight * target target^dag must be PSD;
 * then gain >= weight and M^dag state = sqrt(gain) * target.
 *
 * @throws Error PreconditionViolated if the dominance check fails,
 *         TargetOutsideRange if @p target is not in range(M^dag),
 *         NumericalFailure if the output contract cannot be met.
 */
AdjointPreimage unit_adjoint_preimage(const Matrix& m, double weight,
                                      const Vector& target,
                                      const Tolerances& tol = {});

/**
 * Permutation of element indices (new order) that moves one element to the
 * last position so as to minimize the worst-case measurement count
 * max_a sum_{k != last} rank(E_{k,a}); the relative order of the others is
 * preserved, and ties keep the largest original index last.
 */
std::vector<int> reorder_for_depth(const Povm& povm, const Projector& p,
                                   const Tolerances& tol = {});

/**
 * Worst-case number of measurements of a tree compiled from @p povm with
 * the last element chosen by reorder_for_depth (or the POVM's own last
 * element when @p reorder is false): max over built branches of the total
 * item count, plus one for stage 1 unless skipped.
 */
int depth_bound(const Povm& povm, const Projector& p, bool skip_stage1,
                bool reorder = true, const Tolerances& tol = {});

/** Number of measurements on the longest root-to-leaf path of the tree. */
int tree_depth(const ProtocolTree& tree);

/**
 * Compiles the POVM into a measurement tree rooted at the stage-1 node
 * (or at the first branch-1 node when options.skip_stage1 is set).
 *
 * @throws Error NotRealizable if @p p is not a valid stage-1 projector for
 *         this POVM; PreconditionViolated / TargetOutsideRange propagated
 *         from the per-item construction.
 */
ProtocolTree compile_tree(const Povm& povm, const Projector& p,
                          const CompileOptions& options = {});

/**
 * Pads the POVM with one Hilbert-space dimension and one outcome: elements
 * are zero-padded to d+1, a projector onto the added axis is appended as
 * the final element, and that same projector is returned as the stage-1
 * witness.  Compile the result with skip_stage1 = true; states supported
 * on the original d dimensions give the added outcome probability 0.
 */
std::pair<Povm, Projector> embed_povm(const Povm& povm,
                                      const Tolerances& tol = {});

/** Zero-pads a state by one dimension to match an embedded POVM. */
QuantumState embed_state(const QuantumState& state);

}  // namespace povmseq
