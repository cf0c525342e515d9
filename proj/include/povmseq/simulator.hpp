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
 * @file simulator.hpp
 * @brief Executes compiled measurement trees: exact outcome distributions
 *        by traversal, and seeded Monte Carlo shots with collapse.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "povmseq/compiler.hpp"

namespace povmseq {

/** Exact outcome distribution of a tree on a state. */
struct OutcomeDistribution {
  /** Outcome names, index-aligned with probabilities. */
  std::vector<std::string> labels;
  /** Per-outcome probability, clamped to [0, 1]. */
  std::vector<double> probabilities;
  /** 1 minus the sum of probabilities (weight outside the tree). */
  double residual = 0.0;
};

/** One step of a shot's path through the tree. */
struct PathStep {
  int node_id = 0;
  bool hit = false;
};

/** Full record of a single Monte Carlo shot. */
struct ShotRecord {
  /** Index of the reported outcome. */
  int outcome = 0;
  /** Outcome name. */
  std::string label;
  /** Visited measurement nodes with the branch taken at each. */
  std::vector<PathStep> path;
  /** Normalized post-measurement state. */
  QuantumState final_state;
};

/**
 * Deterministic counter-based random stream keyed by (seed, shot).
 * Independent of call order and global state, so histograms are
 * bit-reproducible under any execution schedule.
 */
class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t shot);

  /** Next raw 64-bit word of the stream. */
  std::uint64_t next();

  /** Uniform double in [0, 1) with 53 random bits. */
  double uniform();

 private:
  std::uint64_t state_;
};

/**
 * Exact outcome distribution: the probability of each leaf is
 * tr(M rho M^dag) for the leaf's accumulated operator M, summed per
 * outcome.  Probabilities sum to 1 up to the residual, which is zero for
 * stage-1 trees and the input's weight on the skipped branch for
 * embedding-mode trees.
 *
 * @throws Error DimensionMismatch; PreconditionViolated if the residual
 *         exceeds 1e-9 (the state has weight the tree never measures).
 */
OutcomeDistribution exact_distribution(const ProtocolTree& tree,
                                       const QuantumState& state);

/**
 * Simulates one shot: at every node the hit probability is evaluated on
 * the current collapsed state, one uniform draw picks the branch, and the
 * state collapses accordingly.
 *
 * @throws Error DimensionMismatch; DegenerateState if a branch of
 *         probability below 1e-15 is drawn twice in a row (accumulated
 *         roundoff); PreconditionViolated for embedding-mode trees when
 *         the input has weight on the skipped branch.
 */
ShotRecord run_shot(const ProtocolTree& tree, const QuantumState& state,
                    ShotRng& rng);

/**
 * Runs @p shots independent shots with streams keyed by (seed, shot index)
 * and returns counts per outcome index.  Reproducible for a fixed seed.
 */
std::vector<std::uint64_t> sample_histogram(const ProtocolTree& tree,
                                            const QuantumState& state,
                                            std::uint64_t shots,
                                            std::uint64_t seed);

}  // namespace povmseq
