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

#include "povmseq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace povmseq {

namespace {

// A drawn branch below this probability is attributed to roundoff.
constexpr double kDegenerateBranch = 1e-15;
// Tolerated weight of the input outside the tree's measured subspace.
constexpr double kResidualSlack = 1e-9;

void require_same_dim(const ProtocolTree& tree, const QuantumState& state) {
  if (tree.dim != state.dim) {
    throw Error(Errc::DimensionMismatch,
                "state dimension " + std::to_string(state.dim) +
                    " does not match tree dimension " +
                    std::to_string(tree.dim));
  }
}

void accumulate_leaf_probabilities(const ProtocolNode& node,
                                   const Matrix& rho,
                                   std::vector<double>& out) {
  if (node.is_leaf()) {
    const double p =
        (node.accumulated * rho * node.accumulated.adjoint()).trace().real();
    out[static_cast<std::size_t>(node.outcome)] += std::max(p, 0.0);
    return;
  }
  accumulate_leaf_probabilities(*node.hit, rho, out);
  accumulate_leaf_probabilities(*node.miss, rho, out);
}

/** Current state of a shot: pure vector or density matrix. */
struct Collapsing {
  std::optional<Vector> psi;
  std::optional<Matrix> rho;

  double hit_probability(const Matrix& projector) const {
    if (psi) return (projector * (*psi)).squaredNorm();
    return (projector * (*rho) * projector).trace().real();
  }

  void collapse(const Matrix& projector, double probability) {
    const double scale = 1.0 / probability;
    if (psi) {
      *psi = projector * (*psi) * std::sqrt(scale);
    } else {
      *rho = projector * (*rho) * projector * scale;
    }
  }
};

}  // namespace

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t shot) {
  // Decorrelate the per-shot streams by hashing (seed, shot) into the
  // initial counter with the same mixing function that generates output.
  state_ = seed + 0x9E3779B97F4A7C15ull;
  state_ = (state_ ^ (state_ >> 30)) * 0xBF58476D1CE4E5B9ull;
  state_ ^= shot + 0x9E3779B97F4A7C15ull;
  state_ = (state_ ^ (state_ >> 27)) * 0x94D049BB133111EBull;
  state_ ^= state_ >> 31;
}

std::uint64_t ShotRng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double ShotRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

OutcomeDistribution exact_distribution(const ProtocolTree& tree,
                                       const QuantumState& state) {
  require_same_dim(tree, state);
  const Matrix rho = state.density_matrix();

  OutcomeDistribution dist;
  dist.labels = tree.outcome_labels;
  dist.probabilities.assign(tree.outcome_labels.size(), 0.0);
  accumulate_leaf_probabilities(*tree.root, rho, dist.probabilities);

  double total = 0.0;
  for (double& p : dist.probabilities) {
    p = std::clamp(p, 0.0, 1.0);
    total += p;
  }
  dist.residual = 1.0 - total;
  if (std::abs(dist.residual) > kResidualSlack) {
    throw Error(Errc::PreconditionViolated,
                "input state has weight " + std::to_string(dist.residual) +
                    " outside the subspace the tree measures");
  }
  return dist;
}

ShotRecord run_shot(const ProtocolTree& tree, const QuantumState& state,
                    ShotRng& rng) {
  require_same_dim(tree, state);
  Collapsing current;
  if (state.is_pure()) {
    current.psi = *state.pure;
  } else {
    current.rho = *state.density;
  }

  if (tree.skip_stage1) {
    // The omitted stage-1 measurement is a certainty for valid inputs;
    // apply its projection deterministically to scrub roundoff dust.
    const Matrix& start = tree.root->accumulated;
    const double p = current.hit_probability(start);
    if (p < 1.0 - kResidualSlack) {
      throw Error(Errc::PreconditionViolated,
                  "input state has weight " + std::to_string(1.0 - p) +
                      " on the branch the tree skips");
    }
    current.collapse(start, p);
  }

  ShotRecord record;
  const ProtocolNode* node = tree.root.get();
  while (!node->is_leaf()) {
    const double p_hit =
        std::clamp(current.hit_probability(node->projector), 0.0, 1.0);
    bool hit = false;
    for (int attempt = 0;; ++attempt) {
      hit = rng.uniform() < p_hit;
      const double p_branch = hit ? p_hit : 1.0 - p_hit;
      if (p_branch >= kDegenerateBranch) break;
      if (attempt == 1) {
        throw Error(Errc::DegenerateState,
                    "drew a branch of vanishing probability twice; the "
                    "state was annihilated by the available projectors");
      }
    }
    record.path.push_back({node->id, hit});
    if (hit) {
      current.collapse(node->projector, p_hit);
      node = node->hit.get();
    } else {
      const Matrix complement =
          Matrix::Identity(tree.dim, tree.dim) - node->projector;
      current.collapse(complement, 1.0 - p_hit);
      node = node->miss.get();
    }
  }

  record.outcome = node->outcome;
  record.label = tree.outcome_labels[static_cast<std::size_t>(node->outcome)];
  if (current.psi) {
    record.final_state.dim = tree.dim;
    record.final_state.pure = *current.psi / current.psi->norm();
  } else {
    Matrix rho = *current.rho;
    rho = hermitized(rho / rho.trace().real());
    record.final_state.dim = tree.dim;
    record.final_state.density = std::move(rho);
  }
  return record;
}

std::vector<std::uint64_t> sample_histogram(const ProtocolTree& tree,
                                            const QuantumState& state,
                                            std::uint64_t shots,
                                            std::uint64_t seed) {
  std::vector<std::uint64_t> counts(tree.outcome_labels.size(), 0);
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    ShotRng rng(seed, shot);
    const ShotRecord record = run_shot(tree, state, rng);
    ++counts[static_cast<std::size_t>(record.outcome)];
  }
  return counts;
}

}  // namespace povmseq
