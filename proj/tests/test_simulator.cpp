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

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "povmseq/simulator.hpp"
#include "test_support.hpp"

using namespace povmseq;
using namespace povmseq::testing;

namespace {

ProtocolTree qutrit_tree() {
  return compile_tree(qutrit_example_povm(), qutrit_block_projector());
}

/// Looks a node up by preorder id.
const ProtocolNode* find_node(const ProtocolNode& node, int id) {
  if (node.id == id) {
    return &node;
  }
  if (node.is_leaf()) {
    return nullptr;
  }
  if (const ProtocolNode* found = find_node(*node.hit, id)) {
    return found;
  }
  return find_node(*node.miss, id);
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("ShotRng: streams are deterministic and shot-independent") {
  ShotRng a(12345, 7);
  ShotRng b(12345, 7);
  for (int i = 0; i < 64; ++i) {
    CHECK(a.next() == b.next());
  }

  // Different shot indices give different streams.
  ShotRng c(12345, 8);
  int differing = 0;
  ShotRng a2(12345, 7);
  for (int i = 0; i < 64; ++i) {
    differing += a2.next() != c.next() ? 1 : 0;
  }
  CHECK(differing >= 60);
}

TEST_CASE("ShotRng: uniforms live in [0, 1) and look uniform") {
  ShotRng rng(999, 0);
  double total = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    total += u;
  }
  // Mean of kDraws uniforms: 0.5 +- 5 sigma with sigma = 1/sqrt(12 k).
  CHECK(std::abs(total / kDraws - 0.5) <= 5.0 / std::sqrt(12.0 * kDraws));
}

TEST_CASE("exact_distribution: qutrit example on basis states") {
  const ProtocolTree tree = qutrit_tree();

  const OutcomeDistribution on0 =
      exact_distribution(tree, basis_state(3, 0));
  REQUIRE(on0.probabilities.size() == 3);
  CHECK(on0.probabilities[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(on0.probabilities[1] == doctest::Approx(1.0 / 14.0).epsilon(1e-12));
  CHECK(on0.probabilities[2] ==
        doctest::Approx(25.0 / 42.0).epsilon(1e-12));
  CHECK(std::abs(on0.residual) <= 1e-12);

  // |2> lives on the complement branch and always reports the completion
  // element.
  const OutcomeDistribution on2 =
      exact_distribution(tree, basis_state(3, 2));
  CHECK(on2.probabilities[0] == 0.0);
  CHECK(on2.probabilities[1] == 0.0);
  CHECK(on2.probabilities[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("exact_distribution: qutrit example on the maximally mixed state") {
  const OutcomeDistribution dist = exact_distribution(
      qutrit_tree(), validate_state(Matrix(Matrix::Identity(3, 3) / 3.0)));
  CHECK(dist.probabilities[0] == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(dist.probabilities[1] == doctest::Approx(5.0 / 42.0).epsilon(1e-12));
  CHECK(dist.probabilities[2] ==
        doctest::Approx(83.0 / 126.0).epsilon(1e-12));
}

TEST_CASE("exact_distribution: agrees with the Born rule on random states") {
  Random rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index top = rng.integer(1, 3);
    const Eigen::Index bottom = rng.integer(1, 3);
    const auto [povm, block] = rng.direct_sum_povm(top, bottom, 4);
    const ProtocolTree tree = compile_tree(povm, block);
    for (int s = 0; s < 10; ++s) {
      const QuantumState state =
          s % 2 == 0 ? validate_state(rng.unit_vector(povm.dim))
                     : validate_state(Matrix(rng.density(povm.dim)));
      const auto born = born_distribution(povm, state);
      const OutcomeDistribution dist = exact_distribution(tree, state);
      REQUIRE(dist.probabilities.size() == born.size());
      for (std::size_t k = 0; k < born.size(); ++k) {
        CHECK(std::abs(dist.probabilities[k] - born[k]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("exact_distribution: embedded tree reproduces the trine POVM") {
  const Povm trine = trine_povm();
  const auto [embedded, witness] = embed_povm(trine);
  CompileOptions options;
  options.skip_stage1 = true;
  const ProtocolTree tree = compile_tree(embedded, witness, options);

  Random rng(52);
  for (int s = 0; s < 20; ++s) {
    const QuantumState qubit =
        s % 2 == 0 ? validate_state(rng.unit_vector(2))
                   : validate_state(Matrix(rng.density(2)));
    const auto born = born_distribution(trine, qubit);
    const OutcomeDistribution dist =
        exact_distribution(tree, embed_state(qubit));
    REQUIRE(dist.probabilities.size() == 4);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(dist.probabilities[k] - born[k]) <= 1e-9);
    }
    // The appended outcome has no leaves, so its probability is exactly 0.
    CHECK(dist.probabilities[3] == 0.0);
    CHECK(std::abs(dist.residual) <= 1e-12);
  }
}

TEST_CASE("exact_distribution: rejects weight on the skipped branch") {
  const auto [embedded, witness] = embed_povm(trine_povm());
  CompileOptions options;
  options.skip_stage1 = true;
  const ProtocolTree tree = compile_tree(embedded, witness, options);
  // |2> in the embedded space lies exactly on the skipped axis.
  CHECK_THROWS_WITH_AS(exact_distribution(tree, basis_state(3, 2)),
                       doctest::Contains("precondition_violated"), Error);
}

TEST_CASE("run_shot: deterministic outcomes need no randomness") {
  const ProtocolTree tree = qutrit_tree();
  for (std::uint64_t shot = 0; shot < 8; ++shot) {
    ShotRng rng(31337, shot);
    const ShotRecord record = run_shot(tree, basis_state(3, 2), rng);
    CHECK(record.outcome == 2);
    CHECK(record.label == "2");
    // Stage 1 must have taken the miss branch straight to the leaf.
    REQUIRE(record.path.size() == 1);
    CHECK(record.path[0].node_id == 0);
    CHECK_FALSE(record.path[0].hit);
  }
}

TEST_CASE("run_shot: identical seeds give identical records") {
  const ProtocolTree tree = qutrit_tree();
  const QuantumState state = basis_state(3, 0);
  for (std::uint64_t shot = 0; shot < 16; ++shot) {
    ShotRng rng1(77, shot);
    ShotRng rng2(77, shot);
    const ShotRecord a = run_shot(tree, state, rng1);
    const ShotRecord b = run_shot(tree, state, rng2);
    CHECK(a.outcome == b.outcome);
    REQUIRE(a.path.size() == b.path.size());
    for (std::size_t i = 0; i < a.path.size(); ++i) {
      CHECK(a.path[i].node_id == b.path[i].node_id);
      CHECK(a.path[i].hit == b.path[i].hit);
    }
  }
}

TEST_CASE("run_shot: path probabilities factorize the leaf probability") {
  const ProtocolTree tree = qutrit_tree();
  const Vector psi = [] {
    Vector v(3);
    v << 0.6, Complex(0.0, 0.48), 0.64;
    return v;
  }();
  const QuantumState state = validate_state(psi);
  const Matrix rho = state.density_matrix();

  for (std::uint64_t shot = 0; shot < 32; ++shot) {
    ShotRng rng(4242, shot);
    const ShotRecord record = run_shot(tree, state, rng);

    // Recompute the product of conditional branch probabilities along the
    // recorded path directly from the node operators.
    double product = 1.0;
    Matrix current = rho;
    for (const PathStep& step : record.path) {
      const ProtocolNode* node = find_node(*tree.root, step.node_id);
      REQUIRE(node != nullptr);
      const Matrix& p = node->projector;
      const Matrix collapse =
          step.hit ? p : Matrix(Matrix::Identity(3, 3) - p);
      const double prob = (collapse * current * collapse.adjoint())
                              .trace()
                              .real();
      product *= prob;
      if (prob > 0.0) {
        current = (collapse * current * collapse.adjoint()) / prob;
      }
    }

    // The leaf this shot landed on has probability tr(M rho M^dag).
    const ProtocolNode* leaf = [&] {
      const ProtocolNode* node = tree.root.get();
      for (const PathStep& step : record.path) {
        REQUIRE(node->id == step.node_id);
        node = step.hit ? node->hit.get() : node->miss.get();
      }
      return node;
    }();
    REQUIRE(leaf->is_leaf());
    CHECK(leaf->outcome == record.outcome);
    const double leaf_prob =
        (leaf->accumulated * rho * leaf->accumulated.adjoint())
            .trace()
            .real();
    CHECK(std::abs(product - leaf_prob) <= 1e-10);
  }
}

TEST_CASE("run_shot: final state is the normalized collapse") {
  const ProtocolTree tree = qutrit_tree();
  const QuantumState state = basis_state(3, 0);
  ShotRng rng(5150, 3);
  const ShotRecord record = run_shot(tree, state, rng);
  REQUIRE(record.final_state.is_pure());
  CHECK(record.final_state.pure->norm() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run_shot: embedding mode rejects weight on the skipped branch") {
  const auto [embedded, witness] = embed_povm(trine_povm());
  CompileOptions options;
  options.skip_stage1 = true;
  const ProtocolTree tree = compile_tree(embedded, witness, options);
  ShotRng rng(1, 0);
  CHECK_THROWS_WITH_AS(run_shot(tree, basis_state(3, 2), rng),
                       doctest::Contains("precondition_violated"), Error);
}

TEST_CASE("sample_histogram: counts sum to shots and reproduce exactly") {
  const ProtocolTree tree = qutrit_tree();
  const QuantumState state = basis_state(3, 0);
  constexpr std::uint64_t kShots = 20000;
  const auto counts = sample_histogram(tree, state, kShots, 2026);
  REQUIRE(counts.size() == 3);
  CHECK(std::accumulate(counts.begin(), counts.end(),
                        std::uint64_t{0}) == kShots);

  const auto again = sample_histogram(tree, state, kShots, 2026);
  CHECK(counts == again);

  const auto other_seed = sample_histogram(tree, state, kShots, 2027);
  CHECK(counts != other_seed);
}

TEST_CASE("sample_histogram: zero shots give zero counts") {
  const auto counts =
      sample_histogram(qutrit_tree(), basis_state(3, 0), 0, 1);
  REQUIRE(counts.size() == 3);
  for (std::uint64_t c : counts) {
    CHECK(c == 0);
  }
}

TEST_CASE("sample_histogram: frequencies track the exact distribution") {
  const ProtocolTree tree = qutrit_tree();
  const QuantumState state = basis_state(3, 0);
  const OutcomeDistribution dist = exact_distribution(tree, state);
  constexpr std::uint64_t kShots = 200000;
  const auto counts = sample_histogram(tree, state, kShots, 77);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double p = dist.probabilities[k];
    const double sigma = std::sqrt(p * (1.0 - p) / kShots);
    const double freq =
        static_cast<double>(counts[k]) / static_cast<double>(kShots);
    CHECK(std::abs(freq - p) <= 5.0 * sigma);
  }
}

TEST_CASE("sample_histogram: embedded tree never reports the extra outcome") {
  const auto [embedded, witness] = embed_povm(trine_povm());
  CompileOptions options;
  options.skip_stage1 = true;
  const ProtocolTree tree = compile_tree(embedded, witness, options);
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const QuantumState state = embed_state(validate_state(plus));
  const auto counts = sample_histogram(tree, state, 5000, 11);
  REQUIRE(counts.size() == 4);
  CHECK(counts[3] == 0);
  CHECK(std::accumulate(counts.begin(), counts.end(),
                        std::uint64_t{0}) == 5000);
}

TEST_CASE("exact_distribution: rejects a dimension mismatch") {
  CHECK_THROWS_WITH_AS(exact_distribution(qutrit_tree(), basis_state(2, 0)),
                       doctest::Contains("dimension_mismatch"), Error);
}

}  // TEST_SUITE
