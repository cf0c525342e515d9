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
 * @file test_support.hpp
 * @brief Shared fixtures and deterministic random generators for the test
 *        suites.  Everything is seeded; no test depends on wall-clock
 *        entropy.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "povmseq/quantum.hpp"
#include "povmseq/realizability.hpp"

namespace povmseq::testing {

/**
 * The worked three-outcome qutrit example: two scaled rank-1 elements in
 * the upper 2x2 block plus the completion to the identity.
 */
inline Povm qutrit_example_povm() {
  Vector psi0(3), psi1(3);
  psi0 << 1, 1, 0;
  psi0 /= std::sqrt(2.0);
  psi1 << 1, 2, 0;
  psi1 /= std::sqrt(5.0);
  const Matrix e0 = (2.0 / 3.0) * psi0 * psi0.adjoint();
  const Matrix e1 = (5.0 / 14.0) * psi1 * psi1.adjoint();
  const Matrix e2 = Matrix::Identity(3, 3) - e0 - e1;
  return validate_povm({e0, e1, e2});
}

/** The block projector onto the first two axes of the qutrit example. */
inline Projector qutrit_block_projector() {
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  p(1, 1) = 1.0;
  return validate_projector(p);
}

/** Symmetric three-outcome qubit POVM from vectors at 0/120/240 degrees. */
inline Povm trine_povm() {
  std::vector<Matrix> elements;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 3.0;
    Vector t(2);
    t << std::cos(angle), std::sin(angle);
    elements.push_back((2.0 / 3.0) * t * t.adjoint());
  }
  return validate_povm(elements);
}

/** Symmetric informationally complete qubit POVM (tetrahedral). */
inline Povm sic_povm() {
  const double s2 = std::sqrt(2.0);
  const double s6 = std::sqrt(6.0);
  const std::vector<std::array<double, 3>> bloch = {
      {0.0, 0.0, 1.0},
      {2.0 * s2 / 3.0, 0.0, -1.0 / 3.0},
      {-s2 / 3.0, s6 / 3.0, -1.0 / 3.0},
      {-s2 / 3.0, -s6 / 3.0, -1.0 / 3.0},
  };
  std::vector<Matrix> elements;
  for (const auto& b : bloch) {
    Matrix e(2, 2);
    e(0, 0) = Complex(1.0 + b[2], 0.0);
    e(0, 1) = Complex(b[0], -b[1]);
    e(1, 0) = Complex(b[0], b[1]);
    e(1, 1) = Complex(1.0 - b[2], 0.0);
    elements.push_back(0.25 * e);
  }
  return validate_povm(elements);
}

/** Unambiguous-discrimination fixture: two mixed states with overlapping
 *  supports and the POVM that never confuses them. */
struct UdFixture {
  QuantumState rho1;
  QuantumState rho2;
  Povm povm;  // outcome 0 inconclusive, 1 detects rho1, 2 detects rho2
};

inline UdFixture ud_fixture() {
  Matrix rho1 = Matrix::Zero(3, 3);
  rho1(0, 0) = 0.5;
  rho1(1, 1) = 0.5;
  Matrix rho2 = Matrix::Zero(3, 3);
  rho2(1, 1) = 0.5;
  rho2(2, 2) = 0.5;
  Matrix e1 = Matrix::Zero(3, 3);
  e1(0, 0) = 0.5;
  Matrix e2 = Matrix::Zero(3, 3);
  e2(2, 2) = 0.5;
  const Matrix e0 = Matrix::Identity(3, 3) - e1 - e2;
  UdFixture fixture;
  fixture.rho1 = validate_state(rho1);
  fixture.rho2 = validate_state(rho2);
  fixture.povm =
      validate_povm({e0, e1, e2}, {"inconclusive", "first", "second"});
  return fixture;
}

/** Deterministic stream of standard-normal complex matrices. */
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = Complex(normal(), normal());
      }
    }
    return m;
  }

  Matrix hermitian(Eigen::Index dim) {
    return hermitized(gaussian_matrix(dim, dim));
  }

  Vector unit_vector(Eigen::Index dim) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(normal(), normal());
    v.normalize();
    return v;
  }

  /** Haar-ish random density matrix of full rank. */
  Matrix density(Eigen::Index dim) {
    const Matrix g = gaussian_matrix(dim, dim);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return hermitized(rho);
  }

  /** Random POVM with @p outcomes elements: Gram matrices of Gaussian
   *  blocks, normalized by the symmetric inverse square root of the sum. */
  Povm povm(Eigen::Index dim, int outcomes) {
    std::vector<Matrix> gram;
    Matrix sum = Matrix::Zero(dim, dim);
    for (int k = 0; k < outcomes; ++k) {
      const Matrix g = gaussian_matrix(dim, dim);
      gram.push_back(g * g.adjoint());
      sum += gram.back();
    }
    const EigDecomposition eig = hermitian_eig(sum);
    Matrix inv_sqrt = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      inv_sqrt += (1.0 / std::sqrt(eig.eigenvalues[i])) *
                  eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
    }
    std::vector<Matrix> elements;
    for (const Matrix& g : gram) {
      elements.push_back(hermitized(inv_sqrt * g * inv_sqrt));
    }
    return validate_povm(elements);
  }

  /**
   * Realizable-by-construction POVM: a direct sum of two independent
   * POVMs on complementary blocks, plus the block projector witness.
   */
  std::pair<Povm, Projector> direct_sum_povm(Eigen::Index dim_top,
                                             Eigen::Index dim_bottom,
                                             int outcomes) {
    const Povm top = povm(dim_top, outcomes);
    const Povm bottom = povm(dim_bottom, outcomes);
    const Eigen::Index dim = dim_top + dim_bottom;
    std::vector<Matrix> elements;
    for (int k = 0; k < outcomes; ++k) {
      Matrix e = Matrix::Zero(dim, dim);
      e.topLeftCorner(dim_top, dim_top) =
          top.elements[static_cast<std::size_t>(k)];
      e.bottomRightCorner(dim_bottom, dim_bottom) =
          bottom.elements[static_cast<std::size_t>(k)];
      elements.push_back(std::move(e));
    }
    Matrix block = Matrix::Zero(dim, dim);
    block.topLeftCorner(dim_top, dim_top) =
        Matrix::Identity(dim_top, dim_top);
    return {validate_povm(elements), validate_projector(block)};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/** Standard basis vector as a validated pure state. */
inline QuantumState basis_state(Eigen::Index dim, Eigen::Index index) {
  Vector v = Vector::Zero(dim);
  v[index] = 1.0;
  return validate_state(v);
}

}  // namespace povmseq::testing
