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

#include <algorithm>
#include <cmath>

#include "povmseq/realizability.hpp"
#include "test_support.hpp"

using namespace povmseq;
using namespace povmseq::testing;

namespace {

/// Independent oracle for the commutant dimension.  Works over the complex
/// matrix space instead of the Hermitian coordinate system used by the
/// library: vectorizes [X, E_k] = 0 as (E_k^T (x) I - I (x) E_k) vec(X) = 0,
/// stacks all constraints, and counts the complex nullspace dimension.
/// Because every E_k is Hermitian the complex commutant is closed under the
/// adjoint, so its complex dimension equals the real dimension of its
/// Hermitian part -- the quantity commutant_basis() reports.
int commutant_dimension_oracle(const Povm& povm) {
  const Eigen::Index d = povm.dim;
  const Eigen::Index d2 = d * d;
  Matrix stacked(d2 * static_cast<Eigen::Index>(povm.outcome_count()), d2);
  for (std::size_t k = 0; k < povm.elements.size(); ++k) {
    const Matrix& e = povm.elements[k];
    Matrix block = Matrix::Zero(d2, d2);
    // Kronecker products written out directly so this path shares no code
    // with the implementation under test.
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        // E^T (x) I contributes E^T(i, j) on the (i, j) identity block.
        block.block(i * d, j * d, d, d) +=
            e(j, i) * Matrix::Identity(d, d);
        // I (x) E contributes E on the diagonal blocks.
        if (i == j) {
          block.block(i * d, j * d, d, d) -= e;
        }
      }
    }
    stacked.middleRows(static_cast<Eigen::Index>(k) * d2, d2) = block;
  }
  const Eigen::JacobiSVD<Matrix> svd(stacked);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-9 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) {
    ++rank;
  }
  return static_cast<int>(d2 - rank);
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace

TEST_SUITE("realizability") {

TEST_CASE("commutant_basis: single identity element has the full commutant") {
  const Povm povm = validate_povm({Matrix::Identity(3, 3)});
  const CommutantBasis cb = commutant_basis(povm);
  CHECK(cb.dimension() == 9);
  CHECK(commutant_dimension_oracle(povm) == 9);
}

TEST_CASE("commutant_basis: qutrit example has dimension two") {
  const Povm povm = qutrit_example_povm();
  const CommutantBasis cb = commutant_basis(povm);
  REQUIRE(cb.dimension() == 2);
  CHECK(commutant_dimension_oracle(povm) == 2);

  // The commutant is spanned by diag(1, 1, 0) and diag(0, 0, 1); check each
  // returned basis matrix lies in that span.
  Matrix block = Matrix::Zero(3, 3);
  block(0, 0) = 1.0;
  block(1, 1) = 1.0;
  Matrix tail = Matrix::Zero(3, 3);
  tail(2, 2) = 1.0;
  const Matrix u1 = block / std::sqrt(2.0);
  const Matrix u2 = tail;
  for (const Matrix& b : cb.basis) {
    const Matrix projected =
        frobenius_inner(u1, b) * u1 + frobenius_inner(u2, b) * u2;
    CHECK((b - projected).norm() <= 1e-9);
  }
}

TEST_CASE("commutant_basis: trine and symmetric qubit POVMs are trivial") {
  for (const Povm& povm : {trine_povm(), sic_povm()}) {
    const CommutantBasis cb = commutant_basis(povm);
    REQUIRE(cb.dimension() == 1);
    CHECK(commutant_dimension_oracle(povm) == 1);
    // The only commuting Hermitian directions are multiples of the identity.
    const Matrix& b = cb.basis[0];
    const Matrix scaled_identity =
        (b.trace() / static_cast<double>(povm.dim)) *
        Matrix::Identity(povm.dim, povm.dim);
    CHECK((b - scaled_identity).norm() <= 1e-9);
  }
}

TEST_CASE("commutant_basis: matches the vectorization oracle on random POVMs") {
  Random rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = rng.integer(2, 5);
    const Povm povm = rng.povm(dim, rng.integer(2, 4));
    const CommutantBasis cb = commutant_basis(povm);
    CHECK(cb.dimension() == commutant_dimension_oracle(povm));

    // Basis contract: Hermitian, orthonormal, and actually commuting.
    for (std::size_t i = 0; i < cb.basis.size(); ++i) {
      CHECK(is_hermitian(cb.basis[i], 1e-10));
      for (std::size_t j = 0; j <= i; ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(frobenius_inner(cb.basis[i], cb.basis[j]) -
                       expected) <= 1e-9);
      }
      for (const Matrix& e : povm.elements) {
        CHECK(commutator_norm(cb.basis[i], e) <=
              1e-9 * std::max(1.0, e.norm()));
      }
    }
  }
}

TEST_CASE("commutant_basis: block POVMs keep the block projector in span") {
  Random rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index top = rng.integer(1, 3);
    const Eigen::Index bottom = rng.integer(1, 3);
    const auto [povm, block] = rng.direct_sum_povm(top, bottom, 3);
    const CommutantBasis cb = commutant_basis(povm);
    CHECK(cb.dimension() >= 2);
    // The block projector must lie in the commutant span: projecting it onto
    // the basis reproduces it.
    Matrix projected = Matrix::Zero(povm.dim, povm.dim);
    for (const Matrix& b : cb.basis) {
      projected += frobenius_inner(b, block.matrix) * b;
    }
    CHECK((projected - block.matrix).norm() <= 1e-8);
  }
}

TEST_CASE("is_realizing_projector: qutrit block projector qualifies") {
  const Povm povm = qutrit_example_povm();
  CHECK(is_realizing_projector(povm, qutrit_block_projector()));
}

TEST_CASE("is_realizing_projector: rank bounds exclude 0 and full rank") {
  const Povm povm = qutrit_example_povm();
  CHECK_FALSE(is_realizing_projector(
      povm, validate_projector(Matrix::Identity(3, 3))));
  CHECK_FALSE(
      is_realizing_projector(povm, validate_projector(Matrix::Zero(3, 3))));
}

TEST_CASE("is_realizing_projector: non-commuting projector is rejected") {
  const Povm povm = qutrit_example_povm();
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  CHECK_FALSE(is_realizing_projector(povm, validate_projector(p)));
}

TEST_CASE("find_commuting_projector: qutrit example is realizable") {
  const Povm povm = qutrit_example_povm();
  const RealizabilityVerdict verdict = find_commuting_projector(povm);
  REQUIRE(verdict.realizable);
  REQUIRE(verdict.projector.has_value());
  CHECK(verdict.commutant_dimension == 2);
  CHECK(is_realizing_projector(povm, *verdict.projector));
  // The commutant admits exactly two nontrivial projectors: the upper block
  // and its complement.  Either is a valid witness.
  Matrix block = Matrix::Zero(3, 3);
  block(0, 0) = 1.0;
  block(1, 1) = 1.0;
  const Matrix tail = Matrix::Identity(3, 3) - block;
  const double dist = std::min((verdict.projector->matrix - block).norm(),
                               (verdict.projector->matrix - tail).norm());
  CHECK(dist <= 1e-9);
}

TEST_CASE("find_commuting_projector: trine and SIC qubit POVMs are not") {
  for (const Povm& povm : {trine_povm(), sic_povm()}) {
    const RealizabilityVerdict verdict = find_commuting_projector(povm);
    CHECK_FALSE(verdict.realizable);
    CHECK_FALSE(verdict.projector.has_value());
    CHECK(verdict.commutant_dimension == 1);
  }
}

TEST_CASE("find_commuting_projector: projective measurements are realizable") {
  Matrix p0 = Matrix::Zero(3, 3);
  p0(0, 0) = 1.0;
  const Matrix p1 = Matrix::Identity(3, 3) - p0;
  const RealizabilityVerdict verdict =
      find_commuting_projector(validate_povm({p0, p1}));
  REQUIRE(verdict.realizable);
  CHECK(is_realizing_projector(validate_povm({p0, p1}),
                               *verdict.projector));
}

TEST_CASE("find_commuting_projector: block POVMs are always realizable") {
  Random rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index top = rng.integer(1, 4);
    const Eigen::Index bottom = rng.integer(1, 4);
    const int outcomes = rng.integer(2, 5);
    const auto [povm, block] = rng.direct_sum_povm(top, bottom, outcomes);
    CAPTURE(trial);
    CAPTURE(povm.dim);
    const RealizabilityVerdict verdict = find_commuting_projector(povm);
    REQUIRE(verdict.realizable);
    CHECK(is_realizing_projector(povm, *verdict.projector));
  }
}

TEST_CASE("find_commuting_projector: witness survives a tolerance rescale") {
  const Povm povm = qutrit_example_povm();
  const Tolerances loose = Tolerances{}.scaled(100.0);
  const RealizabilityVerdict verdict = find_commuting_projector(povm, loose);
  CHECK(verdict.realizable);
}

TEST_CASE("support_intersection: overlapping diagonal supports") {
  Matrix rho1 = Matrix::Zero(3, 3);
  rho1(0, 0) = 0.5;
  rho1(1, 1) = 0.5;
  Matrix rho2 = Matrix::Zero(3, 3);
  rho2(1, 1) = 0.5;
  rho2(2, 2) = 0.5;
  const auto basis =
      support_intersection(validate_state(rho1), validate_state(rho2));
  REQUIRE(basis.size() == 1);
  Vector e1 = Vector::Zero(3);
  e1(1) = 1.0;
  CHECK((basis[0] - e1).norm() <= 1e-10);
}

TEST_CASE("support_intersection: orthogonal supports give nothing") {
  const auto basis = support_intersection(basis_state(3, 0),
                                          basis_state(3, 1));
  CHECK(basis.empty());
}

TEST_CASE("support_intersection: identical full-rank states span everything") {
  const Matrix rho = Matrix::Identity(3, 3) / 3.0;
  const auto basis =
      support_intersection(validate_state(rho), validate_state(rho));
  CHECK(basis.size() == 3);
}

TEST_CASE("support_intersection: discrimination fixture isolates |1>") {
  const UdFixture fixture = ud_fixture();
  const auto basis = support_intersection(fixture.rho1, fixture.rho2);
  REQUIRE(basis.size() == 1);
  Vector e1 = Vector::Zero(3);
  e1(1) = 1.0;
  CHECK((basis[0] - e1).norm() <= 1e-10);

  // The witness projector built on the intersection realizes the POVM.
  const Matrix p = basis[0] * basis[0].adjoint();
  CHECK(is_realizing_projector(fixture.povm, validate_projector(p)));
}

TEST_CASE("support_intersection: random rank-deficient states") {
  Random rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    // Build states with known supports from a shared unitary.
    const Eigen::Index dim = 4;
    const Matrix u = hermitian_eig(rng.hermitian(dim)).eigenvectors;
    Matrix rho1 = Matrix::Zero(dim, dim);
    Matrix rho2 = Matrix::Zero(dim, dim);
    // supp(rho1) = span{u0, u1, u2}, supp(rho2) = span{u1, u2, u3}.
    for (int i = 0; i < 3; ++i) {
      rho1 += (u.col(i) * u.col(i).adjoint()) / 3.0;
      rho2 += (u.col(i + 1) * u.col(i + 1).adjoint()) / 3.0;
    }
    const auto basis = support_intersection(validate_state(rho1),
                                            validate_state(rho2));
    REQUIRE(basis.size() == 2);
    // Each basis vector lies in both supports.
    for (const Vector& v : basis) {
      CHECK((rho1 * v).norm() >= 1e-3);
      CHECK(std::abs(v.dot(u.col(0)))  <= 1e-9);
      CHECK(std::abs(v.dot(u.col(3))) <= 1e-9);
    }
  }
}

}  // TEST_SUITE
