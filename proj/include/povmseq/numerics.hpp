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
 * @file numerics.hpp
 * @brief Dense complex-matrix primitives with an explicit tolerance policy.
 *
 * Everything downstream (domain validation, realizability analysis, tree
 * compilation, verification) is built on the decompositions declared here.
 * Decompositions are made deterministic by a fixed phase convention so that
 * compiling the same measurement twice yields bit-identical trees.
 */

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "povmseq/errors.hpp"
#include "povmseq/tolerances.hpp"

namespace povmseq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/** Frobenius distance of @p a from its own adjoint. */
template <typename Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).norm();
}

/** True iff @p a equals its adjoint within @p tol, scaled by max(1, ||a||). */
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol) {
  return hermiticity_residual(a) <= tol * std::max(1.0, a.norm());
}

/** Nearest Hermitian matrix (a + a^dag) / 2. */
template <typename Derived>
Matrix hermitized(const Eigen::MatrixBase<Derived>& a) {
  return 0.5 * (a + a.adjoint());
}

/** Commutator [a, b] = ab - ba. */
template <typename DerivedA, typename DerivedB>
Matrix commutator(const Eigen::MatrixBase<DerivedA>& a,
                  const Eigen::MatrixBase<DerivedB>& b) {
  return a * b - b * a;
}

/** Frobenius norm of the commutator [a, b]. */
template <typename DerivedA, typename DerivedB>
double commutator_norm(const Eigen::MatrixBase<DerivedA>& a,
                       const Eigen::MatrixBase<DerivedB>& b) {
  return (a * b - b * a).norm();
}

/**
 * Eigendecomposition of a Hermitian matrix.
 *
 * Eigenvalues are real and sorted descending; eigenvector columns are
 * orthonormal and phase-fixed (largest-magnitude component real positive,
 * ties broken by lowest index).
 */
struct EigDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

/**
 * Full singular value decomposition M = U diag(s) V^dag.
 *
 * Singular values are nonnegative and sorted descending; @c left_vectors
 * (U) and @c right_vectors (V) are square with orthonormal columns.  Each
 * (u_i, v_i) pair carries a common phase factor chosen so u_i obeys the
 * deterministic phase convention.
 */
struct SvdDecomposition {
  RealVector singular_values;
  Matrix left_vectors;
  Matrix right_vectors;
};

/**
 * Applies the deterministic phase convention to @p v in place: the
 * largest-magnitude component (lowest index on ties) is made real positive.
 * Returns the phase factor the vector was multiplied by.
 */
Complex fix_phase(Eigen::Ref<Vector> v);

/**
 * Eigendecomposition of the Hermitian matrix @p a.
 *
 * @throws Error NotHermitian if @p a is not Hermitian within tol.hermitian(),
 *         NumericalFailure if the backend iteration does not converge.
 */
EigDecomposition hermitian_eig(const Matrix& a, const Tolerances& tol = {});

/**
 * Full singular value decomposition of @p m.
 *
 * @throws Error NumericalFailure if the backend does not converge.
 */
SvdDecomposition svd(const Matrix& m);

/** Count of singular values strictly above tol_rel * max(1, sv[0]). */
int numeric_rank(const RealVector& singular_values, double tol_rel);

/** Numerical rank of @p m via its singular values. */
int numeric_rank(const Matrix& m, double tol_rel);

/**
 * Orthonormal basis of the kernel of M^dag, i.e. unit vectors v with
 * M^dag v = 0 within tolerance.  Returns rows(M) - numeric_rank(M) vectors;
 * the list is empty when M has full row rank.
 */
std::vector<Vector> kernel_basis(const Matrix& m, double tol_rel);

/**
 * True iff the Hermitian matrix @p a has all eigenvalues above
 * -tol * max(1, ||a||).
 *
 * @throws Error NotHermitian if @p a is not Hermitian.
 */
bool is_psd(const Matrix& a, double tol, const Tolerances& tolerances = {});

/** Smallest eigenvalue of the Hermitian matrix @p a. */
double min_eigenvalue(const Matrix& a, const Tolerances& tol = {});

/** Throws Error DimensionMismatch unless @p m is square of size @p dim. */
void require_square(const Matrix& m, Eigen::Index dim, const char* what);

}  // namespace povmseq
