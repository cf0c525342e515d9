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

#include "povmseq/realizability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace povmseq {

namespace {

/**
 * Orthonormal (Frobenius) basis of Hermitian d x d matrices: the d
 * diagonal units, then for each pair i < j the symmetric and the
 * antisymmetric-imaginary combinations.
 */
std::vector<Matrix> hermitian_unit_basis(Eigen::Index dim) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(dim * dim));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Matrix b = Matrix::Zero(dim, dim);
    b(i, i) = 1.0;
    basis.push_back(std::move(b));
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      Matrix sym = Matrix::Zero(dim, dim);
      sym(i, j) = inv_sqrt2;
      sym(j, i) = inv_sqrt2;
      basis.push_back(std::move(sym));
      Matrix asym = Matrix::Zero(dim, dim);
      asym(i, j) = Complex(0.0, inv_sqrt2);
      asym(j, i) = Complex(0.0, -inv_sqrt2);
      basis.push_back(std::move(asym));
    }
  }
  return basis;
}

/** Makes the largest-magnitude entry of a real vector positive. */
void fix_sign(Eigen::Ref<RealVector> v) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double mag = std::abs(v[i]);
    if (mag > best + 1e-14) {
      best = mag;
      pivot = i;
    }
  }
  if (v[pivot] < 0.0) v = -v;
}

}  // namespace

CommutantBasis commutant_basis(const Povm& povm, const Tolerances& tol) {
  const Eigen::Index d = povm.dim;
  const Eigen::Index n = d * d;  // real dimension of the Hermitian space
  const std::vector<Matrix> units = hermitian_unit_basis(d);

  // One row block per POVM element: real and imaginary parts of every
  // entry of [B_j, E_k], as a function of the coefficient on B_j.
  const Eigen::Index rows_per_element = 2 * n;
  RealMatrix system(rows_per_element * povm.outcome_count(), n);
  for (int k = 0; k < povm.outcome_count(); ++k) {
    const Matrix& e = povm.elements[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const Matrix comm = commutator(units[static_cast<std::size_t>(j)], e);
      Eigen::Index row = k * rows_per_element;
      for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
          system(row++, j) = comm(r, c).real();
          system(row++, j) = comm(r, c).imag();
        }
      }
    }
  }

  Eigen::JacobiSVD<RealMatrix> solver(system, Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NumericalFailure,
                "commutant nullspace extraction did not converge");
  }
  const RealVector& sv = solver.singularValues();
  const double cutoff =
      tol.commutant_nullspace() * std::max(1.0, sv.size() ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }

  CommutantBasis out;
  out.dim = d;
  for (Eigen::Index c = rank; c < n; ++c) {
    RealVector coeff = solver.matrixV().col(c);
    fix_sign(coeff);
    Matrix x = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < n; ++j) {
      x += coeff[j] * units[static_cast<std::size_t>(j)];
    }
    out.basis.push_back(hermitized(x));
  }
  if (out.basis.empty()) {
    throw Error(Errc::NumericalFailure,
                "commutant lost the identity direction; threshold too tight");
  }
  return out;
}

bool is_realizing_projector(const Povm& povm, const Projector& p,
                            const Tolerances& tol) {
  require_square(p.matrix, povm.dim, "projector");
  if (p.rank <= 0 || p.rank >= povm.dim) return false;
  for (const Matrix& e : povm.elements) {
    if (commutator_norm(e, p.matrix) >
        tol.commutation() * std::max(1.0, e.norm())) {
      return false;
    }
  }
  return true;
}

RealizabilityVerdict find_commuting_projector(const Povm& povm,
                                              const Tolerances& tol) {
  const Eigen::Index d = povm.dim;
  CommutantBasis commutant = commutant_basis(povm, tol);

  RealizabilityVerdict verdict;
  verdict.commutant_dimension = commutant.dimension();
  if (commutant.dimension() < 2 || d < 2) {
    return verdict;
  }

  // The basis element farthest from span{I} has the best-separated
  // spectrum; distance^2 = ||X||^2 - |tr X|^2 / d for normalized X.
  std::size_t best_index = 0;
  double best_distance = -1.0;
  for (std::size_t j = 0; j < commutant.basis.size(); ++j) {
    const Matrix& x = commutant.basis[j];
    const double trace = x.trace().real();
    const double distance2 = x.squaredNorm() - trace * trace / static_cast<double>(d);
    if (distance2 > best_distance + 1e-14) {
      best_distance = distance2;
      best_index = j;
    }
  }

  const EigDecomposition eig = hermitian_eig(commutant.basis[best_index], tol);
  const double scale = std::max(
      {1.0, std::abs(eig.eigenvalues[0]), std::abs(eig.eigenvalues[d - 1])});

  // Members of the eigenvalue cluster containing the largest eigenvalue:
  // walk the descending spectrum until the first significant gap.
  Eigen::Index cluster_size = 1;
  while (cluster_size < d &&
         eig.eigenvalues[cluster_size - 1] - eig.eigenvalues[cluster_size] <=
             tol.cluster_gap() * scale) {
    ++cluster_size;
  }

  Matrix p = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < cluster_size; ++i) {
    p += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
  }
  if (cluster_size == d) {
    p = Matrix::Identity(d, d) - p;  // degenerate split; use the complement
  }

  Projector projector = validate_projector(p, tol);
  if (!is_realizing_projector(povm, projector, tol)) {
    throw Error(Errc::NumericalFailure,
                "candidate projector from the commutant failed the "
                "commutation re-check");
  }
  verdict.realizable = true;
  verdict.projector = std::move(projector);
  return verdict;
}

std::vector<Vector> support_intersection(const QuantumState& rho1,
                                         const QuantumState& rho2,
                                         const Tolerances& tol) {
  if (rho1.dim != rho2.dim) {
    throw Error(Errc::DimensionMismatch,
                "states live in different dimensions");
  }
  const Eigen::Index d = rho1.dim;
  auto kernel_projector = [&](const QuantumState& state) {
    const EigDecomposition eig = hermitian_eig(state.density_matrix(), tol);
    const double cutoff = tol.rank() * eig.eigenvalues.maxCoeff();
    Matrix q = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (eig.eigenvalues[i] <= cutoff) {
        q += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
      }
    }
    return q;
  };
  const Matrix blocked = kernel_projector(rho1) + kernel_projector(rho2);
  return kernel_basis(blocked, tol.rank());
}

}  // namespace povmseq
