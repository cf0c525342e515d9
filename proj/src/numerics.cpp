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

#include "povmseq/numerics.hpp"

#include <algorithm>
#include <string>

namespace povmseq {

Complex fix_phase(Eigen::Ref<Vector> v) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double mag = std::abs(v[i]);
    if (mag > best + 1e-14) {
      best = mag;
      pivot = i;
    }
  }
  if (best <= 0.0) return Complex(1.0, 0.0);
  Complex factor = std::conj(v[pivot]) / best;
  v *= factor;
  // Kill the residual imaginary dust on the pivot entry.
  v[pivot] = Complex(v[pivot].real(), 0.0);
  return factor;
}

EigDecomposition hermitian_eig(const Matrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) {
    throw Error(Errc::DimensionMismatch,
                "eigendecomposition requires a square matrix");
  }
  if (!is_hermitian(a, tol.hermitian())) {
    throw Error(Errc::NotHermitian,
                "matrix is not Hermitian within tolerance (residual " +
                    std::to_string(hermiticity_residual(a)) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitized(a));
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NumericalFailure, "eigendecomposition did not converge");
  }
  const Eigen::Index n = a.rows();
  EigDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = Matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    fix_phase(out.eigenvectors.col(i));
  }
  return out;
}

SvdDecomposition svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> solver(m,
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NumericalFailure,
                "singular value decomposition did not converge");
  }
  SvdDecomposition out;
  out.singular_values = solver.singularValues();
  out.left_vectors = solver.matrixU();
  out.right_vectors = solver.matrixV();
  // A common phase on (u_i, v_i) preserves M = sum_i s_i u_i v_i^dag.
  const Eigen::Index pairs =
      std::min(out.left_vectors.cols(), out.right_vectors.cols());
  for (Eigen::Index i = 0; i < out.left_vectors.cols(); ++i) {
    Complex factor = fix_phase(out.left_vectors.col(i));
    if (i < pairs) out.right_vectors.col(i) *= factor;
  }
  return out;
}

int numeric_rank(const RealVector& singular_values, double tol_rel) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = tol_rel * std::max(1.0, singular_values[0]);
  int rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values[i] > cutoff) ++rank;
  }
  return rank;
}

int numeric_rank(const Matrix& m, double tol_rel) {
  Eigen::JacobiSVD<Matrix> solver(m);
  return numeric_rank(RealVector(solver.singularValues()), tol_rel);
}

std::vector<Vector> kernel_basis(const Matrix& m, double tol_rel) {
  SvdDecomposition dec = svd(m);
  const int rank = numeric_rank(dec.singular_values, tol_rel);
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(m.rows() - rank));
  for (Eigen::Index i = rank; i < m.rows(); ++i) {
    basis.push_back(dec.left_vectors.col(i));
  }
  return basis;
}

bool is_psd(const Matrix& a, double tol, const Tolerances& tolerances) {
  return min_eigenvalue(a, tolerances) >= -tol * std::max(1.0, a.norm());
}

double min_eigenvalue(const Matrix& a, const Tolerances& tol) {
  return hermitian_eig(a, tol).eigenvalues.minCoeff();
}

void require_square(const Matrix& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(Errc::DimensionMismatch,
                std::string(what) + " must be " + std::to_string(dim) + "x" +
                    std::to_string(dim) + ", got " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
}

}  // namespace povmseq
