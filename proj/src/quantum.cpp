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

#include "povmseq/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace povmseq {

namespace {

// Slack below which a slightly negative probability is treated as zero.
constexpr double kProbabilitySlack = 1e-12;

double clamp_probability(double p, const char* what) {
  if (p < -kProbabilitySlack || !std::isfinite(p)) {
    throw Error(Errc::NumericalFailure,
                std::string(what) + " produced probability " +
                    std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

Povm validate_povm(const std::vector<Matrix>& elements,
                   std::vector<std::string> labels, const Tolerances& tol) {
  if (elements.empty()) {
    throw Error(Errc::DimensionMismatch, "a POVM needs at least one element");
  }
  const Eigen::Index dim = elements.front().rows();
  if (dim <= 0) {
    throw Error(Errc::DimensionMismatch, "POVM elements must be non-empty");
  }
  if (!labels.empty() && labels.size() != elements.size()) {
    throw Error(Errc::DimensionMismatch,
                "label count does not match element count");
  }
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const Matrix& e = elements[k];
    require_square(e, dim, "POVM element");
    if (!e.allFinite()) {
      throw Error(Errc::ParseError,
                  "POVM element " + std::to_string(k) + " has non-finite "
                  "entries");
    }
    if (!is_hermitian(e, tol.hermitian())) {
      throw Error(Errc::NotHermitian,
                  "POVM element " + std::to_string(k) + " is not Hermitian");
    }
    if (!is_psd(e, tol.psd(), tol)) {
      throw Error(Errc::NotPsd, "POVM element " + std::to_string(k) +
                                    " is not positive semidefinite");
    }
    sum += e;
  }
  const double residual =
      (sum - Matrix::Identity(dim, dim)).norm();
  if (residual > 1e-9 * static_cast<double>(dim)) {
    throw Error(Errc::SumNotIdentity,
                "POVM elements sum to identity with residual " +
                    std::to_string(residual));
  }
  Povm povm;
  povm.dim = dim;
  povm.elements = elements;
  povm.labels = std::move(labels);
  return povm;
}

QuantumState validate_state(const Vector& psi, const Tolerances& tol) {
  (void)tol;
  if (psi.size() == 0 || !psi.allFinite()) {
    throw Error(Errc::NotAState, "pure state vector is empty or non-finite");
  }
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw Error(Errc::NotAState, "pure state vector has norm " +
                                     std::to_string(norm) +
                                     ", too far from 1 to renormalize");
  }
  QuantumState state;
  state.dim = psi.size();
  state.pure = psi / norm;
  return state;
}

QuantumState validate_state(const Matrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0 || !rho.allFinite()) {
    throw Error(Errc::NotAState, "density matrix is not square and finite");
  }
  if (!is_hermitian(rho, tol.hermitian())) {
    throw Error(Errc::NotAState, "density matrix is not Hermitian");
  }
  if (!is_psd(rho, tol.psd(), tol)) {
    throw Error(Errc::NotAState,
                "density matrix is not positive semidefinite");
  }
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > tol.hermitian()) {
    throw Error(Errc::NotAState,
                "density matrix has trace " + std::to_string(trace));
  }
  QuantumState state;
  state.dim = rho.rows();
  state.density = rho;
  return state;
}

Projector validate_projector(const Matrix& p, const Tolerances& tol) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw Error(Errc::DimensionMismatch, "projector must be square");
  }
  if (!is_hermitian(p, tol.hermitian())) {
    throw Error(Errc::NotHermitian, "projector is not Hermitian");
  }
  const double idem = (p * p - p).norm();
  if (idem > 10 * tol.hermitian()) {
    throw Error(Errc::PreconditionViolated,
                "matrix is not idempotent (||P^2 - P|| = " +
                    std::to_string(idem) + ")");
  }
  Projector out;
  out.matrix = hermitized(p);
  out.rank = numeric_rank(out.matrix, tol.rank());
  return out;
}

std::vector<double> born_distribution(const Povm& povm,
                                      const QuantumState& state) {
  if (state.dim != povm.dim) {
    throw Error(Errc::DimensionMismatch,
                "state dimension " + std::to_string(state.dim) +
                    " does not match POVM dimension " +
                    std::to_string(povm.dim));
  }
  std::vector<double> probabilities;
  probabilities.reserve(povm.elements.size());
  for (const Matrix& e : povm.elements) {
    double p;
    if (state.is_pure()) {
      p = state.pure->dot(e * (*state.pure)).real();
    } else {
      p = (e * (*state.density)).trace().real();
    }
    probabilities.push_back(clamp_probability(p, "Born rule"));
  }
  return probabilities;
}

}  // namespace povmseq
