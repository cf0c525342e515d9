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

#include "povmseq/compiler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <string>

#include "povmseq/realizability.hpp"

namespace povmseq {

namespace {

/** FNV-1a over a little-endian byte view of a 64-bit word. */
void fnv1a_accumulate(std::uint64_t& hash, std::uint64_t word) {
  constexpr std::uint64_t kPrime = 1099511628211ull;
  for (int byte = 0; byte < 8; ++byte) {
    hash ^= (word >> (8 * byte)) & 0xffull;
    hash *= kPrime;
  }
}

void fnv1a_accumulate_double(std::uint64_t& hash, double value) {
  if (value == 0.0) value = 0.0;  // fold -0.0 into +0.0
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  fnv1a_accumulate(hash, bits);
}

/** Ranks of the split parts (E_{k,0}, E_{k,1}) for every element. */
std::vector<std::array<int, 2>> split_ranks(const Povm& povm,
                                            const Projector& p,
                                            const Tolerances& tol) {
  const Eigen::Index d = povm.dim;
  const Matrix complement = Matrix::Identity(d, d) - p.matrix;
  std::vector<std::array<int, 2>> ranks;
  ranks.reserve(povm.elements.size());
  for (const Matrix& e : povm.elements) {
    ranks.push_back({numeric_rank(Matrix(p.matrix * e * p.matrix), tol.rank()),
                     numeric_rank(Matrix(complement * e * complement),
                                  tol.rank())});
  }
  return ranks;
}

/**
 * Index of the element to place last: minimizes the worst branch's item
 * total over the remaining elements; ties keep the largest index.
 */
int pick_last_element(const std::vector<std::array<int, 2>>& ranks) {
  int total0 = 0;
  int total1 = 0;
  for (const auto& r : ranks) {
    total0 += r[0];
    total1 += r[1];
  }
  int best = -1;
  int best_bound = -1;
  for (int k = 0; k < static_cast<int>(ranks.size()); ++k) {
    const int bound =
        std::max(total0 - ranks[static_cast<std::size_t>(k)][0],
                 total1 - ranks[static_cast<std::size_t>(k)][1]);
    if (best < 0 || bound <= best_bound) {
      best = k;
      best_bound = bound;
    }
  }
  return best;
}

/** Builds one branch's chain of binary nodes; returns the chain head. */
std::unique_ptr<ProtocolNode> build_branch(
    const Povm& povm, const std::vector<int>& order, int branch,
    const Matrix& branch_start, const std::vector<SpectralItem>& items,
    const Tolerances& tol) {
  const Eigen::Index d = povm.dim;
  const int last = order.back();

  // Collect this branch's items in compilation order: reordered elements
  // except the last, each run by descending weight.
  std::vector<const SpectralItem*> chain_items;
  for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
    for (const SpectralItem& item : items) {
      if (item.outcome == order[pos] && item.branch == branch) {
        chain_items.push_back(&item);
      }
    }
  }

  auto head = std::unique_ptr<ProtocolNode>();
  ProtocolNode* tail = nullptr;
  Matrix accumulated = branch_start;
  auto append = [&](std::unique_ptr<ProtocolNode> node) {
    ProtocolNode* raw = node.get();
    if (tail == nullptr) {
      head = std::move(node);
    } else {
      tail->miss = std::move(node);
    }
    tail = raw;
  };

  for (const SpectralItem* item : chain_items) {
    AdjointPreimage preimage =
        unit_adjoint_preimage(accumulated, item->weight, item->vector, tol);
    const std::vector<Vector> kernel = kernel_basis(accumulated, tol.rank());
    if (kernel.empty()) {
      throw Error(Errc::NumericalFailure,
                  "no kernel vector available while items remain; the "
                  "stage-1 projector does not leave room for the padding "
                  "direction");
    }
    const Vector& padding = kernel.front();
    const double ratio =
        std::clamp(item->weight / preimage.gain, 0.0, 1.0);
    Vector direction = std::sqrt(ratio) * preimage.state +
                       std::sqrt(1.0 - ratio) * padding;
    direction.normalize();

    auto node = std::make_unique<ProtocolNode>();
    node->kind = ProtocolNode::Kind::Binary;
    node->projector = direction * direction.adjoint();
    node->accumulated = accumulated;
    BinaryNodeInfo info;
    info.outcome = item->outcome;
    info.branch = branch;
    info.item_index = item->index;
    info.weight = item->weight;
    info.gain = preimage.gain;
    info.target = item->vector;
    info.probe = preimage.state;
    info.padding = padding;
    info.direction = direction;
    node->info = std::move(info);

    node->hit = std::make_unique<ProtocolNode>();
    node->hit->kind = ProtocolNode::Kind::Leaf;
    node->hit->outcome = item->outcome;
    node->hit->accumulated = node->projector * accumulated;

    accumulated = (Matrix::Identity(d, d) - node->projector) * accumulated;
    append(std::move(node));
  }

  auto terminal = std::make_unique<ProtocolNode>();
  terminal->kind = ProtocolNode::Kind::Leaf;
  terminal->outcome = last;
  terminal->accumulated = accumulated;
  append(std::move(terminal));
  return head;
}

/** Assigns preorder ids: node, hit subtree, miss subtree. */
void number_nodes(ProtocolNode& node, int& next_id) {
  node.id = next_id++;
  if (node.hit) number_nodes(*node.hit, next_id);
  if (node.miss) number_nodes(*node.miss, next_id);
}

int depth_below(const ProtocolNode& node) {
  if (node.is_leaf()) return 0;
  int deepest = 0;
  if (node.hit) deepest = std::max(deepest, depth_below(*node.hit));
  if (node.miss) deepest = std::max(deepest, depth_below(*node.miss));
  return 1 + deepest;
}

}  // namespace

std::uint64_t povm_digest(const Povm& povm) {
  std::uint64_t hash = 14695981039346656037ull;  // FNV offset basis
  fnv1a_accumulate(hash, static_cast<std::uint64_t>(povm.dim));
  fnv1a_accumulate(hash, static_cast<std::uint64_t>(povm.elements.size()));
  for (const Matrix& e : povm.elements) {
    for (Eigen::Index r = 0; r < e.rows(); ++r) {
      for (Eigen::Index c = 0; c < e.cols(); ++c) {
        fnv1a_accumulate_double(hash, e(r, c).real());
        fnv1a_accumulate_double(hash, e(r, c).imag());
      }
    }
  }
  return hash;
}

std::vector<SpectralItem> spectral_items(const Matrix& element,
                                         const Projector& p, int outcome,
                                         const Tolerances& tol) {
  require_square(p.matrix, element.rows(), "projector");
  if (commutator_norm(element, p.matrix) >
      tol.commutation() * std::max(1.0, element.norm())) {
    throw Error(Errc::NotCommuting,
                "element " + std::to_string(outcome) +
                    " does not commute with the stage-1 projector");
  }
  const Eigen::Index d = element.rows();
  const Matrix complement = Matrix::Identity(d, d) - p.matrix;

  std::vector<SpectralItem> items;
  for (int branch = 0; branch < 2; ++branch) {
    const Matrix& side = (branch == 0) ? p.matrix : complement;
    const Matrix compressed = hermitized(side * element * side);
    const double cutoff = tol.rank() * std::max(1.0, compressed.norm());
    const EigDecomposition eig = hermitian_eig(compressed, tol);
    int index = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (eig.eigenvalues[j] <= cutoff) break;  // descending order
      SpectralItem item;
      item.outcome = outcome;
      item.branch = branch;
      item.index = index++;
      item.weight = eig.eigenvalues[j];
      item.vector = eig.eigenvectors.col(j);
      items.push_back(std::move(item));
    }
  }
  return items;
}

AdjointPreimage unit_adjoint_preimage(const Matrix& m, double weight,
                                      const Vector& target,
                                      const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() != target.size()) {
    throw Error(Errc::DimensionMismatch,
                "operator and target have incompatible shapes");
  }
  if (weight <= 0.0) {
    throw Error(Errc::PreconditionViolated, "item weight must be positive");
  }
  const Matrix gram = hermitized(m.adjoint() * m);
  const Matrix slack = gram - weight * (target * target.adjoint());
  if (!is_psd(hermitized(slack), tol.kernel(), tol)) {
    throw Error(Errc::PreconditionViolated,
                "accumulated operator does not dominate the item: "
                "M^dag M - weight * target target^dag has a negative "
                "eigenvalue beyond tolerance");
  }

  // theta ~ (M^dag)^+ target via the SVD of M; gain = 1 / ||theta~||^2.
  const SvdDecomposition dec = svd(m);
  const int rank = numeric_rank(dec.singular_values, tol.rank());
  Vector preimage = Vector::Zero(m.rows());
  for (int i = 0; i < rank; ++i) {
    preimage += (dec.right_vectors.col(i).dot(target) /
                 dec.singular_values[i]) *
                dec.left_vectors.col(i);
  }
  const double range_residual = (m.adjoint() * preimage - target).norm();
  if (range_residual > tol.range_membership()) {
    throw Error(Errc::TargetOutsideRange,
                "target is not in the range of the adjoint (residual " +
                    std::to_string(range_residual) + ")");
  }
  const double inverse_norm = preimage.norm();
  if (!(inverse_norm > 0.0)) {
    throw Error(Errc::TargetOutsideRange,
                "target has vanishing preimage under the adjoint");
  }

  AdjointPreimage out;
  out.gain = 1.0 / (inverse_norm * inverse_norm);
  out.state = preimage / inverse_norm;
  if (out.gain < weight) {
    if (out.gain < weight - tol.base) {
      throw Error(Errc::PreconditionViolated,
                  "preimage gain " + std::to_string(out.gain) +
                      " fell short of the item weight " +
                      std::to_string(weight));
    }
    out.gain = weight;  // roundoff only; clamp to the contract
  }
  const double contract = (m.adjoint() * out.state -
                           std::sqrt(out.gain) * target)
                              .norm();
  if (contract > tol.preimage_contract()) {
    throw Error(Errc::NumericalFailure,
                "preimage contract residual " + std::to_string(contract));
  }
  return out;
}

std::vector<int> reorder_for_depth(const Povm& povm, const Projector& p,
                                   const Tolerances& tol) {
  const int m = povm.outcome_count();
  const int last = pick_last_element(split_ranks(povm, p, tol));
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    if (k != last) order.push_back(k);
  }
  order.push_back(last);
  return order;
}

int depth_bound(const Povm& povm, const Projector& p, bool skip_stage1,
                bool reorder, const Tolerances& tol) {
  const auto ranks = split_ranks(povm, p, tol);
  const int last =
      reorder ? pick_last_element(ranks) : povm.outcome_count() - 1;
  int total0 = 0;
  int total1 = 0;
  for (int k = 0; k < povm.outcome_count(); ++k) {
    if (k == last) continue;
    total0 += ranks[static_cast<std::size_t>(k)][0];
    total1 += ranks[static_cast<std::size_t>(k)][1];
  }
  if (skip_stage1) return total1;
  return std::max(total0, total1) + 1;
}

int tree_depth(const ProtocolTree& tree) {
  if (!tree.root) return 0;
  return tree.root->is_leaf() ? 0 : depth_below(*tree.root);
}

ProtocolTree compile_tree(const Povm& povm, const Projector& p,
                          const CompileOptions& options) {
  const Tolerances& tol = options.tol;
  if (!is_realizing_projector(povm, p, tol)) {
    throw Error(Errc::NotRealizable,
                "the given projector does not commute with every element "
                "(or has trivial rank); the POVM cannot be compiled with "
                "it");
  }
  const Eigen::Index d = povm.dim;

  std::vector<int> order;
  if (options.reorder) {
    order = reorder_for_depth(povm, p, tol);
  } else {
    order.resize(povm.elements.size());
    for (int k = 0; k < povm.outcome_count(); ++k) {
      order[static_cast<std::size_t>(k)] = k;
    }
  }

  std::vector<SpectralItem> items;
  for (int k = 0; k < povm.outcome_count(); ++k) {
    auto element_items =
        spectral_items(povm.elements[static_cast<std::size_t>(k)], p, k, tol);
    items.insert(items.end(),
                 std::make_move_iterator(element_items.begin()),
                 std::make_move_iterator(element_items.end()));
  }

  ProtocolTree tree;
  tree.dim = d;
  tree.skip_stage1 = options.skip_stage1;
  tree.povm_digest = povm_digest(povm);
  if (povm.labels.empty()) {
    for (int k = 0; k < povm.outcome_count(); ++k) {
      tree.outcome_labels.push_back(std::to_string(k));
    }
  } else {
    tree.outcome_labels = povm.labels;
  }

  const Matrix identity = Matrix::Identity(d, d);
  const Matrix complement = identity - p.matrix;
  if (options.skip_stage1) {
    tree.root = build_branch(povm, order, 1, complement, items, tol);
  } else {
    auto root = std::make_unique<ProtocolNode>();
    root->kind = ProtocolNode::Kind::Stage1;
    root->projector = p.matrix;
    root->accumulated = identity;
    root->hit = build_branch(povm, order, 0, p.matrix, items, tol);
    root->miss = build_branch(povm, order, 1, complement, items, tol);
    tree.root = std::move(root);
  }
  int next_id = 0;
  number_nodes(*tree.root, next_id);
  return tree;
}

std::pair<Povm, Projector> embed_povm(const Povm& povm,
                                      const Tolerances& tol) {
  const Eigen::Index d = povm.dim;
  std::vector<Matrix> padded;
  padded.reserve(povm.elements.size() + 1);
  for (const Matrix& e : povm.elements) {
    Matrix grown = Matrix::Zero(d + 1, d + 1);
    grown.topLeftCorner(d, d) = e;
    padded.push_back(std::move(grown));
  }
  Matrix added = Matrix::Zero(d + 1, d + 1);
  added(d, d) = 1.0;
  padded.push_back(added);

  std::vector<std::string> labels;
  if (!povm.labels.empty()) {
    labels = povm.labels;
    labels.push_back("embedded");
  }
  Povm embedded = validate_povm(padded, std::move(labels), tol);
  Projector witness = validate_projector(added, tol);
  return {std::move(embedded), std::move(witness)};
}

QuantumState embed_state(const QuantumState& state) {
  QuantumState out;
  out.dim = state.dim + 1;
  if (state.is_pure()) {
    Vector grown = Vector::Zero(state.dim + 1);
    grown.head(state.dim) = *state.pure;
    out.pure = std::move(grown);
  } else {
    Matrix grown = Matrix::Zero(state.dim + 1, state.dim + 1);
    grown.topLeftCorner(state.dim, state.dim) = *state.density;
    out.density = std::move(grown);
  }
  return out;
}

}  // namespace povmseq
