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

#include "povmseq/verifier.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

namespace povmseq {

namespace {

void require_operators(const ProtocolNode& node) {
  if (node.accumulated.size() == 0) {
    throw Error(Errc::MissingOperators,
                "node " + std::to_string(node.id) +
                    " carries no accumulated operator");
  }
}

/** Visits every node, depth first, hit subtree before miss subtree. */
template <typename Visitor>
void visit(const ProtocolNode& node, Visitor&& fn) {
  fn(node);
  if (node.hit) visit(*node.hit, fn);
  if (node.miss) visit(*node.miss, fn);
}

/** One compiled measurement chain: a branch index, its nodes in order,
 *  and the terminal leaf. */
struct Chain {
  int branch = 0;
  std::vector<const ProtocolNode*> nodes;
  const ProtocolNode* terminal = nullptr;
};

/** Walks a branch head along miss children, collecting binary nodes. */
Chain collect_chain(const ProtocolNode& head, int branch) {
  Chain chain;
  chain.branch = branch;
  const ProtocolNode* node = &head;
  while (!node->is_leaf()) {
    if (node->kind != ProtocolNode::Kind::Binary || !node->info) {
      throw Error(Errc::OrderingMismatch,
                  "non-binary node inside a measurement chain");
    }
    if (!node->hit || !node->hit->is_leaf()) {
      throw Error(Errc::OrderingMismatch,
                  "binary node whose hit child is not a leaf");
    }
    chain.nodes.push_back(node);
    node = node->miss.get();
  }
  chain.terminal = node;
  return chain;
}

std::vector<Chain> collect_chains(const ProtocolTree& tree) {
  std::vector<Chain> chains;
  if (tree.skip_stage1) {
    chains.push_back(collect_chain(*tree.root, 1));
  } else {
    if (tree.root->kind != ProtocolNode::Kind::Stage1) {
      throw Error(Errc::OrderingMismatch,
                  "stage-1 tree whose root is not a stage-1 node");
    }
    chains.push_back(collect_chain(*tree.root->hit, 0));
    chains.push_back(collect_chain(*tree.root->miss, 1));
  }
  return chains;
}

Matrix outer(const Vector& v) { return v * v.adjoint(); }

}  // namespace

Projector stage1_projector(const ProtocolTree& tree, const Tolerances& tol) {
  const ProtocolNode& root = *tree.root;
  if (tree.skip_stage1) {
    require_operators(root);
    const Matrix complement =
        Matrix::Identity(tree.dim, tree.dim) - root.accumulated;
    return validate_projector(complement, tol);
  }
  if (root.kind != ProtocolNode::Kind::Stage1 || root.projector.size() == 0) {
    throw Error(Errc::MissingOperators,
                "root carries no stage-1 measurement projector");
  }
  return validate_projector(root.projector, tol);
}

std::vector<double> check_leaf_sums(const ProtocolTree& tree,
                                    const Povm& povm, const Tolerances& tol) {
  if (povm_digest(povm) != tree.povm_digest) {
    throw Error(Errc::DigestMismatch,
                "tree was not compiled from this POVM (digest differs)");
  }
  if (static_cast<int>(tree.outcome_labels.size()) != povm.outcome_count()) {
    throw Error(Errc::DigestMismatch,
                "tree outcome count differs from the POVM's");
  }
  const Eigen::Index d = tree.dim;
  std::vector<Matrix> sums(povm.elements.size(), Matrix::Zero(d, d));
  visit(*tree.root, [&](const ProtocolNode& node) {
    if (!node.is_leaf()) return;
    require_operators(node);
    sums[static_cast<std::size_t>(node.outcome)] +=
        node.accumulated.adjoint() * node.accumulated;
  });

  // In embedding mode only the I-P branch is measured, so leaves can
  // account only for the elements' restriction to it.
  Matrix restriction = Matrix::Identity(d, d);
  if (tree.skip_stage1) {
    require_operators(*tree.root);
    restriction = tree.root->accumulated;
  }

  std::vector<double> residuals;
  residuals.reserve(povm.elements.size());
  for (std::size_t k = 0; k < povm.elements.size(); ++k) {
    const Matrix expected =
        restriction.adjoint() * povm.elements[k] * restriction;
    residuals.push_back((sums[k] - expected).norm());
  }
  (void)tol;
  return residuals;
}

double check_node_identities(const ProtocolTree& tree) {
  double worst = 0.0;
  visit(*tree.root, [&](const ProtocolNode& node) {
    if (node.kind != ProtocolNode::Kind::Binary) return;
    if (!node.info) {
      throw Error(Errc::MissingOperators,
                  "binary node " + std::to_string(node.id) +
                      " carries no compilation record");
    }
    require_operators(node);
    const Matrix& m = node.accumulated;
    const Matrix left = m.adjoint() * node.projector * m;
    const Matrix right = node.info->weight * outer(node.info->target);
    worst = std::max(worst, (left - right).norm());
  });
  return worst;
}

double check_telescoping(const ProtocolTree& tree,
                         const std::vector<SpectralItem>& items) {
  const Eigen::Index d = tree.dim;

  // Index the externally recomputed items by (outcome, branch, position).
  std::map<std::tuple<int, int, int>, const SpectralItem*> by_key;
  std::map<std::pair<int, int>, int> run_sizes;
  for (const SpectralItem& item : items) {
    by_key[{item.outcome, item.branch, item.index}] = &item;
    ++run_sizes[{item.outcome, item.branch}];
  }

  double worst = 0.0;
  for (const Chain& chain : collect_chains(tree)) {
    // Structural checks: runs of consecutive items per outcome, every run
    // complete, the terminal outcome absent from the chain.
    std::vector<int> run_order;
    int previous_outcome = -1;
    int expected_index = 0;
    for (const ProtocolNode* node : chain.nodes) {
      const BinaryNodeInfo& info = *node->info;
      if (info.branch != chain.branch) {
        throw Error(Errc::OrderingMismatch,
                    "node " + std::to_string(node->id) +
                        " is tagged for the other branch");
      }
      if (info.outcome != previous_outcome) {
        if (std::find(run_order.begin(), run_order.end(), info.outcome) !=
            run_order.end()) {
          throw Error(Errc::OrderingMismatch,
                      "items of one outcome appear in two separate runs");
        }
        if (previous_outcome >= 0 &&
            expected_index !=
                run_sizes[{previous_outcome, chain.branch}]) {
          throw Error(Errc::OrderingMismatch,
                      "incomplete item run for an outcome");
        }
        run_order.push_back(info.outcome);
        previous_outcome = info.outcome;
        expected_index = 0;
      }
      if (info.item_index != expected_index++) {
        throw Error(Errc::OrderingMismatch,
                    "item positions out of order within a run");
      }
      if (by_key.find({info.outcome, chain.branch, info.item_index}) ==
          by_key.end()) {
        throw Error(Errc::OrderingMismatch,
                    "chain consumes an item the decomposition lacks");
      }
    }
    if (previous_outcome >= 0 &&
        expected_index != run_sizes[{previous_outcome, chain.branch}]) {
      throw Error(Errc::OrderingMismatch,
                  "incomplete item run for an outcome");
    }
    const int last = chain.terminal->outcome;
    if (std::find(run_order.begin(), run_order.end(), last) !=
        run_order.end()) {
      throw Error(Errc::OrderingMismatch,
                  "terminal outcome also appears as a measured item");
    }
    for (const auto& [key, size] : run_sizes) {
      if (key.second != chain.branch || key.first == last || size == 0) {
        continue;
      }
      if (std::find(run_order.begin(), run_order.end(), key.first) ==
          run_order.end()) {
        throw Error(Errc::OrderingMismatch,
                    "chain omits every item of one outcome");
      }
    }

    // Running sums, walked backward: start from the never-measured items
    // of the terminal outcome, add one item per node, and compare with
    // the node's M^dag M at every step.
    Matrix remaining = Matrix::Zero(d, d);
    for (const SpectralItem& item : items) {
      if (item.outcome == last && item.branch == chain.branch) {
        remaining += item.weight * outer(item.vector);
      }
    }
    require_operators(*chain.terminal);
    const Matrix& terminal_m = chain.terminal->accumulated;
    worst = std::max(
        worst, (terminal_m.adjoint() * terminal_m - remaining).norm());
    for (auto it = chain.nodes.rbegin(); it != chain.nodes.rend(); ++it) {
      const BinaryNodeInfo& info = *(*it)->info;
      const SpectralItem* item =
          by_key[{info.outcome, chain.branch, info.item_index}];
      remaining += item->weight * outer(item->vector);
      require_operators(**it);
      const Matrix& m = (*it)->accumulated;
      worst = std::max(worst, (m.adjoint() * m - remaining).norm());
    }
  }
  return worst;
}

std::vector<double> check_decomposition(const Povm& povm,
                                        const Projector& p) {
  require_square(p.matrix, povm.dim, "projector");
  const Matrix complement =
      Matrix::Identity(povm.dim, povm.dim) - p.matrix;
  std::vector<double> residuals;
  residuals.reserve(povm.elements.size());
  for (const Matrix& e : povm.elements) {
    const Matrix split =
        p.matrix * e * p.matrix + complement * e * complement;
    residuals.push_back((e - split).norm());
  }
  return residuals;
}

std::pair<int, int> check_depth_bound(const ProtocolTree& tree,
                                      const Povm& povm, const Projector& p,
                                      const Tolerances& tol) {
  const Eigen::Index d = povm.dim;
  const Matrix complement = Matrix::Identity(d, d) - p.matrix;
  auto split_rank = [&](int k, int branch) {
    const Matrix& side = (branch == 0) ? p.matrix : complement;
    return numeric_rank(
        Matrix(side * povm.elements[static_cast<std::size_t>(k)] * side),
        tol.rank());
  };

  int bound = 0;
  for (const Chain& chain : collect_chains(tree)) {
    int branch_total = 0;
    for (int k = 0; k < povm.outcome_count(); ++k) {
      if (k == chain.terminal->outcome) continue;
      branch_total += split_rank(k, chain.branch);
    }
    bound = std::max(bound, branch_total);
  }
  if (!tree.skip_stage1) ++bound;
  return {tree_depth(tree), bound};
}

VerificationReport verify_tree(const ProtocolTree& tree, const Povm& povm,
                               const Tolerances& tol) {
  VerificationReport report;
  report.tolerances = tol;

  const Projector p = stage1_projector(tree, tol);
  report.leaf_sum_residuals = check_leaf_sums(tree, povm, tol);
  report.decomposition_residuals = check_decomposition(povm, p);
  report.node_identity_max_residual = check_node_identities(tree);

  std::vector<SpectralItem> items;
  for (int k = 0; k < povm.outcome_count(); ++k) {
    auto element_items =
        spectral_items(povm.elements[static_cast<std::size_t>(k)], p, k, tol);
    items.insert(items.end(),
                 std::make_move_iterator(element_items.begin()),
                 std::make_move_iterator(element_items.end()));
  }
  report.telescoping_max_residual = check_telescoping(tree, items);

  const Eigen::Index d = tree.dim;
  Matrix all_leaves = Matrix::Zero(d, d);
  visit(*tree.root, [&](const ProtocolNode& node) {
    if (!node.is_leaf()) return;
    all_leaves += node.accumulated.adjoint() * node.accumulated;
  });
  Matrix measured_identity = Matrix::Identity(d, d);
  if (tree.skip_stage1) measured_identity -= p.matrix;
  report.completeness_residual = (all_leaves - measured_identity).norm();

  const auto depth = check_depth_bound(tree, povm, p, tol);
  report.depth = depth.first;
  report.depth_bound = depth.second;

  bool pass = report.depth <= report.depth_bound;
  pass = pass && report.completeness_residual <= tol.leaf_sum();
  pass = pass && report.node_identity_max_residual <= tol.node_identity();
  pass = pass && report.telescoping_max_residual <= tol.telescoping();
  for (double r : report.leaf_sum_residuals) {
    pass = pass && r <= tol.leaf_sum();
  }
  for (double r : report.decomposition_residuals) {
    pass = pass && r <= tol.commutation();
  }
  report.pass = pass;
  return report;
}

}  // namespace povmseq
