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

#include "povmseq/io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "povmseq/realizability.hpp"

namespace povmseq {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(Errc::ParseError, what);
}

const Json& require_field(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    parse_fail(std::string("missing field \"") + key + "\"");
  }
  return *it;
}

Eigen::Index require_dim(const Json& doc) {
  const Json& dim = require_field(doc, "dim");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
    parse_fail("\"dim\" must be a positive integer");
  }
  return dim.get<Eigen::Index>();
}

std::string digest_to_hex(std::uint64_t digest) {
  std::ostringstream stream;
  stream << "0x" << std::hex << digest;
  return stream.str();
}

std::uint64_t hex_to_digest(const std::string& text) {
  std::uint64_t value = 0;
  std::istringstream stream(text);
  if (text.rfind("0x", 0) == 0) stream.ignore(2);
  stream >> std::hex >> value;
  if (stream.fail() || !stream.eof()) {
    parse_fail("\"povm_digest\" is not a hexadecimal string");
  }
  return value;
}

Json node_to_json(const ProtocolNode& node, bool with_operators,
                  bool is_root) {
  Json out = Json::object();
  switch (node.kind) {
    case ProtocolNode::Kind::Stage1:
      out["kind"] = "stage1";
      break;
    case ProtocolNode::Kind::Binary:
      out["kind"] = "binary";
      break;
    case ProtocolNode::Kind::Leaf:
      out["kind"] = "leaf";
      break;
  }
  if (node.kind != ProtocolNode::Kind::Leaf) {
    out["projector"] = matrix_to_json(node.projector);
  } else {
    out["outcome"] = node.outcome;
  }
  // The root's incoming operator anchors the reconstruction of all other
  // accumulated operators, so it is written unconditionally.
  if ((with_operators || is_root) && node.accumulated.size() != 0) {
    out["accumulated"] = matrix_to_json(node.accumulated);
  }
  if (node.info) {
    const BinaryNodeInfo& info = *node.info;
    Json meta = Json::object();
    meta["outcome"] = info.outcome;
    meta["branch"] = info.branch;
    meta["item_index"] = info.item_index;
    meta["weight"] = info.weight;
    meta["gain"] = info.gain;
    meta["target"] = vector_to_json(info.target);
    meta["probe"] = vector_to_json(info.probe);
    meta["padding"] = vector_to_json(info.padding);
    meta["direction"] = vector_to_json(info.direction);
    out["info"] = std::move(meta);
  }
  if (node.hit) out["hit"] = node_to_json(*node.hit, with_operators, false);
  if (node.miss) {
    out["miss"] = node_to_json(*node.miss, with_operators, false);
  }
  return out;
}

std::unique_ptr<ProtocolNode> node_from_json(const Json& doc,
                                             Eigen::Index dim,
                                             int outcome_count) {
  if (!doc.is_object()) parse_fail("tree node must be an object");
  auto node = std::make_unique<ProtocolNode>();
  const std::string kind = require_field(doc, "kind").get<std::string>();
  if (kind == "stage1") {
    node->kind = ProtocolNode::Kind::Stage1;
  } else if (kind == "binary") {
    node->kind = ProtocolNode::Kind::Binary;
  } else if (kind == "leaf") {
    node->kind = ProtocolNode::Kind::Leaf;
  } else {
    parse_fail("unknown node kind \"" + kind + "\"");
  }

  if (node->kind == ProtocolNode::Kind::Leaf) {
    const Json& outcome = require_field(doc, "outcome");
    if (!outcome.is_number_integer()) parse_fail("leaf outcome not integer");
    node->outcome = outcome.get<int>();
    if (node->outcome < 0 || node->outcome >= outcome_count) {
      parse_fail("leaf outcome out of range");
    }
    if (doc.contains("hit") || doc.contains("miss")) {
      parse_fail("leaf node with children");
    }
  } else {
    node->projector = json_to_matrix(require_field(doc, "projector"));
    if (node->projector.rows() != dim || node->projector.cols() != dim) {
      parse_fail("node projector has the wrong dimension");
    }
    node->hit = node_from_json(require_field(doc, "hit"), dim, outcome_count);
    node->miss =
        node_from_json(require_field(doc, "miss"), dim, outcome_count);
  }

  if (doc.contains("accumulated")) {
    node->accumulated = json_to_matrix(doc["accumulated"]);
    if (node->accumulated.rows() != dim ||
        node->accumulated.cols() != dim) {
      parse_fail("node accumulated operator has the wrong dimension");
    }
  }
  if (node->kind == ProtocolNode::Kind::Binary) {
    const Json& meta = require_field(doc, "info");
    BinaryNodeInfo info;
    info.outcome = require_field(meta, "outcome").get<int>();
    info.branch = require_field(meta, "branch").get<int>();
    info.item_index = require_field(meta, "item_index").get<int>();
    info.weight = require_field(meta, "weight").get<double>();
    info.gain = require_field(meta, "gain").get<double>();
    info.target = json_to_vector(require_field(meta, "target"));
    info.probe = json_to_vector(require_field(meta, "probe"));
    info.padding = json_to_vector(require_field(meta, "padding"));
    info.direction = json_to_vector(require_field(meta, "direction"));
    if (info.target.size() != dim || info.direction.size() != dim) {
      parse_fail("node info vectors have the wrong dimension");
    }
    node->info = std::move(info);
  } else if (doc.contains("info")) {
    parse_fail("only binary nodes carry an info record");
  }
  return node;
}

/** Fills in missing accumulated operators from the path, reproducing the
 *  compiler's arithmetic (same products in the same order). */
void materialize_accumulated(ProtocolNode& node, Eigen::Index dim) {
  if (!node.is_leaf()) {
    if (node.hit->accumulated.size() == 0) {
      node.hit->accumulated = node.projector * node.accumulated;
    }
    if (node.miss->accumulated.size() == 0) {
      node.miss->accumulated =
          (Matrix::Identity(dim, dim) - node.projector) * node.accumulated;
    }
    materialize_accumulated(*node.hit, dim);
    materialize_accumulated(*node.miss, dim);
  }
}

}  // namespace

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex json_to_complex(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    parse_fail("complex numbers must be [re, im] arrays");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_to_json(v[i]));
  }
  return out;
}

Vector json_to_vector(const Json& j) {
  if (!j.is_array() || j.empty()) parse_fail("vector must be a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = json_to_complex(j[static_cast<std::size_t>(i)]);
  }
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Matrix json_to_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) {
    parse_fail("matrix must be a nonempty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Json& first = j[0];
  if (!first.is_array() || first.empty()) {
    parse_fail("matrix rows must be nonempty arrays");
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(first.size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      parse_fail("matrix rows have inconsistent lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = json_to_complex(row[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

Json povm_to_json(const Povm& povm) {
  Json out = Json::object();
  out["dim"] = povm.dim;
  Json elements = Json::array();
  for (const Matrix& e : povm.elements) {
    elements.push_back(matrix_to_json(e));
  }
  out["elements"] = std::move(elements);
  if (!povm.labels.empty()) out["labels"] = povm.labels;
  return out;
}

Povm povm_from_json(const Json& doc, const Tolerances& tol) {
  if (!doc.is_object()) parse_fail("POVM document must be an object");
  const Eigen::Index dim = require_dim(doc);
  const Json& elements = require_field(doc, "elements");
  if (!elements.is_array() || elements.empty()) {
    parse_fail("\"elements\" must be a nonempty array");
  }
  std::vector<Matrix> parsed;
  parsed.reserve(elements.size());
  for (const Json& e : elements) {
    Matrix m = json_to_matrix(e);
    if (m.rows() != dim || m.cols() != dim) {
      parse_fail("POVM element dimension disagrees with \"dim\"");
    }
    parsed.push_back(std::move(m));
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const Json& raw = doc["labels"];
    if (!raw.is_array()) parse_fail("\"labels\" must be an array");
    for (const Json& label : raw) {
      if (!label.is_string()) parse_fail("labels must be strings");
      labels.push_back(label.get<std::string>());
    }
  }
  return validate_povm(parsed, std::move(labels), tol);
}

Json state_to_json(const QuantumState& state) {
  Json out = Json::object();
  out["dim"] = state.dim;
  if (state.is_pure()) {
    out["pure"] = vector_to_json(*state.pure);
  } else {
    out["density"] = matrix_to_json(*state.density);
  }
  return out;
}

QuantumState state_from_json(const Json& doc, const Tolerances& tol) {
  if (!doc.is_object()) parse_fail("state document must be an object");
  const Eigen::Index dim = require_dim(doc);
  const bool has_pure = doc.contains("pure");
  const bool has_density = doc.contains("density");
  if (has_pure == has_density) {
    parse_fail("state document needs exactly one of \"pure\", \"density\"");
  }
  if (has_pure) {
    Vector psi = json_to_vector(doc["pure"]);
    if (psi.size() != dim) parse_fail("pure vector length disagrees with dim");
    return validate_state(psi, tol);
  }
  Matrix rho = json_to_matrix(doc["density"]);
  if (rho.rows() != dim || rho.cols() != dim) {
    parse_fail("density matrix dimension disagrees with dim");
  }
  return validate_state(rho, tol);
}

Json projector_to_json(const Projector& p) {
  Json out = Json::object();
  out["dim"] = p.matrix.rows();
  out["matrix"] = matrix_to_json(p.matrix);
  return out;
}

Projector projector_from_json(const Json& doc, const Tolerances& tol) {
  if (!doc.is_object()) parse_fail("projector document must be an object");
  const Eigen::Index dim = require_dim(doc);
  Matrix m = json_to_matrix(require_field(doc, "matrix"));
  if (m.rows() != dim || m.cols() != dim) {
    parse_fail("projector matrix dimension disagrees with dim");
  }
  return validate_projector(m, tol);
}

Json tree_to_json(const ProtocolTree& tree, bool with_operators) {
  Json out = Json::object();
  out["dim"] = tree.dim;
  out["outcome_labels"] = tree.outcome_labels;
  out["skip_stage1"] = tree.skip_stage1;
  out["povm_digest"] = digest_to_hex(tree.povm_digest);
  out["root"] = node_to_json(*tree.root, with_operators, true);
  return out;
}

ProtocolTree tree_from_json(const Json& doc) {
  if (!doc.is_object()) parse_fail("tree document must be an object");
  ProtocolTree tree;
  tree.dim = require_dim(doc);
  const Json& labels = require_field(doc, "outcome_labels");
  if (!labels.is_array() || labels.empty()) {
    parse_fail("\"outcome_labels\" must be a nonempty array");
  }
  for (const Json& label : labels) {
    if (!label.is_string()) parse_fail("outcome labels must be strings");
    tree.outcome_labels.push_back(label.get<std::string>());
  }
  const Json& skip = require_field(doc, "skip_stage1");
  if (!skip.is_boolean()) parse_fail("\"skip_stage1\" must be a boolean");
  tree.skip_stage1 = skip.get<bool>();
  tree.povm_digest =
      hex_to_digest(require_field(doc, "povm_digest").get<std::string>());
  tree.root = node_from_json(require_field(doc, "root"), tree.dim,
                             tree.outcome_count());
  if (tree.root->accumulated.size() == 0) {
    parse_fail("the root node must carry its accumulated operator");
  }
  materialize_accumulated(*tree.root, tree.dim);
  // Preorder ids match the compiler's numbering.
  struct Number {
    static void walk(ProtocolNode& node, int& next) {
      node.id = next++;
      if (node.hit) walk(*node.hit, next);
      if (node.miss) walk(*node.miss, next);
    }
  };
  int next_id = 0;
  Number::walk(*tree.root, next_id);
  return tree;
}

Json distribution_to_json(const OutcomeDistribution& dist) {
  Json out = Json::object();
  Json probabilities = Json::object();
  for (std::size_t k = 0; k < dist.probabilities.size(); ++k) {
    probabilities[dist.labels[k]] = dist.probabilities[k];
  }
  out["probabilities"] = std::move(probabilities);
  out["residual"] = dist.residual;
  return out;
}

Json histogram_to_json(const std::vector<std::string>& labels,
                       const std::vector<std::uint64_t>& counts) {
  Json out = Json::object();
  Json histogram = Json::object();
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    histogram[labels[k]] = counts[k];
    total += counts[k];
  }
  out["counts"] = std::move(histogram);
  out["shots"] = total;
  return out;
}

Json report_to_json(const VerificationReport& report) {
  Json out = Json::object();
  out["pass"] = report.pass;
  out["leaf_sum_residuals"] = report.leaf_sum_residuals;
  out["completeness_residual"] = report.completeness_residual;
  out["node_identity_max_residual"] = report.node_identity_max_residual;
  out["telescoping_max_residual"] = report.telescoping_max_residual;
  out["decomposition_residuals"] = report.decomposition_residuals;
  out["depth"] = report.depth;
  out["depth_bound"] = report.depth_bound;
  Json tolerances = Json::object();
  tolerances["base"] = report.tolerances.base;
  tolerances["leaf_sum"] = report.tolerances.leaf_sum();
  tolerances["node_identity"] = report.tolerances.node_identity();
  tolerances["telescoping"] = report.tolerances.telescoping();
  tolerances["commutation"] = report.tolerances.commutation();
  out["tolerances"] = std::move(tolerances);
  return out;
}

Json verdict_to_json(const RealizabilityVerdict& verdict) {
  Json out = Json::object();
  out["verdict"] = verdict.realizable ? "REALIZABLE" : "NOT_REALIZABLE";
  out["commutant_dimension"] = verdict.commutant_dimension;
  if (verdict.projector) {
    out["projector"] = matrix_to_json(verdict.projector->matrix);
    out["projector_rank"] = verdict.projector->rank;
  }
  return out;
}

Json load_json(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    parse_fail("cannot open \"" + path + "\" for reading");
  }
  Json doc = Json::parse(stream, nullptr, false);
  if (doc.is_discarded()) {
    parse_fail("\"" + path + "\" is not valid JSON");
  }
  return doc;
}

void save_json(const std::string& path, const Json& doc) {
  std::ofstream stream(path);
  if (!stream) {
    parse_fail("cannot open \"" + path + "\" for writing");
  }
  stream << doc.dump(2) << '\n';
  if (!stream) {
    parse_fail("failed while writing \"" + path + "\"");
  }
}

}  // namespace povmseq
