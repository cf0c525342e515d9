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

/**
 * @file main.cpp
 * @brief Command-line front end.
 *
 * Subcommands: check, compile, simulate, sample, verify, demo.
 * Exit codes: 0 success, 1 POVM not realizable, 2 invalid input,
 * 3 verification failure.  Results go to stdout as JSON; diagnostics go
 * to stderr.
 */

#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "povmseq/io.hpp"
#include "povmseq/realizability.hpp"

namespace {

using namespace povmseq;

constexpr int kExitSuccess = 0;
constexpr int kExitNotRealizable = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitVerificationFailure = 3;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::NotRealizable:
      return kExitNotRealizable;
    case Errc::DigestMismatch:
      return kExitVerificationFailure;
    default:
      return kExitInvalidInput;
  }
}

void emit(const Json& doc) { std::cout << doc.dump(2) << std::endl; }

/** Pads the state by one dimension when fed to an embedding-mode tree. */
QuantumState adapt_state(const ProtocolTree& tree, QuantumState state) {
  if (tree.skip_stage1 && state.dim + 1 == tree.dim) {
    return embed_state(state);
  }
  return state;
}

int run_check(const std::string& povm_path, const Tolerances& tol) {
  const Povm povm = povm_from_json(load_json(povm_path), tol);
  const RealizabilityVerdict verdict = find_commuting_projector(povm, tol);
  emit(verdict_to_json(verdict));
  return verdict.realizable ? kExitSuccess : kExitNotRealizable;
}

int run_compile(const std::string& povm_path, const std::string& out_path,
                const std::string& projector_path, bool embed,
                bool no_reorder, bool with_operators, const Tolerances& tol) {
  Povm povm = povm_from_json(load_json(povm_path), tol);

  Projector stage1;
  CompileOptions options;
  options.reorder = !no_reorder;
  options.tol = tol;
  if (embed) {
    auto embedded = embed_povm(povm, tol);
    povm = std::move(embedded.first);
    stage1 = std::move(embedded.second);
    options.skip_stage1 = true;
  } else if (!projector_path.empty()) {
    stage1 = projector_from_json(load_json(projector_path), tol);
  } else {
    RealizabilityVerdict verdict = find_commuting_projector(povm, tol);
    if (!verdict.realizable) {
      throw Error(Errc::NotRealizable,
                  "no projector with 0 < rank < dim commutes with every "
                  "element; rerun with --embed to add one dimension");
    }
    stage1 = std::move(*verdict.projector);
  }

  const ProtocolTree tree = compile_tree(povm, stage1, options);
  save_json(out_path, tree_to_json(tree, with_operators));
  std::cerr << "wrote " << out_path << " (depth " << tree_depth(tree) << ")"
            << std::endl;
  return kExitSuccess;
}

int run_simulate(const std::string& tree_path, const std::string& state_path,
                 const Tolerances& tol) {
  const ProtocolTree tree = tree_from_json(load_json(tree_path));
  const QuantumState state =
      adapt_state(tree, state_from_json(load_json(state_path), tol));
  emit(distribution_to_json(exact_distribution(tree, state)));
  return kExitSuccess;
}

int run_sample(const std::string& tree_path, const std::string& state_path,
               std::uint64_t shots, std::uint64_t seed,
               const Tolerances& tol) {
  const ProtocolTree tree = tree_from_json(load_json(tree_path));
  const QuantumState state =
      adapt_state(tree, state_from_json(load_json(state_path), tol));
  const auto counts = sample_histogram(tree, state, shots, seed);
  emit(histogram_to_json(tree.outcome_labels, counts));
  return kExitSuccess;
}

int run_verify(const std::string& tree_path, const std::string& povm_path,
               const Tolerances& tol) {
  const ProtocolTree tree = tree_from_json(load_json(tree_path));
  Povm povm = povm_from_json(load_json(povm_path), tol);
  // Convenience: verifying an embedding-mode tree against the original
  // POVM embeds it the same way the compiler did.
  if (tree.skip_stage1 && povm.dim + 1 == tree.dim) {
    povm = embed_povm(povm, tol).first;
  }
  const VerificationReport report = verify_tree(tree, povm, tol);
  emit(report_to_json(report));
  return report.pass ? kExitSuccess : kExitVerificationFailure;
}

Povm paper_qutrit_povm(const Tolerances& tol) {
  Vector psi0(3), psi1(3);
  psi0 << 1, 1, 0;
  psi0 /= std::sqrt(2.0);
  psi1 << 1, 2, 0;
  psi1 /= std::sqrt(5.0);
  const Matrix e0 = (2.0 / 3.0) * psi0 * psi0.adjoint();
  const Matrix e1 = (5.0 / 14.0) * psi1 * psi1.adjoint();
  const Matrix e2 = Matrix::Identity(3, 3) - e0 - e1;
  return validate_povm({e0, e1, e2}, {}, tol);
}

Povm trine_povm(const Tolerances& tol) {
  std::vector<Matrix> elements;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 3.0;
    Vector t(2);
    t << std::cos(angle), std::sin(angle);
    elements.push_back((2.0 / 3.0) * t * t.adjoint());
  }
  return validate_povm(elements, {}, tol);
}

int run_demo_qutrit(const Tolerances& tol) {
  const Povm povm = paper_qutrit_povm(tol);
  const RealizabilityVerdict verdict = find_commuting_projector(povm, tol);
  CompileOptions options;
  options.tol = tol;
  const ProtocolTree tree = compile_tree(povm, *verdict.projector, options);

  Vector basis0 = Vector::Zero(3);
  basis0[0] = 1.0;
  const QuantumState state = validate_state(basis0, tol);
  const OutcomeDistribution dist = exact_distribution(tree, state);
  const VerificationReport report = verify_tree(tree, povm, tol);

  Json out = Json::object();
  out["verdict"] = verdict_to_json(verdict);
  out["distribution"] = distribution_to_json(dist);
  out["verification"] = report_to_json(report);
  out["depth"] = tree_depth(tree);
  emit(out);
  std::cerr << (report.pass ? "PASS" : "FAIL") << std::endl;
  return report.pass ? kExitSuccess : kExitVerificationFailure;
}

int run_demo_trine(const Tolerances& tol) {
  const Povm trine = trine_povm(tol);
  const RealizabilityVerdict verdict = find_commuting_projector(trine, tol);

  auto embedded = embed_povm(trine, tol);
  CompileOptions options;
  options.skip_stage1 = true;
  options.tol = tol;
  const ProtocolTree tree =
      compile_tree(embedded.first, embedded.second, options);

  Vector plus(2);
  plus << 1, 1;
  plus /= std::sqrt(2.0);
  const QuantumState state = validate_state(plus, tol);
  const OutcomeDistribution dist =
      exact_distribution(tree, embed_state(state));
  const std::vector<double> born = born_distribution(trine, state);
  const VerificationReport report = verify_tree(tree, embedded.first, tol);

  Json out = Json::object();
  out["verdict"] = verdict_to_json(verdict);
  out["embedded_outcomes"] = embedded.first.outcome_count();
  out["distribution"] = distribution_to_json(dist);
  out["born"] = born;
  out["extra_outcome_probability"] = dist.probabilities.back();
  out["verification"] = report_to_json(report);
  emit(out);
  std::cerr << (report.pass ? "PASS" : "FAIL") << std::endl;
  return report.pass ? kExitSuccess : kExitVerificationFailure;
}

int run_demo_ud(const Tolerances& tol) {
  const Eigen::Index d = 3;
  Matrix rho1 = Matrix::Zero(d, d);
  rho1(0, 0) = 0.5;
  rho1(1, 1) = 0.5;
  Matrix rho2 = Matrix::Zero(d, d);
  rho2(1, 1) = 0.5;
  rho2(2, 2) = 0.5;
  const QuantumState state1 = validate_state(rho1, tol);
  const QuantumState state2 = validate_state(rho2, tol);

  Matrix e1 = Matrix::Zero(d, d);
  e1(0, 0) = 0.5;
  Matrix e2 = Matrix::Zero(d, d);
  e2(2, 2) = 0.5;
  const Matrix e0 = Matrix::Identity(d, d) - e1 - e2;
  const Povm povm =
      validate_povm({e0, e1, e2}, {"inconclusive", "first", "second"}, tol);

  const auto shared = support_intersection(state1, state2, tol);
  Json out = Json::object();
  out["intersection_dimension"] = shared.size();
  if (shared.empty()) {
    out["note"] = "supports do not intersect; single-projector realization "
                  "not applicable";
    emit(out);
    return kExitSuccess;
  }

  const Vector& psi = shared.front();
  const Projector p = validate_projector(psi * psi.adjoint(), tol);
  const bool condition = is_realizing_projector(povm, p, tol);
  CompileOptions options;
  options.tol = tol;
  const ProtocolTree tree = compile_tree(povm, p, options);
  const VerificationReport report = verify_tree(tree, povm, tol);
  const OutcomeDistribution dist = exact_distribution(tree, state1);

  out["witness"] = vector_to_json(psi);
  out["projector"] = matrix_to_json(p.matrix);
  out["condition"] = condition;
  out["overlap_first_on_rho2"] =
      (e1 * state2.density_matrix()).trace().real();
  out["overlap_second_on_rho1"] =
      (e2 * state1.density_matrix()).trace().real();
  out["distribution_rho1"] = distribution_to_json(dist);
  out["verification"] = report_to_json(report);
  emit(out);
  std::cerr << (report.pass && condition ? "PASS" : "FAIL") << std::endl;
  return report.pass && condition ? kExitSuccess : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Compiles POVMs into sequential projective measurements, simulates "
      "the compiled trees, and verifies the operator identities that tie "
      "them back to the POVM."};
  app.require_subcommand(1);
  double tol_base = 1e-10;
  app.add_option("--tol", tol_base,
                 "base relative tolerance (all checks scale with it)")
      ->check(CLI::PositiveNumber);

  std::string povm_path;
  std::string state_path;
  std::string tree_path;
  std::string out_path;
  std::string projector_path;
  std::string demo_name;
  bool embed = false;
  bool no_reorder = false;
  bool with_operators = false;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  CLI::App* check = app.add_subcommand(
      "check", "decide whether a POVM admits a stage-1 projector");
  check->add_option("povm", povm_path, "POVM JSON file")->required();

  CLI::App* compile = app.add_subcommand(
      "compile", "compile a POVM into a measurement tree");
  compile->add_option("povm", povm_path, "POVM JSON file")->required();
  compile->add_option("-o,--output", out_path, "tree output file")
      ->required();
  CLI::Option* projector_opt = compile->add_option(
      "--projector", projector_path, "use this stage-1 projector");
  compile->add_flag("--embed", embed,
                    "add one dimension and compile unconditionally")
      ->excludes(projector_opt);
  compile->add_flag("--no-reorder", no_reorder,
                    "keep the POVM's element order");
  compile->add_flag("--with-operators", with_operators,
                    "store accumulated operators on every node");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "exact outcome distribution of a tree on a state");
  simulate->add_option("tree", tree_path, "tree JSON file")->required();
  simulate->add_option("state", state_path, "state JSON file")->required();

  CLI::App* sample = app.add_subcommand(
      "sample", "Monte Carlo shots through a tree");
  sample->add_option("tree", tree_path, "tree JSON file")->required();
  sample->add_option("state", state_path, "state JSON file")->required();
  sample->add_option("--shots", shots, "number of shots")->required();
  sample->add_option("--seed", seed, "random seed (no wall-clock default)")
      ->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "re-check a compiled tree against its POVM");
  verify->add_option("tree", tree_path, "tree JSON file")->required();
  verify->add_option("povm", povm_path, "POVM JSON file")->required();

  CLI::App* demo = app.add_subcommand("demo", "built-in worked examples");
  demo->add_option("name", demo_name, "one of: qutrit, trine, ud")
      ->required()
      ->check(CLI::IsMember({"qutrit", "trine", "ud"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitInvalidInput;
  }

  const Tolerances tol{tol_base};
  try {
    if (check->parsed()) return run_check(povm_path, tol);
    if (compile->parsed()) {
      return run_compile(povm_path, out_path, projector_path, embed,
                         no_reorder, with_operators, tol);
    }
    if (simulate->parsed()) return run_simulate(tree_path, state_path, tol);
    if (sample->parsed()) {
      return run_sample(tree_path, state_path, shots, seed, tol);
    }
    if (verify->parsed()) return run_verify(tree_path, povm_path, tol);
    if (demo->parsed()) {
      if (demo_name == "qutrit") return run_demo_qutrit(tol);
      if (demo_name == "trine") return run_demo_trine(tol);
      return run_demo_ud(tol);
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << std::endl;
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << std::endl;
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
