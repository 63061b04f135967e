// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapteve/factorization.hpp"
#include "sapteve/norms.hpp"

namespace sapteve {

/** @brief Exact Toffoli count; totals exceed 64 bits for large systems. */
using ToffoliCount = boost::multiprecision::uint128_t;

/** @brief Decimal representation of a Toffoli count. */
std::string to_string(const ToffoliCount& c);

/**
 * @brief Parses a decimal Toffoli count.
 * @throws std::invalid_argument on non-digit input or overflow.
 */
ToffoliCount parse_toffoli_count(const std::string& s);

/** @brief Nearest double of a Toffoli count. */
double to_double(const ToffoliCount& c);

/** @brief Result of a QROM data-lookup cost minimization. */
struct QromCost {
  std::uint64_t k = 1;         ///< Power-of-two blocking factor.
  std::uint64_t toffolis = 0;  ///< ceil(L/k) + b (k - 1).
};

/**
 * @brief Minimizes ceil(L/k) + b (k - 1) over powers of two k.
 * @throws CostModelError if L < 1 or b < 1.
 */
QromCost qrom_cost(std::uint64_t L, std::uint64_t b);

/** @brief Optional expectation-value estimates that replace lambda_V and
 * lambda_P in the constraint weights. */
struct BudgetOverrides {
  std::optional<double> expect_V;
  std::optional<double> expect_P;
};

/**
 * @brief Allocation of the target precision among the three observables.
 *
 * The constraint is w_V eps_V + w_VP eps_VP + w_P eps_P = eps_targ with
 * w_V = 1 + lambda_P, w_VP = 1 and w_P = lambda_V (or the overrides).
 */
struct ErrorBudget {
  double eps_V = 0.0;
  double eps_VP = 0.0;
  double eps_P = 0.0;
  double eps_targ = 0.0;
  double weight_V = 0.0;
  double weight_VP = 0.0;
  double weight_P = 0.0;

  /** @brief Left-hand side of the constraint. */
  double constraint_value() const {
    return weight_V * eps_V + weight_VP * eps_VP + weight_P * eps_P;
  }
};

/**
 * @brief Closed-form minimizer of lambda_V/eps_V + lambda_VP/eps_VP +
 * lambda_P/eps_P on the constraint surface.
 * @throws CostModelError if any lambda, weight or eps_targ is not positive.
 */
ErrorBudget budget_errors(double lambda_V, double lambda_P, double lambda_VP,
                          double eps_targ, const BudgetOverrides& overrides = {});

/** @brief Objective sum_F lambda_F / eps_F of an allocation. */
double budget_objective(double lambda_V, double lambda_P, double lambda_VP,
                        double eps_V, double eps_P, double eps_VP);

/**
 * @brief Estimation error bound 2 Omega for rounding quality Omega.
 * @throws CostModelError unless 0 <= Omega <= 1.
 */
double qsp_error_bound(double omega);

/**
 * @brief Iterate eigenphase 2 arccos(sqrt((1 - r) / 8)) for r = <F/lambda_F>.
 * @throws CostModelError unless -1 <= r <= 1.
 */
double iterate_phase(double ratio);

/** @brief Inverse of iterate_phase. */
double iterate_ratio(double phase);

/** @brief Smallest |d phase / d ratio| over the ratio domain, 1/(2 sqrt 3). */
double min_phase_slope();

/** @brief Monomer data entering the reflection cost. */
struct SystemParams {
  double lambda_A = 0.0;  ///< Double-factorized norm of H_A (Hartree).
  double lambda_B = 0.0;
  double gap_A = 0.0;  ///< Spectral gap of H_A (Hartree).
  double gap_B = 0.0;
  double overlap_A = 1.0;  ///< |<psi_init|psi_0>|^2 of monomer A.
  double overlap_B = 1.0;
  int n_orb_A = 0;
  int n_orb_B = 0;

  /** @throws CostModelError on non-positive norms, gaps, orbital counts or
   * overlaps outside (0, 1]. */
  void validate() const;
};

/**
 * @brief Tunable constants of the cost model.
 *
 * Defaults: 16-bit coefficients and rotation angles, 2 (b_rot - 2) Toffolis
 * per Givens angle, unit prefactors. qsp_prefactor is the constant a of the
 * reflection QSP degree ceil(a (lambda_X / gap_X) ln(c Lambda_F)) and is the
 * value refitted by calibrate_qsp_prefactor().
 */
struct CalibrationConstants {
  double coefficient_bits = 16;
  double rotation_bits = 16;
  double givens_per_angle = 28;
  double qsp_prefactor = 1.0;
  double qsp_log_factor = 1.0;
  double oqpe_prefactor = 1.0;
  double asp_qpe_prefactor = 1.0;
  double asp_repeat_factor = 1.0;

  /** @brief Value by key name.
   * @throws CostModelError for an unknown key ("missing calibration key"). */
  double get(const std::string& key) const;
  /** @brief Sets a value by key name.
   * @throws CostModelError for an unknown key. */
  void set(const std::string& key, double value);
  /** @brief All keys with their current values. */
  std::map<std::string, double> to_map() const;
  /**
   * @brief Builds constants from a map; absent keys keep their defaults.
   * @throws CostModelError for unknown keys or non-positive values.
   */
  static CalibrationConstants from_map(const std::map<std::string, double>& m);
  /** @throws CostModelError if any constant is not positive. */
  void validate() const;
};

/**
 * @brief Data-loading shape of one factorized block encoding.
 *
 * outer is the number of first-step factors, inner the total number of
 * second-step factors, rot_A and rot_B the orbitals rotated on each monomer.
 */
struct FactorShape {
  std::uint64_t outer = 1;
  std::uint64_t inner = 1;
  int rot_A = 0;
  int rot_B = 0;

  /** @brief Number of loaded coefficients, outer + inner. */
  std::uint64_t entries() const { return outer + inner; }
};

/** @brief Full-rank double-factorized Hamiltonian shape on N orbitals. */
FactorShape hamiltonian_shape(int n_orb);

/** @brief Shape read from an actual block factorization. */
FactorShape shape_of(const BlockFactorization& b, int rot_A, int rot_B);

/** @brief Named block encodings making up one observable. */
struct ObservableShape {
  Observable observable = Observable::kV;
  int n_orb_A = 0;
  int n_orb_B = 0;
  std::map<std::string, FactorShape> parts;
};

/**
 * @brief Full-rank shapes from orbital counts alone.
 *
 * V has part "V"; P has part "P"; VP has parts "VP_A", "VP_B", "VP_1m",
 * "VP_1l", "V'" and "P'".
 */
ObservableShape default_observable_shape(Observable o, int n_orb_A, int n_orb_B);

/** @brief Shapes read from a factorized operator. */
ObservableShape observable_shape(const FactorizedOperator& f);

/** @brief Subroutine of a cost graph. Non-leaf nodes carry no own cost in
 * the graphs built here. */
struct CostNode {
  std::string name;
  ToffoliCount local = 0;   ///< Toffolis spent outside the children.
  std::uint64_t qubits = 0; ///< Qubits held while this node runs.
};

/** @brief parent calls child @p calls times per parent call. */
struct CostEdge {
  std::size_t parent = 0;
  std::size_t child = 0;
  std::uint64_t calls = 0;
};

/**
 * @class CostGraph
 * @brief Directed call graph of Toffoli costs with shared subroutines.
 *
 * per_call(n) = local(n) + sum over edges calls x per_call(child);
 * total() = per_call(root). Node names are unique.
 */
class CostGraph {
 public:
  using NodeId = std::size_t;

  /** @throws GraphError if the name already exists. */
  NodeId add_node(const std::string& name, ToffoliCount local = 0,
                  std::uint64_t qubits = 0);
  /** @throws GraphError for unknown node ids. */
  void add_edge(NodeId parent, NodeId child, std::uint64_t calls);
  void set_root(NodeId id) { root_ = id; }
  NodeId root() const noexcept { return root_; }

  std::size_t size() const noexcept { return nodes_.size(); }
  const CostNode& node(NodeId id) const { return nodes_.at(id); }
  CostNode& node(NodeId id) { return nodes_.at(id); }
  const std::vector<CostEdge>& edges() const noexcept { return edges_; }
  /** @brief Outgoing edges of a node in insertion order. */
  std::vector<CostEdge> children(NodeId id) const;
  /** @brief Node id by name. */
  std::optional<NodeId> find(const std::string& name) const;

  /** @throws GraphError on a cycle or an empty graph. */
  void validate() const;
  /** @throws GraphError on a cycle. */
  ToffoliCount per_call(NodeId id) const;
  /** @brief Root per-call cost. */
  ToffoliCount total() const { return per_call(root_); }
  /** @brief Number of times a node runs in one root call (sum over paths). */
  ToffoliCount total_calls(NodeId id) const;
  /** @brief Qubit high-water mark of a node and everything below it. */
  std::uint64_t qubits(NodeId id) const;
  /** @brief Nodes without children. */
  std::vector<NodeId> leaves() const;
  /** @brief per_call of a named node, or nullopt. */
  std::optional<ToffoliCount> per_call(const std::string& name) const;

 private:
  std::vector<CostNode> nodes_;
  std::vector<CostEdge> edges_;
  NodeId root_ = 0;
};

/** @brief Cost of one block encoding. */
struct BlockEncodingCost {
  ToffoliCount toffolis = 0;
  std::uint64_t ancillae = 0;  ///< Qubits beyond the system register.
};

/**
 * @brief Adds a block encoding with leaves "<name>/prepare",
 * "<name>/rotations", "<name>/givens" and "<name>/select".
 * @return id of the block-encoding node.
 */
CostGraph::NodeId add_block_encoding(CostGraph& g, const std::string& name,
                                     const FactorShape& shape,
                                     const CalibrationConstants& calib);

/** @brief Cost of a block encoding without building a graph. */
BlockEncodingCost block_encoding_cost(const FactorShape& shape,
                                      const CalibrationConstants& calib);

/** @brief Product-of-block-encodings cost of VP_4. */
struct ProductCost {
  ToffoliCount toffolis = 0;
  ToffoliCount overhead = 0;
  std::uint64_t ancillae = 0;     ///< max(log L_V, log L_P) + 2.
  std::uint64_t calls_V = 0;      ///< Invocations of B[V'].
  std::uint64_t calls_P = 0;      ///< Invocations of B[P'].
};

/**
 * @brief max(cost_V, cost_P) + 2 min(cost_V, cost_P) + wrapper overhead.
 *
 * The overhead is one Toffoli per qubit of the shared ancilla register of
 * size max(ceil log2 L_V, ceil log2 L_P) + 2. Ties call B[V'] once.
 */
ProductCost vp4_product_cost(const ToffoliCount& cost_V, const ToffoliCount& cost_P,
                             std::uint64_t L_V, std::uint64_t L_P);

/**
 * @brief Linear combination of the five costed VP terms: sum of term costs
 * plus a 7-slot coefficient QROM, with 3 extra ancillae.
 */
BlockEncodingCost combine_vp_terms(const std::vector<ToffoliCount>& term_costs,
                                   const CalibrationConstants& calib);

/** @brief Intermediate integers of an observable estimate. */
struct EstimateDetails {
  double Lambda = 0.0;            ///< lambda_F / eps_F.
  std::uint64_t iterations = 0;   ///< Outer-QPE iterate applications.
  std::uint64_t phase_bits = 0;   ///< ceil(log2 iterations).
  std::uint64_t degree_A = 0;     ///< Reflection QSP degree of monomer A.
  std::uint64_t degree_B = 0;
  std::uint64_t asp_degree_A = 0; ///< Low-precision QPE degree of A.
  std::uint64_t asp_degree_B = 0;
  std::uint64_t asp_repeats_A = 0;  ///< ceil(repeat factor / overlap^2).
  std::uint64_t asp_repeats_B = 0;
};

/** @brief Cost graph of one observable with its parameters. */
struct ObservableEstimate {
  Observable observable = Observable::kV;
  double lambda_F = 0.0;
  double eps_F = 0.0;
  EstimateDetails details;
  CostGraph graph;
};

/**
 * @brief Builds the expectation-value-estimation call graph of one observable.
 *
 * Node names: E_<F>, ASP, aQPE_A, aQPE_B, oQPE, R_pi, iQPE_A, B[H_A], iQPE_B,
 * B[H_B], R_tau, B[<F>]. Iterations are ceil(o pi Lambda / s_min) with s_min
 * from min_phase_slope(); the reflection QSP degree is
 * ceil(a (lambda_X / gap_X) ln(c Lambda)).
 *
 * @throws CostModelError for invalid parameters, lambda_F <= 0, eps_F <= 0 or
 * c Lambda <= 1.
 */
ObservableEstimate estimate_observable(Observable observable, double lambda_F,
                                       double eps_F, const SystemParams& params,
                                       const ObservableShape& shape,
                                       const CalibrationConstants& calib);

/** @brief Convenience overload taking a norm report and a budget. */
ObservableEstimate estimate_observable(const NormReport& norms,
                                       const ErrorBudget& budget,
                                       const SystemParams& params,
                                       const ObservableShape& shape,
                                       const CalibrationConstants& calib);

/** @brief Three phase-estimation runs of the supermolecular baseline. */
struct SupermolecularEstimate {
  double eps_AB = 0.0;
  double eps_A = 0.0;
  double eps_B = 0.0;
  CostGraph graph;  ///< Root "SM" with children E_AB, E_A, E_B.
};

/**
 * @brief Supermolecular cost with eps_X = eps_targ sqrt(lambda_X) / sum
 * sqrt(lambda) and ceil(pi lambda_X / (2 eps_X)) walk steps per run.
 * @throws CostModelError on non-positive inputs.
 */
SupermolecularEstimate estimate_supermolecular(double lambda_AB, double lambda_A,
                                               double lambda_B, int n_orb_AB,
                                               int n_orb_A, int n_orb_B,
                                               double eps_targ,
                                               const CalibrationConstants& calib);

/**
 * @brief Refits qsp_prefactor so that the total of one estimate matches
 * @p target_total; every other constant is kept.
 * @throws CostModelError if the target cannot be bracketed.
 */
CalibrationConstants calibrate_qsp_prefactor(Observable observable,
                                             double lambda_F, double eps_F,
                                             const SystemParams& params,
                                             const ObservableShape& shape,
                                             const CalibrationConstants& start,
                                             double target_total);

/** @brief Call-graph serialization formats. */
enum class GraphFormat { kJson, kDot };

/**
 * @brief Serializes a graph deterministically.
 *
 * JSON nests {name, per_call, calls, total, qubits, children[]} from the root,
 * with counts as decimal strings. DOT labels each node with its per-call cost,
 * total calls, total cost and qubits, and each edge with its multiplicity.
 * Both formats list nodes in depth-first preorder from the root; nodes not
 * reachable from the root are omitted.
 * @throws GraphError on a cycle.
 */
std::string emit_callgraph(const CostGraph& g, GraphFormat format);

/**
 * @brief Rebuilds a graph from the JSON of emit_callgraph.
 * @throws GraphError on malformed documents.
 */
CostGraph callgraph_from_json(const std::string& json);

/** @brief Column headers of the per-observable summary table. */
const std::vector<std::string>& summary_columns();

/**
 * @brief Tab-separated summary: one row per estimate with the per-call cost
 * of E_F, ASP, aQPE_A, aQPE_B, oQPE, R_pi, iQPE_A, B[H_A], iQPE_B, B[H_B],
 * R_tau and B[F], followed by the qubit high-water mark.
 */
std::string summary_tsv(const std::vector<ObservableEstimate>& estimates);

}  // namespace sapteve
