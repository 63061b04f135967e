// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include "sapteve/costing.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

namespace sapteve {
namespace {

using json = nlohmann::ordered_json;

std::uint64_t checked_ceil(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0 ||
      x >= static_cast<double>(std::numeric_limits<std::uint64_t>::max()))
    throw CostModelError(fmt::format("{} is out of range ({})", what, x));
  return static_cast<std::uint64_t>(std::ceil(x));
}

std::uint64_t ceil_log2(std::uint64_t x) {
  std::uint64_t p = 0;
  while (p < 64 && (std::uint64_t{1} << p) < x) ++p;
  return p;
}

std::uint64_t bits(double b) { return static_cast<std::uint64_t>(std::llround(b)); }

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw CostModelError(fmt::format("{} must be positive, got {}", what, x));
}

std::string root_label(Observable o) { return "E_" + to_string(o); }
std::string block_label(Observable o) { return "B[" + to_string(o) + "]"; }

const std::vector<std::string>& calibration_keys() {
  static const std::vector<std::string> keys = {
      "coefficient_bits", "rotation_bits",   "givens_per_angle",
      "qsp_prefactor",    "qsp_log_factor",  "oqpe_prefactor",
      "asp_qpe_prefactor", "asp_repeat_factor"};
  return keys;
}

double* calibration_slot(CalibrationConstants& c, const std::string& key) {
  if (key == "coefficient_bits") return &c.coefficient_bits;
  if (key == "rotation_bits") return &c.rotation_bits;
  if (key == "givens_per_angle") return &c.givens_per_angle;
  if (key == "qsp_prefactor") return &c.qsp_prefactor;
  if (key == "qsp_log_factor") return &c.qsp_log_factor;
  if (key == "oqpe_prefactor") return &c.oqpe_prefactor;
  if (key == "asp_qpe_prefactor") return &c.asp_qpe_prefactor;
  if (key == "asp_repeat_factor") return &c.asp_repeat_factor;
  throw CostModelError(fmt::format("missing calibration key '{}'", key));
}

std::uint64_t weight_count(const BlockFactorization& b) {
  std::uint64_t n = 0;
  for (const auto& t : b.terms) {
    n += static_cast<std::uint64_t>(t.left.weights.size());
    if (!b.layout.outer_symmetric) n += static_cast<std::uint64_t>(t.right.weights.size());
  }
  return n;
}

FactorShape clamp(FactorShape s) {
  s.outer = std::max<std::uint64_t>(1, s.outer);
  s.inner = std::max<std::uint64_t>(1, s.inner);
  return s;
}

std::uint64_t tri(int n) {
  return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n + 1) / 2;
}

}  // namespace

std::string to_string(const ToffoliCount& c) { return c.str(); }

ToffoliCount parse_toffoli_count(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    throw std::invalid_argument(fmt::format("'{}' is not a Toffoli count", s));
  if (s.size() > 38) throw std::invalid_argument(fmt::format("Toffoli count '{}' overflows", s));
  return ToffoliCount(s);
}

double to_double(const ToffoliCount& c) { return c.convert_to<double>(); }

QromCost qrom_cost(std::uint64_t L, std::uint64_t b) {
  if (L < 1 || b < 1)
    throw CostModelError(fmt::format("QROM needs L >= 1 and b >= 1 (got {}, {})", L, b));
  QromCost best{1, L};
  for (std::uint64_t k = 2; k <= 2 * L && k != 0; k *= 2) {
    const std::uint64_t cost = (L + k - 1) / k + b * (k - 1);
    if (cost < best.toffolis) best = {k, cost};
    if (b * (k - 1) > best.toffolis) break;
  }
  return best;
}

ErrorBudget budget_errors(double lambda_V, double lambda_P, double lambda_VP,
                          double eps_targ, const BudgetOverrides& overrides) {
  require_positive(lambda_V, "lambda_V");
  require_positive(lambda_P, "lambda_P");
  require_positive(lambda_VP, "lambda_VP");
  require_positive(eps_targ, "eps_targ");
  const double wP_source = overrides.expect_P.value_or(lambda_P);
  const double wV_source = overrides.expect_V.value_or(lambda_V);
  ErrorBudget b;
  b.eps_targ = eps_targ;
  b.weight_V = 1.0 + wP_source;
  b.weight_VP = 1.0;
  b.weight_P = wV_source;
  require_positive(b.weight_V, "constraint weight of V");
  require_positive(b.weight_P, "constraint weight of P");
  const double denom = std::sqrt(lambda_V * b.weight_V) + std::sqrt(lambda_VP * b.weight_VP) +
                       std::sqrt(lambda_P * b.weight_P);
  b.eps_V = eps_targ / denom * std::sqrt(lambda_V / b.weight_V);
  b.eps_VP = eps_targ / denom * std::sqrt(lambda_VP / b.weight_VP);
  b.eps_P = eps_targ / denom * std::sqrt(lambda_P / b.weight_P);
  return b;
}

double budget_objective(double lambda_V, double lambda_P, double lambda_VP,
                        double eps_V, double eps_P, double eps_VP) {
  return lambda_V / eps_V + lambda_P / eps_P + lambda_VP / eps_VP;
}

double qsp_error_bound(double omega) {
  if (!(omega >= 0.0 && omega <= 1.0))
    throw CostModelError(fmt::format("rounding quality {} is outside [0, 1]", omega));
  return 2.0 * omega;
}

double iterate_phase(double ratio) {
  if (!(ratio >= -1.0 && ratio <= 1.0))
    throw CostModelError(fmt::format("expectation ratio {} is outside [-1, 1]", ratio));
  return 2.0 * std::acos(std::sqrt((1.0 - ratio) / 8.0));
}

double iterate_ratio(double phase) {
  const double c = std::cos(0.5 * phase);
  return 1.0 - 8.0 * c * c;
}

double min_phase_slope() { return 1.0 / (2.0 * std::sqrt(3.0)); }

void SystemParams::validate() const {
  require_positive(lambda_A, "lambda_A");
  require_positive(lambda_B, "lambda_B");
  require_positive(gap_A, "gap_A");
  require_positive(gap_B, "gap_B");
  if (!(overlap_A > 0.0 && overlap_A <= 1.0) || !(overlap_B > 0.0 && overlap_B <= 1.0))
    throw CostModelError("initial-state overlaps must lie in (0, 1]");
  if (n_orb_A < 1 || n_orb_B < 1) throw CostModelError("orbital counts must be positive");
}

double CalibrationConstants::get(const std::string& key) const {
  return *calibration_slot(const_cast<CalibrationConstants&>(*this), key);
}

void CalibrationConstants::set(const std::string& key, double value) {
  *calibration_slot(*this, key) = value;
}

std::map<std::string, double> CalibrationConstants::to_map() const {
  std::map<std::string, double> m;
  for (const auto& k : calibration_keys()) m[k] = get(k);
  return m;
}

CalibrationConstants CalibrationConstants::from_map(const std::map<std::string, double>& m) {
  CalibrationConstants c;
  for (const auto& [k, v] : m) c.set(k, v);
  c.validate();
  return c;
}

void CalibrationConstants::validate() const {
  for (const auto& k : calibration_keys()) require_positive(get(k), k.c_str());
}

FactorShape hamiltonian_shape(int n_orb) {
  return clamp({tri(n_orb), tri(n_orb) * static_cast<std::uint64_t>(n_orb), n_orb, 0});
}

FactorShape shape_of(const BlockFactorization& b, int rot_A, int rot_B) {
  return clamp({static_cast<std::uint64_t>(b.terms.size()), weight_count(b), rot_A, rot_B});
}

ObservableShape default_observable_shape(Observable o, int na, int nb) {
  ObservableShape s;
  s.observable = o;
  s.n_orb_A = na;
  s.n_orb_B = nb;
  const auto una = static_cast<std::uint64_t>(na);
  const auto unb = static_cast<std::uint64_t>(nb);
  const std::uint64_t rank_v = std::min(tri(na), tri(nb));
  const FactorShape v{rank_v + 2, rank_v * (una + unb) + una + unb, na, nb};
  const std::uint64_t ns = std::min(una, unb);
  const FactorShape p{ns + 2, ns + una + unb, na, nb};
  switch (o) {
    case Observable::kV:
      s.parts["V"] = clamp(v);
      break;
    case Observable::kP:
      s.parts["P"] = clamp(p);
      break;
    case Observable::kVP:
      s.parts["VP_A"] = clamp({tri(na) + 1, tri(na) * una + una, na, 0});
      s.parts["VP_B"] = clamp({tri(nb) + 1, tri(nb) * unb + unb, 0, nb});
      s.parts["VP_1m"] = clamp({rank_v, rank_v * (una + unb), na, nb});
      s.parts["VP_1l"] = clamp({una * unb, una * unb * 2 * ns, na, nb});
      s.parts["V'"] = clamp({rank_v, rank_v * (una + unb), na, nb});
      s.parts["P'"] = clamp(p);
      break;
  }
  return s;
}

ObservableShape observable_shape(const FactorizedOperator& f) {
  ObservableShape s;
  s.observable = f.observable;
  const int na = static_cast<int>(f.one_body_A.vectors.rows());
  const int nb = static_cast<int>(f.one_body_B.vectors.rows());
  s.n_orb_A = na;
  s.n_orb_B = nb;
  const auto eigA = static_cast<std::uint64_t>(f.one_body_A.values.size());
  const auto eigB = static_cast<std::uint64_t>(f.one_body_B.values.size());
  const auto ns = f.overlap ? static_cast<std::uint64_t>(f.overlap->s.size()) : 0;
  switch (f.observable) {
    case Observable::kV: {
      FactorShape v = shape_of(f.block(kBlockV), na, nb);
      s.parts["V"] = clamp({v.outer + 2, v.inner + eigA + eigB, na, nb});
      break;
    }
    case Observable::kP:
      s.parts["P"] = clamp({ns + 2, ns + eigA + eigB, na, nb});
      break;
    case Observable::kVP: {
      const FactorShape a2 = shape_of(f.block(kBlockA2), na, 0);
      const FactorShape b2 = shape_of(f.block(kBlockB2), 0, nb);
      s.parts["VP_A"] = clamp({a2.outer + 1, a2.inner + eigA, na, 0});
      s.parts["VP_B"] = clamp({b2.outer + 1, b2.inner + eigB, 0, nb});
      s.parts["VP_1m"] = shape_of(f.block(kBlock1m), na, nb);
      s.parts["VP_1l"] = shape_of(f.block(kBlock1l), na, nb);
      s.parts["V'"] = shape_of(f.block(kBlockV), na, nb);
      const auto pa = static_cast<std::uint64_t>(f.product_one_body_A->values.size());
      const auto pb = static_cast<std::uint64_t>(f.product_one_body_B->values.size());
      s.parts["P'"] = clamp({ns + 2, ns + pa + pb, na, nb});
      break;
    }
  }
  return s;
}

// ---------------------------------------------------------------- CostGraph

CostGraph::NodeId CostGraph::add_node(const std::string& name, ToffoliCount local,
                                      std::uint64_t qubits) {
  if (find(name)) throw GraphError(fmt::format("duplicate cost node '{}'", name));
  nodes_.push_back({name, local, qubits});
  return nodes_.size() - 1;
}

void CostGraph::add_edge(NodeId parent, NodeId child, std::uint64_t calls) {
  if (parent >= nodes_.size() || child >= nodes_.size())
    throw GraphError("cost edge refers to an unknown node");
  edges_.push_back({parent, child, calls});
}

std::vector<CostEdge> CostGraph::children(NodeId id) const {
  std::vector<CostEdge> out;
  for (const auto& e : edges_)
    if (e.parent == id) out.push_back(e);
  return out;
}

std::optional<CostGraph::NodeId> CostGraph::find(const std::string& name) const {
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].name == name) return i;
  return std::nullopt;
}

void CostGraph::validate() const {
  if (nodes_.empty()) throw GraphError("cost graph is empty");
  std::vector<int> state(nodes_.size(), 0);
  std::function<void(NodeId)> visit = [&](NodeId n) {
    if (state[n] == 1) throw GraphError(fmt::format("cost graph has a cycle through '{}'", nodes_[n].name));
    if (state[n] == 2) return;
    state[n] = 1;
    for (const auto& e : edges_)
      if (e.parent == n) visit(e.child);
    state[n] = 2;
  };
  for (NodeId i = 0; i < nodes_.size(); ++i) visit(i);
}

ToffoliCount CostGraph::per_call(NodeId id) const {
  validate();
  std::vector<std::optional<ToffoliCount>> memo(nodes_.size());
  std::function<ToffoliCount(NodeId)> rec = [&](NodeId n) -> ToffoliCount {
    if (memo[n]) return *memo[n];
    ToffoliCount c = nodes_[n].local;
    for (const auto& e : edges_)
      if (e.parent == n) c += ToffoliCount(e.calls) * rec(e.child);
    memo[n] = c;
    return c;
  };
  return rec(id);
}

std::optional<ToffoliCount> CostGraph::per_call(const std::string& name) const {
  const auto id = find(name);
  if (!id) return std::nullopt;
  return per_call(*id);
}

ToffoliCount CostGraph::total_calls(NodeId id) const {
  validate();
  std::vector<std::optional<ToffoliCount>> memo(nodes_.size());
  std::function<ToffoliCount(NodeId)> rec = [&](NodeId n) -> ToffoliCount {
    if (memo[n]) return *memo[n];
    ToffoliCount c = n == root_ ? ToffoliCount(1) : ToffoliCount(0);
    for (const auto& e : edges_)
      if (e.child == n) c += ToffoliCount(e.calls) * rec(e.parent);
    memo[n] = c;
    return c;
  };
  return rec(id);
}

std::uint64_t CostGraph::qubits(NodeId id) const {
  validate();
  std::function<std::uint64_t(NodeId)> rec = [&](NodeId n) -> std::uint64_t {
    std::uint64_t q = nodes_[n].qubits;
    for (const auto& e : edges_)
      if (e.parent == n) q = std::max(q, rec(e.child));
    return q;
  };
  return rec(id);
}

std::vector<CostGraph::NodeId> CostGraph::leaves() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (std::none_of(edges_.begin(), edges_.end(), [&](const CostEdge& e) { return e.parent == i; }))
      out.push_back(i);
  return out;
}

// ------------------------------------------------------- block encodings

namespace {

struct BlockParts {
  std::uint64_t prepare = 0;
  std::uint64_t rotations = 0;
  std::uint64_t givens = 0;
  std::uint64_t select = 0;
  std::uint64_t ancillae = 0;
};

BlockParts block_parts(const FactorShape& s, const CalibrationConstants& c) {
  c.validate();
  const std::uint64_t b_coef = bits(c.coefficient_bits);
  const std::uint64_t b_rot = bits(c.rotation_bits);
  const auto n_rot = static_cast<std::uint64_t>(std::max(1, s.rot_A + s.rot_B));
  BlockParts p;
  p.prepare = qrom_cost(s.outer, b_coef).toffolis + qrom_cost(s.inner, b_coef).toffolis + 2 * b_coef;
  const QromCost rot = qrom_cost(s.inner, b_rot * n_rot);
  p.rotations = 2 * rot.toffolis;
  p.givens = checked_ceil(4.0 * static_cast<double>(n_rot) * c.givens_per_angle, "Givens cost");
  p.select = 2 * n_rot;
  p.ancillae = ceil_log2(s.outer) + ceil_log2(s.inner) + 2 * b_coef + b_rot * n_rot +
               checked_ceil(std::sqrt(static_cast<double>(s.inner) * static_cast<double>(b_rot * n_rot)),
                            "QROM clean ancillae") + 1;
  return p;
}

}  // namespace

BlockEncodingCost block_encoding_cost(const FactorShape& shape, const CalibrationConstants& calib) {
  const BlockParts p = block_parts(shape, calib);
  return {ToffoliCount(p.prepare) + p.rotations + p.givens + p.select, p.ancillae};
}

CostGraph::NodeId add_block_encoding(CostGraph& g, const std::string& name,
                                     const FactorShape& shape, const CalibrationConstants& calib) {
  const BlockParts p = block_parts(shape, calib);
  const auto sys = static_cast<std::uint64_t>(2 * (shape.rot_A + shape.rot_B));
  const auto id = g.add_node(name, 0, sys + p.ancillae);
  g.add_edge(id, g.add_node(name + "/prepare", p.prepare), 1);
  g.add_edge(id, g.add_node(name + "/rotations", p.rotations), 1);
  g.add_edge(id, g.add_node(name + "/givens", p.givens), 1);
  g.add_edge(id, g.add_node(name + "/select", p.select), 1);
  return id;
}

ProductCost vp4_product_cost(const ToffoliCount& cost_V, const ToffoliCount& cost_P,
                             std::uint64_t L_V, std::uint64_t L_P) {
  ProductCost r;
  r.ancillae = std::max(ceil_log2(std::max<std::uint64_t>(1, L_V)),
                        ceil_log2(std::max<std::uint64_t>(1, L_P))) + 2;
  r.overhead = r.ancillae;
  if (cost_V >= cost_P) {
    r.calls_V = 1;
    r.calls_P = 2;
  } else {
    r.calls_V = 2;
    r.calls_P = 1;
  }
  r.toffolis = ToffoliCount(r.calls_V) * cost_V + ToffoliCount(r.calls_P) * cost_P + r.overhead;
  return r;
}

BlockEncodingCost combine_vp_terms(const std::vector<ToffoliCount>& term_costs,
                                   const CalibrationConstants& calib) {
  BlockEncodingCost c;
  for (const auto& t : term_costs) c.toffolis += t;
  c.toffolis += qrom_cost(7, bits(calib.coefficient_bits)).toffolis;
  c.ancillae = 3;
  return c;
}

// ------------------------------------------------------------ estimates

namespace {

struct ObservableBlock {
  CostGraph::NodeId id = 0;
  std::uint64_t ancillae = 0;
};

ObservableBlock add_observable_block(CostGraph& g, const ObservableShape& shape,
                                     const CalibrationConstants& calib) {
  auto part = [&](const std::string& key) -> const FactorShape& {
    auto it = shape.parts.find(key);
    if (it == shape.parts.end())
      throw CostModelError(fmt::format("observable shape lacks part '{}'", key));
    return it->second;
  };
  const std::string name = block_label(shape.observable);
  if (shape.observable != Observable::kVP) {
    const FactorShape& s = part(shape.observable == Observable::kV ? "V" : "P");
    return {add_block_encoding(g, name, s, calib), block_encoding_cost(s, calib).ancillae};
  }
  const auto sys = static_cast<std::uint64_t>(2 * (shape.n_orb_A + shape.n_orb_B));
  const auto root = g.add_node(name);
  std::uint64_t anc = 0;
  for (const char* key : {"VP_A", "VP_B", "VP_1m", "VP_1l"}) {
    const FactorShape& s = part(key);
    g.add_edge(root, add_block_encoding(g, fmt::format("B[{}]", key), s, calib), 1);
    anc = std::max(anc, block_encoding_cost(s, calib).ancillae);
  }
  const FactorShape& sv = part("V'");
  const FactorShape& sp = part("P'");
  const BlockEncodingCost cv = block_encoding_cost(sv, calib);
  const BlockEncodingCost cp = block_encoding_cost(sp, calib);
  const ProductCost prod = vp4_product_cost(cv.toffolis, cp.toffolis, sv.entries(), sp.entries());
  const auto vp4 = g.add_node("B[VP_4]", 0, sys + std::max(cv.ancillae, cp.ancillae) + prod.ancillae);
  g.add_edge(vp4, add_block_encoding(g, "B[V']", sv, calib), prod.calls_V);
  g.add_edge(vp4, add_block_encoding(g, "B[P']", sp, calib), prod.calls_P);
  g.add_edge(vp4, g.add_node("B[VP_4]/wrapper", prod.overhead), 1);
  g.add_edge(root, vp4, 1);
  anc = std::max(anc, std::max(cv.ancillae, cp.ancillae) + prod.ancillae);
  const BlockEncodingCost lcu = combine_vp_terms({}, calib);
  g.add_edge(root, g.add_node(name + "/lcu_prepare", lcu.toffolis), 1);
  anc += lcu.ancillae;
  g.node(root).qubits = sys + anc;
  return {root, anc};
}

}  // namespace

ObservableEstimate estimate_observable(Observable observable, double lambda_F, double eps_F,
                                       const SystemParams& params, const ObservableShape& shape,
                                       const CalibrationConstants& calib) {
  params.validate();
  calib.validate();
  require_positive(lambda_F, "lambda_F");
  require_positive(eps_F, "eps_F");
  if (shape.observable != observable)
    throw CostModelError("observable shape does not match the requested observable");
  ObservableEstimate est;
  est.observable = observable;
  est.lambda_F = lambda_F;
  est.eps_F = eps_F;
  EstimateDetails& d = est.details;
  d.Lambda = lambda_F / eps_F;
  const double log_term = std::log(calib.qsp_log_factor * d.Lambda);
  if (!(log_term > 0.0)) throw CostModelError("c * Lambda_F must exceed 1");
  const double pi = std::numbers::pi;
  d.iterations = checked_ceil(calib.oqpe_prefactor * pi * d.Lambda / min_phase_slope(), "iterations");
  d.phase_bits = ceil_log2(d.iterations);
  d.degree_A = checked_ceil(calib.qsp_prefactor * params.lambda_A / params.gap_A * log_term, "QSP degree A");
  d.degree_B = checked_ceil(calib.qsp_prefactor * params.lambda_B / params.gap_B * log_term, "QSP degree B");
  d.asp_degree_A = checked_ceil(calib.asp_qpe_prefactor * pi * params.lambda_A / params.gap_A, "ASP degree A");
  d.asp_degree_B = checked_ceil(calib.asp_qpe_prefactor * pi * params.lambda_B / params.gap_B, "ASP degree B");
  d.asp_repeats_A = checked_ceil(calib.asp_repeat_factor / (params.overlap_A * params.overlap_A), "ASP repeats A");
  d.asp_repeats_B = checked_ceil(calib.asp_repeat_factor / (params.overlap_B * params.overlap_B), "ASP repeats B");

  CostGraph& g = est.graph;
  const int na = params.n_orb_A;
  const int nb = params.n_orb_B;
  const auto sys = static_cast<std::uint64_t>(2 * (na + nb));
  const auto root = g.add_node(root_label(observable));
  g.set_root(root);

  const FactorShape hA = hamiltonian_shape(na);
  const FactorShape hB = hamiltonian_shape(nb);
  const std::uint64_t ancA = block_encoding_cost(hA, calib).ancillae;
  const std::uint64_t ancB = block_encoding_cost(hB, calib).ancillae;
  const auto bhA = add_block_encoding(g, "B[H_A]", hA, calib);
  const auto bhB = add_block_encoding(g, "B[H_B]", hB, calib);

  // Ground-state preparation by repeated low-precision phase estimation.
  const std::uint64_t pA = ceil_log2(d.asp_degree_A);
  const std::uint64_t pB = ceil_log2(d.asp_degree_B);
  const auto asp = g.add_node("ASP", 0, sys + std::max(ancA + pA, ancB + pB));
  const auto aqA = g.add_node("aQPE_A", 0, static_cast<std::uint64_t>(2 * na) + ancA + pA);
  const auto aqB = g.add_node("aQPE_B", 0, static_cast<std::uint64_t>(2 * nb) + ancB + pB);
  g.add_edge(aqA, bhA, d.asp_degree_A);
  g.add_edge(aqA, g.add_node("aQPE_A/readout", pA), 1);
  g.add_edge(aqB, bhB, d.asp_degree_B);
  g.add_edge(aqB, g.add_node("aQPE_B/readout", pB), 1);
  g.add_edge(asp, aqA, d.asp_repeats_A);
  g.add_edge(asp, aqB, d.asp_repeats_B);
  g.add_edge(root, asp, 1);

  // Outer phase estimation of the two-reflection iterate.
  const auto rpi = g.add_node("R_pi", 0, sys + std::max(ancA, ancB) + 4);
  const auto iqA = g.add_node("iQPE_A", 0, static_cast<std::uint64_t>(2 * na) + ancA + 2);
  const auto iqB = g.add_node("iQPE_B", 0, static_cast<std::uint64_t>(2 * nb) + ancB + 2);
  g.add_edge(iqA, bhA, d.degree_A);
  g.add_edge(iqB, bhB, d.degree_B);
  g.add_edge(rpi, iqA, 2);
  g.add_edge(rpi, iqB, 2);
  g.add_edge(rpi, g.add_node("R_pi/reflection", 2), 1);

  const ObservableBlock bf = add_observable_block(g, shape, calib);
  const auto rtau = g.add_node("R_tau", 0, sys + bf.ancillae + 1);
  g.add_edge(rtau, bf.id, 1);
  g.add_edge(rtau, g.add_node("R_tau/reflection", bf.ancillae), 1);

  const std::uint64_t q_rpi = sys + std::max(ancA, ancB) + 4;
  const std::uint64_t q_rtau = sys + bf.ancillae + 1;
  const auto oqpe = g.add_node("oQPE", 0, std::max(q_rpi, q_rtau) + d.phase_bits);
  g.add_edge(oqpe, rpi, d.iterations);
  g.add_edge(oqpe, rtau, d.iterations);
  g.add_edge(oqpe, g.add_node("oQPE/readout", d.phase_bits), 1);
  g.add_edge(root, oqpe, 1);
  g.validate();
  return est;
}

ObservableEstimate estimate_observable(const NormReport& norms, const ErrorBudget& budget,
                                       const SystemParams& params, const ObservableShape& shape,
                                       const CalibrationConstants& calib) {
  double eps = 0.0;
  switch (norms.observable) {
    case Observable::kV: eps = budget.eps_V; break;
    case Observable::kP: eps = budget.eps_P; break;
    case Observable::kVP: eps = budget.eps_VP; break;
  }
  return estimate_observable(norms.observable, norms.total, eps, params, shape, calib);
}

SupermolecularEstimate estimate_supermolecular(double lambda_AB, double lambda_A, double lambda_B,
                                               int n_orb_AB, int n_orb_A, int n_orb_B,
                                               double eps_targ, const CalibrationConstants& calib) {
  require_positive(lambda_AB, "lambda_AB");
  require_positive(lambda_A, "lambda_A");
  require_positive(lambda_B, "lambda_B");
  require_positive(eps_targ, "eps_targ");
  if (n_orb_AB < 1 || n_orb_A < 1 || n_orb_B < 1)
    throw CostModelError("orbital counts must be positive");
  SupermolecularEstimate est;
  const double sum = std::sqrt(lambda_AB) + std::sqrt(lambda_A) + std::sqrt(lambda_B);
  est.eps_AB = eps_targ * std::sqrt(lambda_AB) / sum;
  est.eps_A = eps_targ * std::sqrt(lambda_A) / sum;
  est.eps_B = eps_targ * std::sqrt(lambda_B) / sum;
  CostGraph& g = est.graph;
  const auto root = g.add_node("SM");
  g.set_root(root);
  auto run = [&](const std::string& tag, double lambda, double eps, int n) {
    const FactorShape h = hamiltonian_shape(n);
    const std::uint64_t steps = checked_ceil(std::numbers::pi * lambda / (2.0 * eps), "walk steps");
    const std::uint64_t p = ceil_log2(steps);
    const auto e = g.add_node("E_" + tag, 0,
                              static_cast<std::uint64_t>(2 * n) + block_encoding_cost(h, calib).ancillae + p);
    g.add_edge(e, add_block_encoding(g, "B[H_" + tag + "]", h, calib), steps);
    g.add_edge(e, g.add_node("E_" + tag + "/readout", p), 1);
    g.add_edge(root, e, 1);
  };
  run("AB", lambda_AB, est.eps_AB, n_orb_AB);
  run("A", lambda_A, est.eps_A, n_orb_A);
  run("B", lambda_B, est.eps_B, n_orb_B);
  g.validate();
  return est;
}

CalibrationConstants calibrate_qsp_prefactor(Observable observable, double lambda_F, double eps_F,
                                             const SystemParams& params,
                                             const ObservableShape& shape,
                                             const CalibrationConstants& start,
                                             double target_total) {
  require_positive(target_total, "calibration target");
  auto total_at = [&](double a) {
    CalibrationConstants c = start;
    c.qsp_prefactor = a;
    return to_double(estimate_observable(observable, lambda_F, eps_F, params, shape, c).graph.total());
  };
  double lo = 1e-6;
  double hi = 1e6;
  if (total_at(lo) > target_total || total_at(hi) < target_total)
    throw CostModelError(fmt::format("cannot bracket the calibration target {:.3e}", target_total));
  for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-12; ++i) {
    const double mid = std::sqrt(lo * hi);
    (total_at(mid) < target_total ? lo : hi) = mid;
  }
  CalibrationConstants out = start;
  out.qsp_prefactor = std::abs(total_at(lo) - target_total) <= std::abs(total_at(hi) - target_total) ? lo : hi;
  return out;
}

// ----------------------------------------------------------- serializers

namespace {

json node_json(const CostGraph& g, CostGraph::NodeId id, std::uint64_t calls) {
  json j;
  const ToffoliCount per = g.per_call(id);
  j["name"] = g.node(id).name;
  j["per_call"] = to_string(per);
  j["calls"] = calls;
  j["total"] = to_string(per * calls);
  j["qubits"] = g.qubits(id);
  json children = json::array();
  for (const auto& e : g.children(id)) children.push_back(node_json(g, e.child, e.calls));
  j["children"] = std::move(children);
  return j;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string emit_callgraph(const CostGraph& g, GraphFormat format) {
  g.validate();
  if (format == GraphFormat::kJson) return node_json(g, g.root(), 1).dump(2) + "\n";
  // Nodes and edges in depth-first preorder from the root, so graphs that
  // differ only in construction order serialize identically.
  std::vector<CostGraph::NodeId> order;
  std::vector<bool> seen(g.size(), false);
  std::function<void(CostGraph::NodeId)> visit = [&](CostGraph::NodeId n) {
    if (seen[n]) return;
    seen[n] = true;
    order.push_back(n);
    for (const auto& e : g.children(n)) visit(e.child);
  };
  visit(g.root());
  std::ostringstream os;
  os << "digraph callgraph {\n  node [shape=box];\n";
  for (const auto i : order) {
    const ToffoliCount per = g.per_call(i);
    const ToffoliCount calls = g.total_calls(i);
    os << fmt::format("  \"{}\" [label=\"{}\\nper call: {}\\ncalls: {}\\ntotal: {}\\nqubits: {}\"];\n",
                      dot_escape(g.node(i).name), dot_escape(g.node(i).name), to_string(per),
                      to_string(calls), to_string(per * calls), g.qubits(i));
  }
  for (const auto i : order)
    for (const auto& e : g.children(i))
      os << fmt::format("  \"{}\" -> \"{}\" [label=\"{}\"];\n", dot_escape(g.node(e.parent).name),
                        dot_escape(g.node(e.child).name), e.calls);
  os << "}\n";
  return os.str();
}

CostGraph callgraph_from_json(const std::string& text) {
  CostGraph g;
  std::function<CostGraph::NodeId(const json&)> build = [&](const json& j) -> CostGraph::NodeId {
    try {
      const std::string name = j.at("name").get<std::string>();
      const ToffoliCount per = parse_toffoli_count(j.at("per_call").get<std::string>());
      const auto qubits = j.at("qubits").get<std::uint64_t>();
      if (auto existing = g.find(name)) return *existing;
      const auto id = g.add_node(name, 0, qubits);
      ToffoliCount children_total = 0;
      for (const auto& c : j.at("children")) {
        const auto calls = c.at("calls").get<std::uint64_t>();
        const auto child = build(c);
        g.add_edge(id, child, calls);
        children_total += parse_toffoli_count(c.at("per_call").get<std::string>()) * calls;
      }
      if (children_total > per) throw GraphError(fmt::format("node '{}' costs less than its children", name));
      g.node(id).local = per - children_total;
      return id;
    } catch (const json::exception& e) {
      throw GraphError(fmt::format("malformed call graph: {}", e.what()));
    } catch (const std::invalid_argument& e) {
      throw GraphError(fmt::format("malformed call graph: {}", e.what()));
    }
  };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw GraphError(fmt::format("malformed call graph: {}", e.what()));
  }
  g.set_root(build(doc));
  g.validate();
  return g;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "observable", "lambda_F", "eps_F", "Lambda_F", "E_F",    "ASP",    "aQPE_A", "aQPE_B",
      "oQPE",       "R_pi",     "iQPE_A", "B[H_A]",  "iQPE_B", "B[H_B]", "R_tau",  "B[F]",
      "qubits"};
  return cols;
}

std::string summary_tsv(const std::vector<ObservableEstimate>& estimates) {
  std::ostringstream os;
  const auto& cols = summary_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "\t" : "") << cols[i];
  os << "\n";
  for (const auto& e : estimates) {
    const CostGraph& g = e.graph;
    auto cell = [&](const std::string& name) {
      const auto v = g.per_call(name);
      return v ? to_string(*v) : std::string("-");
    };
    os << to_string(e.observable) << "\t" << fmt::format("{:.6g}\t{:.6g}\t{:.6g}", e.lambda_F, e.eps_F, e.details.Lambda);
    for (const char* n : {"ASP", "aQPE_A", "aQPE_B", "oQPE", "R_pi", "iQPE_A", "B[H_A]", "iQPE_B", "B[H_B]", "R_tau"}) {
      if (std::string(n) == "ASP") os << "\t" << cell(root_label(e.observable));
      os << "\t" << cell(n);
    }
    os << "\t" << cell(block_label(e.observable)) << "\t" << g.qubits(g.root()) << "\n";
  }
  return os.str();
}

}  // namespace sapteve
