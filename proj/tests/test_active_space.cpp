// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <catch_amalgamated.hpp>

#include "sapteve/active_space.hpp"
#include "sapteve/fock_oracle.hpp"
#include "sapteve/synthetic.hpp"

using namespace sapteve;

namespace {

DimerTensors dimer(int na, int nb, int ea, int eb, unsigned seed) {
  KernelDimerOptions o;
  o.n_span = na + nb + 1;
  o.n_orb_A = na;
  o.n_orb_B = nb;
  o.n_elec_A = ea;
  o.n_elec_B = eb;
  o.seed = seed;
  return make_kernel_dimer(o);
}

/** @brief Columns are embedded active basis states with @p n_elec electrons. */
Matrix embedding(const MonomerFockSpace& full, const std::vector<int>& core,
                 const std::vector<int>& active, int n_elec) {
  const MonomerFockSpace act(static_cast<int>(active.size()));
  const std::vector<int> counts = act.electron_counts();
  Matrix E = Matrix::Zero(full.dim(), act.dim());
  for (Eigen::Index x = 0; x < act.dim(); ++x) {
    if (counts[static_cast<std::size_t>(x)] != n_elec) continue;
    Vector e = Vector::Zero(act.dim());
    e(x) = 1.0;
    E.col(x) = embed_frozen_core(full, core, active, e);
  }
  return E;
}

/** @brief Projector onto active basis states with @p n_elec electrons. */
Matrix sector_projector(const MonomerFockSpace& act, int n_elec) {
  const std::vector<int> counts = act.electron_counts();
  Matrix P = Matrix::Zero(act.dim(), act.dim());
  for (Eigen::Index x = 0; x < act.dim(); ++x)
    if (counts[static_cast<std::size_t>(x)] == n_elec) P(x, x) = 1.0;
  return P;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct EmbeddingCase {
  int na;
  int nb;
  int ea;
  int eb;
  SpacePartition part;
};

/** @brief Largest entry of E^T O_full E - Q O_active Q on the active sector. */
double embedding_error(const DimerTensors& t, const EmbeddingCase& c,
                       Observable o) {
  const DimerFockSpace full(c.na, c.nb);
  const int ta = static_cast<int>(c.part.active_A.size());
  const int tb = static_cast<int>(c.part.active_B.size());
  const DimerFockSpace act(ta, tb);
  const int eta_a = c.part.active_electrons_A(t.basis);
  const int eta_b = c.part.active_electrons_B(t.basis);
  const Matrix E = kron(embedding(full.A(), c.part.core_A, c.part.active_A, eta_a),
                        embedding(full.B(), c.part.core_B, c.part.active_B, eta_b));
  const Matrix Q = kron(sector_projector(act.A(), eta_a),
                        sector_projector(act.B(), eta_b));
  const MajoranaCoefficientSet fc = build_majorana_coefficients(t);
  const SaptCoefficients& full_c =
      o == Observable::kV ? fc.V : (o == Observable::kP ? fc.P : *fc.VP);
  SaptCoefficients act_c;
  if (o == Observable::kV) act_c = renormalize_electrostatic(t, c.part);
  if (o == Observable::kP) act_c = renormalize_exchange(t, c.part);
  if (o == Observable::kVP) act_c = renormalize_vp(t, c.part);
  REQUIRE(act_c.space == SpaceTag::kActive);
  const Matrix of = Matrix(majorana_operator(full_c, full));
  const Matrix oa = Matrix(majorana_operator(act_c, act));
  const Matrix projected = E.transpose() * of * E;
  const Matrix reduced = Q * oa * Q;
  return (projected - reduced).cwiseAbs().maxCoeff() /
         std::max(1.0, projected.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("Frozen-core embedding preserves the active state",
          "[active_space]") {
  const MonomerFockSpace full(3);
  const MonomerFockSpace act(2);
  const Vector psi = random_sector_state(act, 2, std::nullopt, 5);
  const Vector phi = embed_frozen_core(full, {1}, {0, 2}, psi);
  REQUIRE(phi.norm() == Catch::Approx(1.0).margin(1e-14));
  const Vector counts = Eigen::Map<const Eigen::VectorXi>(
                            full.electron_counts().data(), full.dim())
                            .cast<double>();
  REQUIRE(phi.cwiseAbs2().dot(counts) == Catch::Approx(4.0).margin(1e-12));
  REQUIRE_THROWS_AS(embed_frozen_core(full, {1}, {1, 2}, psi), OracleError);
  REQUIRE_THROWS_AS(embed_frozen_core(full, {0}, {1}, psi), OracleError);
}

TEST_CASE("Active operators equal core-projected full operators",
          "[active_space]") {
  std::vector<EmbeddingCase> cases;
  cases.push_back({3, 3, 4, 3, {{0}, {1, 2}, {0}, {1, 2}}});
  cases.push_back({3, 3, 3, 4, {{2}, {0, 1}, {1}, {2, 0}}});
  cases.push_back({3, 2, 5, 2, {{0, 1}, {2}, {}, {0, 1}}});
  cases.push_back({2, 3, 3, 3, {{0}, {1}, {0}, {1, 2}}});
  cases.push_back({2, 3, 2, 4, {{}, {0, 1}, {0}, {1, 2}}});
  unsigned seed = 300;
  for (const EmbeddingCase& c : cases) {
    const DimerTensors t = dimer(c.na, c.nb, c.ea, c.eb, seed++);
    INFO("NA=" << c.na << " NB=" << c.nb << " seed=" << seed - 1);
    CHECK(embedding_error(t, c, Observable::kV) < 1e-10);
    CHECK(embedding_error(t, c, Observable::kP) < 1e-10);
    CHECK(embedding_error(t, c, Observable::kVP) < 1e-9);
  }
}

TEST_CASE("Expectation values survive the core projection", "[active_space]") {
  const DimerTensors t = dimer(3, 3, 4, 3, 41);
  const SpacePartition part{{0}, {1, 2}, {0}, {1, 2}};
  const DimerFockSpace full(3, 3);
  const DimerFockSpace act(2, 2);
  const MajoranaCoefficientSet fc = build_majorana_coefficients(t);
  const MajoranaCoefficientSet ac = build_active_coefficients(t, part);
  REQUIRE(ac.VP.has_value());
  const Vector pa = random_sector_state(act.A(), 2, 0, 7);
  const Vector pb = random_sector_state(act.B(), 1, 1, 8);
  const Vector psi_act = act.product_state(pa, pb);
  const Vector psi_full = full.product_state(
      embed_frozen_core(full.A(), {0}, {1, 2}, pa),
      embed_frozen_core(full.B(), {0}, {1, 2}, pb));
  const struct {
    const SaptCoefficients* f;
    const SaptCoefficients* a;
    double tol;
  } pairs[] = {{&fc.V, &ac.V, 1e-10}, {&fc.P, &ac.P, 1e-10},
               {&*fc.VP, &*ac.VP, 1e-9}};
  for (const auto& p : pairs) {
    const double ef = expectation(majorana_operator(*p.f, full), psi_full);
    const double ea = expectation(majorana_operator(*p.a, act), psi_act);
    CHECK(ea == Catch::Approx(ef).margin(p.tol));
  }
}

TEST_CASE("Empty cores leave the coefficients unchanged", "[active_space]") {
  const DimerTensors t = dimer(2, 2, 2, 2, 9);
  const SpacePartition part = SpacePartition::all_active(t.basis);
  const DimerFockSpace space(2, 2);
  const MajoranaCoefficientSet fc = build_majorana_coefficients(t);
  const MajoranaCoefficientSet ac = build_active_coefficients(t, part);
  CHECK(max_abs_difference(majorana_operator(fc.V, space),
                           majorana_operator(ac.V, space)) < 1e-12);
  CHECK(max_abs_difference(majorana_operator(fc.P, space),
                           majorana_operator(ac.P, space)) < 1e-12);
  CHECK(max_abs_difference(majorana_operator(*fc.VP, space),
                           majorana_operator(*ac.VP, space)) < 1e-12);
}

TEST_CASE("Virtual orbitals are removed before contraction", "[active_space]") {
  const DimerTensors t = dimer(4, 3, 4, 2, 17);
  const SpacePartition part{{0}, {1, 2}, {}, {0, 2}};
  const DimerTensors kept = restrict_orbitals(t, {0, 1, 2}, {0, 2});
  const SpacePartition kept_part{{0}, {1, 2}, {}, {0, 1}};
  const DimerFockSpace act(2, 2);
  CHECK(max_abs_difference(
            majorana_operator(renormalize_vp(t, part), act),
            majorana_operator(renormalize_vp(kept, kept_part), act)) < 1e-13);
}

TEST_CASE("Invalid partitions are rejected", "[active_space]") {
  const DimerTensors t = dimer(3, 3, 4, 2, 3);
  CHECK_THROWS_AS(renormalize_exchange(t, {{0}, {0, 1}, {}, {0}}),
                  PartitionError);
  CHECK_THROWS_AS(renormalize_exchange(t, {{0}, {3}, {}, {0}}), PartitionError);
  CHECK_THROWS_AS(renormalize_exchange(t, {{0, 1, 2}, {}, {}, {0}}),
                  PartitionError);
  CHECK_THROWS_AS(renormalize_exchange(t, {{0}, {1}, {0, 1, 2}, {}}),
                  PartitionError);
  // Active space with no active electrons cannot absorb the core terms.
  CHECK_THROWS_AS(renormalize_electrostatic(t, {{0, 1}, {2}, {0}, {1}}),
                  PartitionError);
  CHECK_NOTHROW(renormalize_exchange(t, {{0, 1}, {2}, {0}, {1}}));
}

TEST_CASE("Active operators are Hermitian and number conserving",
          "[active_space]") {
  const DimerTensors t = dimer(3, 3, 4, 4, 77);
  const SpacePartition part{{0}, {1, 2}, {2}, {0, 1}};
  const MajoranaCoefficientSet ac = build_active_coefficients(t, part);
  const DimerFockSpace act(2, 2);
  for (const SaptCoefficients* c : {&ac.V, &ac.P, &*ac.VP}) {
    const SparseOperator op = majorana_operator(*c, act);
    CHECK(hermiticity_error(op) < 1e-12);
    CHECK(number_commutator_error(op, act) < 1e-12);
  }
  const Tensor4& K = ac.VP->block(kBlock1k);
  CHECK(max_abs_diff(K, -1.0 * K.permuted({1, 0, 2, 3})) < 1e-15);
  CHECK(max_abs_diff(K, -1.0 * K.permuted({0, 1, 3, 2})) < 1e-15);
}

TEST_CASE("Zero overlap gives zero exchange operators", "[active_space]") {
  DimerTensors t = dimer(3, 3, 4, 4, 78);
  t.S.setZero();
  for (auto* blk : {&*t.v_abba, &*t.v_aaba, &*t.v_abbb}) *blk *= 0.0;
  const SpacePartition part{{0}, {1, 2}, {0}, {1, 2}};
  const DimerFockSpace act(2, 2);
  CHECK(max_abs_entry(majorana_operator(renormalize_exchange(t, part), act)) ==
        0.0);
  CHECK(max_abs_entry(majorana_operator(renormalize_vp(t, part), act)) ==
        0.0);
}

TEST_CASE("Fully frozen monomers leave scalar electrostatic terms",
          "[active_space]") {
  DimerTensors t = dimer(2, 2, 4, 2, 79);
  double core = 0.0;
  for (int i = 0; i < 2; ++i) core += 4.0 * t.v(i, i, 0, 0);

  const SaptCoefficients frozen =
      renormalize_electrostatic(t, {{0, 1}, {}, {0}, {}});
  CHECK(frozen.n_orb_A() == 0);
  CHECK(frozen.n_orb_B() == 0);
  CHECK(frozen.constant == Catch::Approx(core).margin(1e-12));

  // With one active B orbital the core field stays as 2 sum_i v(ii, 11) F+.
  t.basis.n_elec_B = 3;
  const SaptCoefficients half =
      renormalize_electrostatic(t, {{0, 1}, {}, {0}, {1}});
  double field = 0.0;
  for (int i = 0; i < 2; ++i) field += 2.0 * t.v(i, i, 1, 1);
  REQUIRE(half.n_orb_B() == 1);
  CHECK(half.one_body_B(0, 0) == Catch::Approx(field).margin(1e-12));
  CHECK(half.constant == Catch::Approx(core + field).margin(1e-12));
}

TEST_CASE("Frozen-core Hamiltonian reproduces embedded energies", "[active_space]") {
  const MonomerIntegrals m = make_random_monomer(3, 17, 0.3);
  const std::vector<int> core{1};
  const std::vector<int> active{0, 2};
  const FrozenCoreHamiltonian fc = frozen_core_hamiltonian(m.h1, m.eri, core, active);
  const MonomerFockSpace full(3);
  const MonomerFockSpace act(2);
  const SparseOperator H = monomer_hamiltonian(m.h1, m.eri, full);
  const SparseOperator Ha = monomer_hamiltonian(fc.h1, fc.eri, act, fc.core_energy);
  for (int n_elec : {1, 2, 3}) {
    const Vector psi = random_sector_state(act, n_elec, std::nullopt, 30u + static_cast<unsigned>(n_elec));
    const Vector phi = embed_frozen_core(full, core, active, psi);
    CHECK(expectation(Ha, psi) == Catch::Approx(expectation(H, phi)).margin(1e-12));
  }
  const FrozenCoreHamiltonian none = frozen_core_hamiltonian(m.h1, m.eri, {}, {0, 1, 2});
  CHECK(none.core_energy == 0.0);
  CHECK((none.h1 - m.h1).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(frozen_core_hamiltonian(m.h1, m.eri, {0}, {0, 1}), PartitionError);
}
