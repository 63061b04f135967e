// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <catch_amalgamated.hpp>

#include "sapteve/fock_oracle.hpp"
#include "sapteve/synthetic.hpp"

using namespace sapteve;

namespace {

DimerTensors dimer(int na, int nb, unsigned seed) {
  KernelDimerOptions o;
  o.n_span = na + nb + 1;
  o.n_orb_A = na;
  o.n_orb_B = nb;
  o.n_elec_A = na;
  o.n_elec_B = nb;
  o.seed = seed;
  return make_kernel_dimer(o);
}

}  // namespace

TEST_CASE("Jordan-Wigner operators satisfy canonical anticommutation",
          "[fock_oracle]") {
  const MonomerFockSpace s(2);
  const SparseOperator I = s.identity();
  for (int m = 0; m < s.n_modes(); ++m)
    for (int n = 0; n < s.n_modes(); ++n) {
      const SparseOperator ac = s.creation(m) * s.annihilation(n) +
                                s.annihilation(n) * s.creation(m);
      const SparseOperator cc = s.creation(m) * s.creation(n) +
                                s.creation(n) * s.creation(m);
      if (m == n) {
        REQUIRE(max_abs_difference(ac, I) == 0.0);
      } else {
        REQUIRE(max_abs_entry(ac) == 0.0);
      }
      REQUIRE(max_abs_entry(cc) == 0.0);
    }
}

TEST_CASE("Majorana pairs relate to excitations", "[fock_oracle]") {
  const MonomerFockSpace s(3);
  for (int sp = 0; sp < 2; ++sp)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const SparseOperator& M = s.majorana_pair(sp, a, b);
        REQUIRE(hermiticity_error(M) == 0.0);
        // Symmetric sum: E_ab + E_ba = delta_ab + M_ab + M_ba.
        SparseOperator lhs = s.excitation(sp, a, b) + s.excitation(sp, b, a);
        SparseOperator rhs = M + s.majorana_pair(sp, b, a);
        if (a == b) rhs += s.identity();
        REQUIRE(max_abs_difference(lhs, rhs) < 1e-15);
      }
}

TEST_CASE("Coefficient operators equal excitation operators",
          "[fock_oracle]") {
  const std::vector<std::pair<int, int>> shapes{{1, 1}, {2, 1}, {1, 2},
                                                {2, 2}, {3, 2}};
  unsigned seed = 100;
  for (const auto& [na, nb] : shapes) {
    const DimerTensors t = dimer(na, nb, seed++);
    const DimerFockSpace space(na, nb);
    const MajoranaCoefficientSet c = build_majorana_coefficients(t);
    REQUIRE(c.VP.has_value());
    const struct {
      Observable o;
      const SaptCoefficients* coeffs;
    } cases[] = {{Observable::kV, &c.V},
                 {Observable::kP, &c.P},
                 {Observable::kVP, &*c.VP}};
    for (const auto& tc : cases) {
      INFO(to_string(tc.o) << " NA=" << na << " NB=" << nb);
      const SparseOperator ref = excitation_operator(tc.o, t, space);
      const SparseOperator maj = majorana_operator(*tc.coeffs, space);
      const double scale = std::max(1.0, max_abs_entry(ref));
      REQUIRE(max_abs_difference(ref, maj) <= 1e-12 * scale);
      REQUIRE(hermiticity_error(maj) <= 1e-12 * scale);
      REQUIRE(number_commutator_error(maj, space) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("Hermitized and real-symmetric forms agree on real product states",
          "[fock_oracle]") {
  const DimerTensors t = dimer(2, 2, 41);
  const DimerFockSpace space(2, 2);
  const auto sym = ExcitationForm::kRealSymmetric;
  const auto her = ExcitationForm::kHermitized;
  const std::vector<std::pair<std::string, std::pair<SparseOperator,
                                                     SparseOperator>>>
      ops{{"V", {excitation_operator(Observable::kV, t, space, sym),
                 excitation_operator(Observable::kV, t, space, her)}},
          {"P", {excitation_operator(Observable::kP, t, space, sym),
                 excitation_operator(Observable::kP, t, space, her)}},
          {"dressed", {vp_dressed_terms(t, space, sym),
                       vp_dressed_terms(t, space, her)}}};
  for (const auto& [name, pair] : ops) {
    for (unsigned k = 0; k < 4; ++k) {
      const Vector psi = space.product_state(
          random_sector_state(space.A(), 2, 0, 10 + k),
          random_sector_state(space.B(), 2, 0, 20 + k));
      INFO(name << " state " << k);
      REQUIRE(expectation(pair.second, psi) ==
              Catch::Approx(expectation(pair.first, psi)).margin(1e-12));
    }
  }
}

TEST_CASE("Monomer Hamiltonian conserves particle number", "[fock_oracle]") {
  const MonomerIntegrals m = make_random_monomer(3, 9);
  const MonomerFockSpace s(3);
  const SparseOperator H = monomer_hamiltonian(m.h1, m.eri, s);
  REQUIRE(hermiticity_error(H) < 1e-13);
  const SparseOperator N = s.number_operator();
  REQUIRE(max_abs_entry(SparseOperator(H * N - N * H)) < 1e-12);
  // One electron: H reduces to h1.
  const GroundState g1 = ground_state(H, s, 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.h1);
  REQUIRE(g1.energy == Catch::Approx(es.eigenvalues()(0)).margin(1e-12));
  const GroundState g2 = ground_state(H, s, 2, 0);
  REQUIRE(g2.state.norm() == Catch::Approx(1.0));
  REQUIRE(expectation(H, g2.state) == Catch::Approx(g2.energy).margin(1e-12));
}

TEST_CASE("Oracle rejects oversized spaces and bad states", "[fock_oracle]") {
  REQUIRE_THROWS_AS(DimerFockSpace(5, 4), OracleError);
  const DimerFockSpace space(1, 1);
  const SparseOperator I = space.identity();
  REQUIRE_THROWS_AS(first_order_energy(Vector::Ones(space.dim()), I, I, I),
                    OracleError);
  REQUIRE_THROWS_AS(random_sector_state(space.A(), 5, std::nullopt, 1),
                    OracleError);
}

TEST_CASE("Complete shared span cancels the dressed terms", "[fock_oracle]") {
  KernelDimerOptions o;
  o.n_span = 2;
  o.n_orb_A = 2;
  o.n_orb_B = 2;
  o.seed = 77;
  const DimerFockSpace space(2, 2);
  REQUIRE(complete_basis_residual(make_kernel_dimer(o), space) <= 1e-10);
  o.overlap_noise = 1e-3;
  REQUIRE(complete_basis_residual(make_kernel_dimer(o), space) > 1e-4);
}
