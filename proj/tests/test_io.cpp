// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#include <catch_amalgamated.hpp>
#include <cstring>
#include <filesystem>
#include <json.hpp>

#include "sapteve/io.hpp"
#include "sapteve/synthetic.hpp"

using namespace sapteve;
using Catch::Approx;

namespace {

DimerTensors kernel_dimer(int n, unsigned seed, bool exchange = true) {
  KernelDimerOptions opt;
  opt.n_span = n;
  opt.n_orb_A = n;
  opt.n_orb_B = n;
  opt.n_elec_A = 4;
  opt.n_elec_B = 4;
  opt.seed = seed;
  opt.overlap_noise = 0.05;
  opt.with_exchange_blocks = exchange;
  return make_kernel_dimer(opt);
}

TensorArchive full_archive() {
  TensorArchive a = TensorArchive::from_dimer(kernel_dimer(3, 21));
  const auto ha = make_random_monomer(3, 4, 1.0);
  const auto hb = make_random_monomer(3, 5, 1.0);
  a.set_matrix("h1_A", ha.h1);
  a.set_tensor("eri_A", ha.eri);
  a.set_matrix("h1_B", hb.h1);
  a.set_tensor("eri_B", hb.eri);
  a.set_indices("partition_A_core", {0});
  a.set_indices("partition_B_core", {});
  a.set_scalar("gap_A", 0.25);
  a.set_scalar("gap_B", 0.5);
  a.set_scalar("overlap_A", 0.9);
  a.set_scalar("overlap_B", 0.8);
  return a;
}

ArchiveErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ArchiveError& e) {
    return e.code();
  }
  FAIL("no ArchiveError raised");
  return ArchiveErrorCode::kIo;
}

/** @brief Replaces one manifest substring by another of equal length. */
std::string patch(std::string bytes, const std::string& from, const std::string& to) {
  REQUIRE(from.size() == to.size());
  const auto pos = bytes.find(from);
  REQUIRE(pos != std::string::npos);
  bytes.replace(pos, from.size(), to);
  return bytes;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), 8 * a.size()) == 0;
}

const char* kFcidump = R"( &FCI NORB=2,NELEC=2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
  0.65D+00   1   1   1   1
  0.20D+00   2   1   1   1
  0.10E+00   2   1   2   1
  0.55       2   2   1   1
  0.70       2   2   2   2
 -1.25       1   1   0   0
  0.05       2   1   0   0
 -0.50       2   2   0   0
 -1.10       1   0   0   0
  0.75       0   0   0   0
)";

}  // namespace

TEST_CASE("Minimal one-orbital archive loads", "[io]") {
  DimerTensors t;
  t.basis = {1, 1, 2, 2, true};
  t.v = Tensor4(1, 1, 1, 1, 0.3);
  t.S = Matrix::Constant(1, 1, 0.1);
  TensorArchive a = TensorArchive::from_dimer(t);
  a.set_scalar("gap_A", 0.2);
  const TensorArchive b = parse_archive(serialize_archive(a));
  CHECK(b.basis().n_orb_A == 1);
  CHECK(b.basis().n_elec_B == 2);
  CHECK(b.tensor("v")(0, 0, 0, 0) == 0.3);
  CHECK(b.matrix("S")(0, 0) == 0.1);
  CHECK(b.scalar("gap_A") == 0.2);
  CHECK_FALSE(b.dimer().has_exchange_blocks());
  CHECK_FALSE(b.has_partition());
}

TEST_CASE("Archive round trip is bit exact", "[io]") {
  const TensorArchive a = full_archive();
  const std::string bytes = serialize_archive(a);
  const auto path = std::filesystem::temp_directory_path() / "sapteve_roundtrip.sar";
  save_archive(a, path);
  const TensorArchive b = load_archive(path);
  std::filesystem::remove(path);
  REQUIRE(b.arrays().size() == a.arrays().size());
  for (const auto& [name, arr] : a.arrays()) {
    INFO(name);
    CHECK(b.array(name).shape == arr.shape);
    CHECK(bit_equal(b.array(name).data, arr.data));
  }
  CHECK((serialize_archive(b) == bytes));
  const SpacePartition p = b.partition();
  CHECK(p.core_A == std::vector<int>{0});
  CHECK(p.active_A == std::vector<int>{1, 2});
  CHECK(p.active_B == std::vector<int>{0, 1, 2});
  CHECK(b.has_partition());
  CHECK(b.dimer().has_exchange_blocks());
}

TEST_CASE("Archive corruption is reported by category", "[io]") {
  const std::string bytes = serialize_archive(full_archive());
  CHECK(code_of([&] { parse_archive(bytes.substr(0, bytes.size() - 8)); }) == ArchiveErrorCode::kChecksum);
  std::string flipped = bytes;
  flipped[bytes.size() - 3] ^= 0x10;
  CHECK(code_of([&] { parse_archive(flipped); }) == ArchiveErrorCode::kChecksum);
  CHECK(code_of([&] { parse_archive(bytes.substr(0, 40)); }) == ArchiveErrorCode::kChecksum);
  CHECK(code_of([&] { parse_archive("not an archive at all"); }) == ArchiveErrorCode::kSchema);
  CHECK(code_of([&] { parse_archive(patch(bytes, "\"schema_version\": 1", "\"schema_version\": 2")); }) ==
        ArchiveErrorCode::kSchema);
  CHECK(code_of([&] { parse_archive(patch(bytes, "\"float64\"", "\"float32\"")); }) == ArchiveErrorCode::kSchema);
  CHECK(code_of([&] { parse_archive(patch(bytes, "\"N_A\": 3", "\"N_A\": 2")); }) == ArchiveErrorCode::kShape);
  CHECK(code_of([] { load_archive("/nonexistent/dir/archive.sar"); }) == ArchiveErrorCode::kIo);
}

TEST_CASE("Archive validation", "[io]") {
  TensorArchive a = full_archive();
  CHECK(code_of([&] { a.set_scalar("gap_C", 1.0); }) == ArchiveErrorCode::kSchema);
  CHECK(code_of([&] { a.array("v_extra"); }) == ArchiveErrorCode::kSchema);
  a.set_matrix("S", Matrix::Zero(2, 3));
  CHECK(code_of([&] { serialize_archive(a); }) == ArchiveErrorCode::kShape);
  a = full_archive();
  a.set_indices("partition_B_core", {5});
  CHECK(code_of([&] { serialize_archive(a); }) == ArchiveErrorCode::kShape);
  a = full_archive();
  Tensor4 v = a.tensor("v");
  v(0, 1, 0, 0) += 0.1;
  a.set_tensor("v", v);
  const std::string asym = serialize_archive(a);
  CHECK(code_of([&] { parse_archive(asym); }) == ArchiveErrorCode::kSymmetry);
  a = full_archive();
  Matrix h = a.matrix("h1_B");
  h(0, 2) += 0.5;
  a.set_matrix("h1_B", h);
  const std::string hasym = serialize_archive(a);
  CHECK(code_of([&] { parse_archive(hasym); }) == ArchiveErrorCode::kSymmetry);
}

TEST_CASE("Small asymmetries are projected on access", "[io]") {
  TensorArchive a = full_archive();
  Tensor4 v = a.tensor("v");
  v(0, 1, 0, 0) += 1e-13;
  a.set_tensor("v", v);
  const TensorArchive b = parse_archive(serialize_archive(a));
  CHECK(b.tensor("v")(0, 1, 0, 0) == v(0, 1, 0, 0));
  const Tensor4 w = b.dimer().v;
  CHECK(w(0, 1, 0, 0) == w(1, 0, 0, 0));
}

TEST_CASE("FCIDUMP parsing", "[io]") {
  const FcidumpData d = parse_fcidump(kFcidump);
  CHECK(d.n_orb == 2);
  CHECK(d.n_elec == 2);
  CHECK(d.core_energy == 0.75);
  CHECK(d.h1(0, 0) == -1.25);
  CHECK(d.h1(0, 1) == 0.05);
  CHECK(d.h1(1, 0) == 0.05);
  CHECK(d.eri(0, 0, 0, 0) == 0.65);
  CHECK(d.eri(0, 1, 0, 0) == 0.2);
  CHECK(d.eri(0, 0, 1, 0) == 0.2);
  CHECK(d.eri(1, 0, 0, 1) == 0.1);
  CHECK(d.eri(0, 0, 1, 1) == 0.55);
  CHECK(d.eri(1, 1, 1, 1) == 0.7);
  // Every stored value obeys the eight-fold permutational symmetry.
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
          REQUIRE(d.eri(p, q, r, s) == d.eri(q, p, r, s));
          REQUIRE(d.eri(p, q, r, s) == d.eri(r, s, p, q));
        }
  CHECK(code_of([] { parse_fcidump("1.0 1 1 1 1\n"); }) == ArchiveErrorCode::kSchema);
  CHECK(code_of([] { parse_fcidump("&FCI NORB=1, NELEC=2 &END\n 1.0 2 1 1 1\n"); }) == ArchiveErrorCode::kShape);
  CHECK(code_of([] { parse_fcidump("&FCI NELEC=2 &END\n"); }) == ArchiveErrorCode::kSchema);
  CHECK(parse_fcidump("&FCI NORB=1, NELEC=2 /\n 0.5 1 1 1 1\n").eri(0, 0, 0, 0) == 0.5);
}

TEST_CASE("FCIDUMP insertion into an archive", "[io]") {
  const FcidumpData d = parse_fcidump(kFcidump);
  TensorArchive a;
  insert_monomer(a, 'B', d);
  CHECK(a.basis().n_orb_B == 2);
  CHECK(a.basis().n_elec_B == 2);
  CHECK(a.has_monomer_hamiltonian('B'));
  const TensorArchive b = parse_archive(serialize_archive(a));
  const auto [h1, eri] = b.monomer_hamiltonian('B');
  CHECK(df_hamiltonian_norm(factorize_hamiltonian(h1, eri)) ==
        Approx(df_hamiltonian_norm(factorize_hamiltonian(d.h1, d.eri))).epsilon(1e-14));
  FcidumpData other = d;
  other.n_orb = 3;
  CHECK(code_of([&] { insert_monomer(a, 'B', other); }) == ArchiveErrorCode::kShape);
}

TEST_CASE("Factor cache round trip is bit exact", "[io]") {
  const auto t = kernel_dimer(3, 8);
  const auto set = build_majorana_coefficients(t);
  for (const FactorizedOperator& f :
       {factorize(set.V), factorize(set.P), factorize(*set.VP), truncate(factorize(*set.VP), 1e-3)}) {
    const std::string bytes = serialize_factorized(f);
    const FactorizedOperator g = parse_factorized(bytes);
    CHECK((serialize_factorized(g) == bytes));
    CHECK(g.observable == f.observable);
    CHECK(g.constant == f.constant);
    CHECK(g.truncation_threshold == f.truncation_threshold);
    REQUIRE(g.blocks.size() == f.blocks.size());
    for (const auto& [label, b] : f.blocks) {
      const Tensor4 x = reconstruct(b);
      const Tensor4 y = reconstruct(g.block(label));
      CHECK(bit_equal(x.values(), y.values()));
      CHECK(g.block(label).discarded_weight == b.discarded_weight);
    }
  }
  const std::string bytes = serialize_factorized(factorize(set.V));
  CHECK(code_of([&] { parse_factorized(bytes.substr(0, bytes.size() - 1)); }) == ArchiveErrorCode::kChecksum);
  CHECK(code_of([&] { parse_factorized(serialize_archive(full_archive())); }) == ArchiveErrorCode::kSchema);
}

TEST_CASE("Run configuration", "[io]") {
  const RunConfig def;
  CHECK(def.eps_targ == 0.0016);
  CHECK(def.observables.size() == 3);
  const RunConfig c = parse_run_config(
      R"({"eps_targ": 0.001, "truncation_threshold": 1e-4, "calibration": {"qsp_prefactor": 2.5},
          "observables": ["V", "vp"], "output_dir": "out"})");
  CHECK(c.eps_targ == 0.001);
  CHECK(c.truncation_threshold == 1e-4);
  CHECK(c.calibration_constants().qsp_prefactor == 2.5);
  CHECK(c.observables == std::vector<Observable>{Observable::kV, Observable::kVP});
  CHECK(c.output_dir == "out");
  CHECK_THROWS_AS(parse_run_config(R"({"eps_targ": 0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"epsilon": 1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"calibration": {"adder": 1}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"observables": ["Q"]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("[1, 2"), std::invalid_argument);
}

TEST_CASE("Norm report output", "[io]") {
  const auto set = build_majorana_coefficients(kernel_dimer(3, 2));
  const auto reports = all_norms(set, 0.0);
  const std::string tsv = norms_tsv(reports);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 1 + static_cast<long>(reports.size()));
  CHECK(reports.size() == 6);  // two representations for each observable
  const auto j = nlohmann::json::parse(norms_json(reports));
  REQUIRE(j.size() == reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(j[i]["total"].get<double>() == reports[i].total);
    CHECK(j[i]["observable"].get<std::string>() == to_string(reports[i].observable));
  }
  const auto b = nlohmann::json::parse(budget_json(budget_errors(65.54, 6.35, 537.3, 0.0016)));
  CHECK(b["eps_V"].get<double>() == Approx(7.29e-5).epsilon(5e-3));
}
