// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapteve/active_space.hpp"
#include "sapteve/costing.hpp"
#include "sapteve/errors.hpp"
#include "sapteve/factorization.hpp"
#include "sapteve/norms.hpp"
#include "sapteve/tensor_core.hpp"

namespace sapteve {

/** @brief Manifest schema version written and accepted by this library. */
inline constexpr int kArchiveSchemaVersion = 1;

/** @brief One named float64 array, row-major. An empty shape is a scalar. */
struct ArchiveArray {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  /** @brief Product of the extents (1 for a scalar). */
  std::size_t element_count() const;
};

/**
 * @class TensorArchive
 * @brief Dimer integrals and system data in the single-file archive format.
 *
 * File layout: the 16-byte magic "SAPTEVE-ARCHIVE\n", the manifest length as
 * a little-endian uint64, the UTF-8 JSON manifest, then the payload of
 * little-endian row-major float64 arrays. The manifest holds
 * {schema_version, dimer {N_A, N_B, eta_A, eta_B, units},
 * payload {bytes, crc32}, arrays {name: {dtype, shape, offset}}}.
 *
 * Loading checks symmetries but stores arrays unchanged, so a save/load
 * round trip is bit-exact; dimer() and monomer_hamiltonian() return the
 * projected tensors.
 *
 * Recognized arrays and shapes:
 *  - v [N_A, N_A, N_B, N_B], S [N_A, N_B]
 *  - h1_A [N_A, N_A], h1_B [N_B, N_B], eri_A [N_A]^4, eri_B [N_B]^4
 *    (chemist notation)
 *  - partition_A_core [k], partition_B_core [k] (orbital indices)
 *  - gap_A, gap_B, overlap_A, overlap_B (scalars)
 *  - v_abba [N_A, N_B, N_B, N_A], v_aaba [N_A, N_A, N_B, N_A],
 *    v_abbb [N_A, N_B, N_B, N_B] (optional mixed blocks)
 */
class TensorArchive {
 public:
  TensorArchive() = default;
  /** @brief Empty archive for the given basis. */
  explicit TensorArchive(const DimerBasis& basis) : basis_(basis) {}

  /** @brief Archive holding v, S and any mixed blocks of a dimer. */
  static TensorArchive from_dimer(const DimerTensors& t);

  const DimerBasis& basis() const noexcept { return basis_; }
  DimerBasis& basis() noexcept { return basis_; }
  const std::string& units() const noexcept { return units_; }
  const std::map<std::string, ArchiveArray>& arrays() const noexcept {
    return arrays_;
  }

  bool has(const std::string& name) const { return arrays_.count(name) != 0; }
  /** @throws ArchiveError (kSchema) if the array is absent. */
  const ArchiveArray& array(const std::string& name) const;
  /** @brief Removes an array if present. */
  void erase(const std::string& name) { arrays_.erase(name); }

  /** @throws ArchiveError (kSchema) for an unrecognized name. */
  void set(const std::string& name, ArchiveArray a);
  void set_scalar(const std::string& name, double x);
  void set_matrix(const std::string& name, const Matrix& m);
  void set_tensor(const std::string& name, const Tensor4& t);
  void set_indices(const std::string& name, const std::vector<int>& idx);

  /** @throws ArchiveError (kSchema/kShape) if absent or not a scalar. */
  double scalar(const std::string& name) const;
  /** @throws ArchiveError (kSchema/kShape) if absent or not rank 2. */
  Matrix matrix(const std::string& name) const;
  /** @throws ArchiveError (kSchema/kShape) if absent or not rank 4. */
  Tensor4 tensor(const std::string& name) const;
  /** @throws ArchiveError (kShape) for non-integral or out-of-range entries. */
  std::vector<int> indices(const std::string& name) const;

  /**
   * @brief Checks every array shape against N_A and N_B.
   * @throws ArchiveError (kShape) on mismatch, (kSchema) on unknown names.
   */
  void validate() const;

  /** @brief True when v and S are present. */
  bool has_dimer() const { return has("v") && has("S"); }

  /**
   * @brief Intermolecular tensors with input symmetries projected.
   * @throws ArchiveError (kSchema) without v or S, (kSymmetry) when an
   * asymmetry exceeds the tolerance.
   */
  DimerTensors dimer() const;

  /**
   * @brief Core/active split from the stored core lists. Every orbital not
   * listed as core is active; absent lists mean no core.
   */
  SpacePartition partition() const;
  /** @brief True when either core list is stored and nonempty. */
  bool has_partition() const;

  /**
   * @brief Monomer Hamiltonian integrals with symmetries projected.
   * @param monomer 'A' or 'B'.
   * @throws ArchiveError (kSchema) when absent, (kSymmetry) when asymmetric.
   */
  std::pair<Matrix, Tensor4> monomer_hamiltonian(char monomer) const;
  /** @brief True when h1 and eri of the monomer are present. */
  bool has_monomer_hamiltonian(char monomer) const;

 private:
  DimerBasis basis_;
  std::string units_ = "hartree";
  std::map<std::string, ArchiveArray> arrays_;
};

/** @brief Recognized archive array names. */
const std::vector<std::string>& archive_array_names();

/** @brief Serializes an archive to bytes. @throws ArchiveError (kShape). */
std::string serialize_archive(const TensorArchive& a);
/** @brief Parses bytes written by serialize_archive(). @throws ArchiveError. */
TensorArchive parse_archive(const std::string& bytes);
/** @throws ArchiveError (kIo) on write failure. */
void save_archive(const TensorArchive& a, const std::filesystem::path& path);
/** @throws ArchiveError with the code of the first failed check. */
TensorArchive load_archive(const std::filesystem::path& path);

/** @brief CRC-32 (IEEE) of a byte string. */
std::uint32_t crc32(const std::string& bytes);

/** @brief Monomer Hamiltonian read from an FCIDUMP file. */
struct FcidumpData {
  int n_orb = 0;
  int n_elec = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  Matrix h1;
  Tensor4 eri;  ///< Chemist notation (pq|rs), eight-fold symmetric.
};

/**
 * @brief Parses FCIDUMP text (namelist header, then "value i j k l" lines
 * with 1-based indices; k = l = 0 for one-body, all zero for the core
 * energy). Permutational symmetry fills every equivalent entry.
 * @throws ArchiveError (kSchema) on malformed input, (kShape) on indices
 * beyond NORB.
 */
FcidumpData parse_fcidump(const std::string& text);
/** @throws ArchiveError (kIo) if the file cannot be read. */
FcidumpData read_fcidump(const std::filesystem::path& path);

/**
 * @brief Stores an FCIDUMP Hamiltonian as h1_X / eri_X of an archive.
 * @throws ArchiveError (kShape) if the orbital count differs from a nonzero
 * N_X already recorded.
 */
void insert_monomer(TensorArchive& a, char monomer, const FcidumpData& d);

/** @brief Serializes a factorized operator bit-exactly. */
std::string serialize_factorized(const FactorizedOperator& f);
/** @throws ArchiveError on malformed or corrupted input. */
FactorizedOperator parse_factorized(const std::string& bytes);
void save_factorized(const FactorizedOperator& f, const std::filesystem::path& path);
FactorizedOperator load_factorized(const std::filesystem::path& path);

/** @brief Options of a command-line run. */
struct RunConfig {
  double eps_targ = 0.0016;  ///< Target precision in Hartree (chemical accuracy).
  double truncation_threshold = 0.0;
  std::map<std::string, double> calibration;  ///< Overrides by key.
  std::vector<Observable> observables{Observable::kV, Observable::kP, Observable::kVP};
  std::filesystem::path output_dir = ".";

  /** @throws std::invalid_argument unless eps_targ > 0 and threshold >= 0. */
  void validate() const;
  /** @brief Calibration constants with the overrides applied. */
  CalibrationConstants calibration_constants() const;
};

/**
 * @brief Reads a JSON run configuration; absent keys keep their defaults.
 *
 * Keys: eps_targ, truncation_threshold, calibration {key: value},
 * observables ["V", "P", "VP"], output_dir.
 * @throws std::invalid_argument on malformed content.
 */
RunConfig parse_run_config(const std::string& json_text);
/** @throws ArchiveError (kIo) if the file cannot be read. */
RunConfig load_run_config(const std::filesystem::path& path);

/** @brief JSON array of norm reports with components in label order. */
std::string norms_json(const std::vector<NormReport>& reports);
/** @brief Tab-separated table, one row per report. */
std::string norms_tsv(const std::vector<NormReport>& reports);
/** @brief JSON object of an error budget. */
std::string budget_json(const ErrorBudget& b);

/** @brief Reads a whole file. @throws ArchiveError (kIo). */
std::string read_file(const std::filesystem::path& path);
/** @brief Writes a whole file. @throws ArchiveError (kIo). */
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace sapteve
