// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include <stdexcept>
#include <string>

namespace sapteve {

/**
 * @brief Raised when tensor shapes disagree with each other or with the
 * declared dimer basis.
 */
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Raised when an input violates a declared precondition, such as a
 * symmetry flag that does not match the data.
 */
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Raised when a core/active partition is inconsistent with the dimer.
 */
class PartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Raised by the cost model for missing or degenerate inputs.
 */
class CostModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Raised when a cost graph is structurally invalid (for example,
 * when it contains a cycle).
 */
class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/**
 * @brief Raised when the brute-force oracle is asked for a Fock space that
 * exceeds its size cap, or for an unsupported operator kind.
 */
class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Archive failure categories, each mapped to a distinct error code.
 */
enum class ArchiveErrorCode {
  kIo = 10,
  kSchema = 11,
  kShape = 12,
  kChecksum = 13,
  kSymmetry = 14,
};

/**
 * @brief Raised when a tensor archive cannot be read or validated.
 */
class ArchiveError : public std::runtime_error {
 public:
  ArchiveError(ArchiveErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  /** @brief Category of the failure. */
  ArchiveErrorCode code() const noexcept { return code_; }

 private:
  ArchiveErrorCode code_;
};

}  // namespace sapteve
