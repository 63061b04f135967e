// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

#pragma once

#include "sapteve/tensor_core.hpp"

namespace sapteve::detail {

/**
 * @brief Core projection of full-space electrostatic-exchange coefficients
 * whose orbitals are ordered cores first on each monomer.
 *
 * Slots may hold arbitrary values, which lets tests project one slot at a
 * time.
 */
SaptCoefficients reduce_vp_coefficients(const SaptCoefficients& vp, int core_A,
                                        int active_A, int core_B,
                                        int active_B);

}  // namespace sapteve::detail
