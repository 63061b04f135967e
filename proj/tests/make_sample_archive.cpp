// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The sapteve developers.

/**
 * @file make_sample_archive.cpp
 * @brief Writes a small synthetic dimer archive used by the command-line tests.
 */

#include <iostream>

#include "sapteve/io.hpp"
#include "sapteve/synthetic.hpp"

using namespace sapteve;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_sample_archive OUTPUT\n";
    return 2;
  }
  KernelDimerOptions o;
  o.n_span = 7;
  o.n_orb_A = 3;
  o.n_orb_B = 3;
  o.n_elec_A = 4;
  o.n_elec_B = 3;
  o.seed = 31;
  o.overlap_noise = 0.05;
  TensorArchive a = TensorArchive::from_dimer(make_kernel_dimer(o));
  const MonomerIntegrals ha = make_random_monomer(3, 32, 0.5);
  const MonomerIntegrals hb = make_random_monomer(3, 33, 0.5);
  a.set_matrix("h1_A", ha.h1);
  a.set_tensor("eri_A", ha.eri);
  a.set_matrix("h1_B", hb.h1);
  a.set_tensor("eri_B", hb.eri);
  a.set_indices("partition_A_core", {0});
  a.set_indices("partition_B_core", {0});
  a.set_scalar("gap_A", 0.05);
  a.set_scalar("gap_B", 0.08);
  a.set_scalar("overlap_A", 0.7);
  a.set_scalar("overlap_B", 0.9);
  save_archive(a, argv[1]);
  return 0;
}
