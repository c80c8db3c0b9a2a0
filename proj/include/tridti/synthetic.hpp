//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Deterministic demo dataset in the raw directory layout: interaction table,
// conformers, structures and pocket files. Used by the CLI demo command, the
// tests and the desk-scale acceptance run.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tridti {

struct SyntheticOptions {
  std::uint64_t seed = 7;
  int num_drugs = 30;   // at most the size of the built-in SMILES list
  int num_proteins = 10;
  int min_residues = 40;
  int max_residues = 70;
  // Keep n positives and n negatives; 0 keeps every pair.
  int balanced_pairs = 100;
  // Drugs listed in the table without a conformer file.
  int drugs_without_conformer = 0;
  // Proteins without a pocket file (whole-chain fallback).
  int proteins_without_pockets = 0;
  // Write train.csv/test.csv (80/20) instead of interactions.csv.
  bool fixed_split = false;
};

// Built-in drug-like SMILES.
const std::vector<std::string> &synthetic_smiles();

// A pair is positive iff drug index mod 3 equals protein index mod 3. Each
// protein family (index mod 3) has its own residue composition.
void write_synthetic_dataset(const std::filesystem::path &dir,
                             const SyntheticOptions &options = {});

// V2000 block with crude 3D coordinates for a SMILES (heavy atoms in SMILES
// order, bond lengths near 1.5 A).
std::string synthetic_molblock(const std::string &smiles, std::uint64_t seed);

} // namespace tridti
