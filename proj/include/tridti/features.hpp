//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Fixed atom/residue feature layouts.
//
// Drug atoms (75 columns):
//   [0,44)   symbol one-hot over kDrugSymbols, last slot is "other"
//   [44,55)  heavy-atom degree one-hot 0..10
//   [55,62)  implicit valence one-hot 0..6
//   62       formal charge (scalar)
//   63       radical electrons (scalar)
//   [64,69)  hybridization one-hot sp, sp2, sp3, sp3d, sp3d2
//   69       aromatic flag
//   [70,75)  total hydrogen one-hot 0..4
//
// Pocket atoms (31 columns):
//   [0,11)   symbol one-hot over kPocketSymbols, last slot is "other"
//   [11,18)  degree one-hot 0..6
//   [18,24)  total hydrogen one-hot 0..5
//   [24,30)  implicit valence one-hot 0..5
//   30       aromatic flag
//
// Out-of-range integer properties saturate into the last slot of their block.

#pragma once

#include <array>
#include <string>
#include <string_view>

#include "tridti/autograd.hpp"
#include "tridti/smiles.hpp"

namespace tridti {

inline constexpr int kAtomFeatureDim = 75;
inline constexpr int kPocketFeatureDim = 31;
inline constexpr int kResidueTypes = 21;
inline constexpr int kElementClasses = 11;

inline constexpr std::array<std::string_view, 44> kDrugSymbols = {
    "C",  "N",  "O",  "S",  "F",  "Si", "P",  "Cl", "Br", "Mg", "Na",
    "Ca", "Fe", "As", "Al", "I",  "B",  "V",  "K",  "Tl", "Yb", "Sb",
    "Sn", "Ag", "Pd", "Co", "Se", "Ti", "Zn", "H",  "Li", "Ge", "Cu",
    "Au", "Ni", "Cd", "In", "Mn", "Zr", "Cr", "Pt", "Hg", "Pb", "other"};

inline constexpr std::array<std::string_view, kElementClasses> kPocketSymbols =
    {"C", "N", "O", "S", "F", "P", "Cl", "Br", "I", "H", "other"};

// One-letter residue codes; index 20 is "unknown".
inline constexpr std::string_view kResidueLetters = "ACDEFGHIKLMNPQRSTVWY";

struct AtomDescriptor {
  std::string symbol;
  int degree = 0;
  int implicit_valence = 0;
  int formal_charge = 0;
  int radical_electrons = 0;
  chem::Hybridization hybridization = chem::Hybridization::kOther;
  bool aromatic = false;
  int total_h = 0;
};

AtomDescriptor describe_atom(const chem::Molecule &mol, int atom);

RowVector atom_features_75(const AtomDescriptor &atom);
RowVector pocket_atom_features_31(const AtomDescriptor &atom);

// Index into kPocketSymbols (also used for 3D node element classes).
int element_class(std::string_view symbol);

// 3-letter residue name -> index in [0, 21).
int residue_type_index(std::string_view res_name);
char residue_letter(std::string_view res_name);

// Gaussian radial basis expansion with `count` centers evenly spaced on
// [0, max]; width equals the center spacing.
RowVector gaussian_rbf(double distance, double max, int count);

} // namespace tridti
