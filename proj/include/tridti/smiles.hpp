//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// A self-contained SMILES reader producing a heavy-atom molecular graph with
// the per-atom properties needed for featurization (degree, hydrogen counts,
// implicit valence, formal charge, radicals, hybridization, aromaticity).
//
// Chemistry perception is intentionally small: implicit hydrogens follow the
// organic-subset default valences, kekule 5- and 6-membered rings with a
// complete alternating pattern are flagged aromatic, and hybridization is
// derived from neighbor count, pi bonds and lone-pair conjugation of N/O.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tridti::chem {

enum class BondOrder { kSingle = 1, kDouble = 2, kTriple = 3, kAromatic = 4 };

enum class Hybridization { kS, kSP, kSP2, kSP3, kSP3D, kSP3D2, kOther };

struct Atom {
  std::string symbol;  // element symbol, capitalized ("C", "Cl"); "*" wildcard
  int atomic_number = 0;
  bool aromatic = false;
  bool bracket = false;
  int isotope = 0;
  int formal_charge = 0;
  int explicit_h = 0;  // hydrogens written in brackets or folded [H] atoms
  int implicit_h = 0;  // hydrogens implied by default valence
  int radical_electrons = 0;
  Hybridization hybridization = Hybridization::kOther;

  int total_h() const { return explicit_h + implicit_h; }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
};

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int degree(int atom) const;
  std::vector<int> neighbors(int atom) const;
};

// Throws ChemistryError on malformed input.
Molecule parse_smiles(std::string_view smiles);

int atomic_number(std::string_view symbol);
const char *element_symbol(int atomic_number);

} // namespace tridti::chem
