//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Protein structure ingestion: PDB reading, the C-alpha contact graph and
// binding-pocket atom graphs.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tridti/autograd.hpp"

namespace tridti {

struct PdbAtom {
  bool hetero = false;
  int serial = 0;
  std::string name;
  char alt_loc = ' ';
  std::string res_name;
  char chain = ' ';
  int res_seq = 0;
  char icode = ' ';
  double x = 0, y = 0, z = 0;
  std::string element;
};

// First model only. Only ATOM/HETATM/CONECT/MODEL/ENDMDL are interpreted.
struct PdbStructure {
  std::vector<PdbAtom> atoms;
  std::vector<std::pair<int, int>> conect;  // serial pairs

  // Index into atoms, or -1.
  int find_serial(int serial) const;
};

PdbStructure parse_pdb(std::string_view text);

// Unordered pairs (i < j) with distance < cutoff (or <= when inclusive),
// ordered lexicographically. Uses a uniform cell grid.
std::vector<std::pair<int, int>> neighbor_pairs(const Matrix &coords,
                                                double cutoff, bool inclusive);

inline constexpr double kResidueContactCutoff = 8.0;

struct ResidueContactGraph {
  Matrix residue_onehot;  // R x 21
  Matrix calpha_coords;   // R x 3
  std::vector<std::pair<int, int>> edges;  // both directions, i != j

  int num_residues() const { return static_cast<int>(residue_onehot.rows()); }
};

// One node per residue carrying a C-alpha; edges for distance <= cutoff.
// Repeated residue numbering keeps the first occurrence and appends a
// message to `warnings`.
ResidueContactGraph build_residue_graph(const PdbStructure &structure,
                                        double cutoff = kResidueContactCutoff,
                                        std::vector<std::string> *warnings =
                                            nullptr);
ResidueContactGraph pdb_to_residue_graph(std::string_view pdb_text,
                                         double cutoff = kResidueContactCutoff,
                                         std::vector<std::string> *warnings =
                                             nullptr);

inline constexpr double kPocketBondCutoff = 2.0;
inline constexpr std::size_t kDefaultPocketAtomCap = 2000;

struct PocketGraph {
  Matrix node_features;  // M x 31
  std::vector<std::pair<int, int>> edges;  // i < j
  std::vector<int> atom_serials;

  int num_atoms() const { return static_cast<int>(node_features.rows()); }
  Matrix adjacency() const;
  std::shared_ptr<const SparseMatrix> sparse_adjacency() const;
};

// Pockets from {"pockets": [{"atom_serials": [...]}, ...]}; a pocket may
// instead list "residues" (residue numbers, heavy atoms taken). An unknown
// serial raises IntegrityError.
std::vector<PocketGraph> pockets_from_json(std::string_view json_text,
                                           const PdbStructure &structure,
                                           const std::string &protein_id);

// Single pocket over the heavy ATOM records of the first chain, keeping
// whole residues in file order while the atom count stays within cap.
PocketGraph whole_chain_pocket(const PdbStructure &structure,
                               std::size_t cap = kDefaultPocketAtomCap);

// Reads the pocket file when present, otherwise falls back to
// whole_chain_pocket.
std::vector<PocketGraph>
load_pockets(const std::string &protein_id,
             const std::optional<std::filesystem::path> &pocket_file,
             const PdbStructure &structure,
             std::size_t fallback_cap = kDefaultPocketAtomCap);

// Residue one-letter sequence of the first chain (unknown residues as 'X').
std::string chain_sequence(const PdbStructure &structure);

} // namespace tridti
