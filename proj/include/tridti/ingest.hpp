//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tridti/autograd.hpp"
#include "tridti/features.hpp"
#include "tridti/structure.hpp"

namespace tridti {

using Edge = std::pair<int, int>;

struct InteractionSample {
  std::string drug_id;
  std::string protein_id;
  int label = 0;

  friend bool operator==(const InteractionSample &,
                         const InteractionSample &) = default;
};

// Parsed interaction table. Each drug/protein id maps to exactly one
// SMILES/sequence across the whole table.
struct InteractionTable {
  std::vector<InteractionSample> samples;
  std::map<std::string, std::string> drug_smiles;
  std::map<std::string, std::string> protein_sequences;

  std::size_t positives() const;
  std::size_t negatives() const { return samples.size() - positives(); }
};

enum class TableFormat { kCsv, kTsv };

// Header: drug_id,smiles,protein_id,sequence,label (any column order).
// Throws ParseError naming the line for malformed rows, IntegrityError for
// a (drug, protein) pair listed with conflicting labels.
InteractionTable parse_interactions(std::string_view text, TableFormat format);
InteractionTable load_interactions(const std::filesystem::path &path,
                                   TableFormat format);
// Format from the file extension (.tsv or .csv).
InteractionTable load_interactions(const std::filesystem::path &path);

struct Molecular2DGraph {
  Matrix node_features;  // N x 75
  Matrix adjacency;      // N x N, symmetric 0/1, zero diagonal
  std::vector<Edge> bond_list;  // i < j
  std::vector<std::string> elements;

  int num_atoms() const { return static_cast<int>(node_features.rows()); }
};

Molecular2DGraph smiles_to_2d_graph(std::string_view smiles);

// Node/edge feature layout of the 3D graph.
inline constexpr int kNodeRbfCount = 16;
inline constexpr double kNodeRbfMax = 10.0;
inline constexpr int kEdgeRbfCount = 16;
inline constexpr int kNodeScalarDim = kElementClasses + kNodeRbfCount;
inline constexpr int kNodeVectorDim = 1;
inline constexpr int kEdgeScalarDim = kEdgeRbfCount + 1;
inline constexpr int kEdgeVectorDim = 1;
inline constexpr double kDrugEdgeCutoff = 4.5;

struct Molecular3DGraph {
  Matrix coords;        // N x 3, Angstrom
  Matrix node_scalars;  // N x kNodeScalarDim
  Matrix node_vectors;  // 3N x kNodeVectorDim, stacked (see autograd.hpp)
  std::vector<Edge> edges;  // directed (src, dst); both directions present
  Matrix edge_scalars;  // E x kEdgeScalarDim
  Matrix edge_vectors;  // 3E x kEdgeVectorDim, stacked

  int num_atoms() const { return static_cast<int>(coords.rows()); }
};

// Heavy atoms of a V2000 mol block. Hydrogens are dropped and bonds
// re-indexed.
struct Conformer {
  std::vector<std::string> elements;
  Matrix coords;
  std::vector<Edge> bonds;  // i < j
};

Conformer parse_molblock(std::string_view molblock);

// Builds the geometric graph. Edges are the pairs strictly closer than
// `cutoff`. When `reference` is given the heavy-atom count and element order
// must match it (IntegrityError otherwise).
Molecular3DGraph build_3d_graph(const Conformer &conformer,
                                double cutoff = kDrugEdgeCutoff);
Molecular3DGraph sdf_to_3d_graph(std::string_view molblock,
                                 double cutoff = kDrugEdgeCutoff,
                                 const Molecular2DGraph *reference = nullptr);

struct DrugRecord {
  std::string drug_id;
  std::string smiles;
  Molecular2DGraph graph2d;
  std::optional<Molecular3DGraph> graph3d;
};

struct ProteinRecord {
  std::string protein_id;
  std::string sequence;
  std::vector<PocketGraph> pockets;
  std::optional<ResidueContactGraph> residue_graph;
};

std::string read_text_file(const std::filesystem::path &path);

} // namespace tridti
