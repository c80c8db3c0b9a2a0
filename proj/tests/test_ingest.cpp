//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"
#include "tridti/error.hpp"
#include "tridti/features.hpp"
#include "tridti/ingest.hpp"
#include "tridti/smiles.hpp"
#include "tridti/structure.hpp"

namespace tridti {
namespace {

using oracle::brute_edges;

// ---------------------------------------------------------------------------
// SMILES perception against the checked-in RDKit reference

std::string hyb_name(chem::Hybridization h) {
  switch (h) {
  case chem::Hybridization::kS: return "S";
  case chem::Hybridization::kSP: return "SP";
  case chem::Hybridization::kSP2: return "SP2";
  case chem::Hybridization::kSP3: return "SP3";
  case chem::Hybridization::kSP3D: return "SP3D";
  case chem::Hybridization::kSP3D2: return "SP3D2";
  default: return "UNSPECIFIED";
  }
}

std::string describe(const AtomDescriptor &a) {
  std::ostringstream os;
  os << a.symbol << ',' << a.degree << ',' << a.implicit_valence << ','
     << a.formal_charge << ',' << a.radical_electrons << ','
     << hyb_name(a.hybridization) << ',' << int(a.aromatic) << ','
     << a.total_h;
  return os.str();
}

TEST(Smiles, MatchesToolkitReference) {
  std::ifstream in(std::string(TRIDTI_TEST_DATA) + "/atom_reference.tsv");
  ASSERT_TRUE(in);
  std::string line;
  int total = 0, matched = 0, atoms_total = 0, atoms_matched = 0;
  std::vector<std::string> misses;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    const std::string smiles = line.substr(0, tab);
    std::vector<std::string> expected;
    std::stringstream ss(line.substr(tab + 1));
    for (std::string item; std::getline(ss, item, ';');)
      expected.push_back(item);
    ++total;
    chem::Molecule mol;
    try {
      mol = chem::parse_smiles(smiles);
    } catch (const ChemistryError &) {
      misses.push_back(smiles + " (parse)");
      continue;
    }
    bool ok = mol.atoms.size() == expected.size();
    for (std::size_t i = 0; i < mol.atoms.size() && i < expected.size(); ++i) {
      ++atoms_total;
      const bool same = describe(describe_atom(mol, static_cast<int>(i))) ==
                        expected[i];
      atoms_matched += same;
      ok = ok && same;
    }
    matched += ok;
    if (!ok)
      misses.push_back(smiles);
  }
  ASSERT_GE(total, 700);
  std::string list;
  for (const auto &m : misses)
    list += "  " + m + "\n";
  // A handful of exotic valence/hybridization cases differ; everything else
  // must agree atom for atom.
  EXPECT_GE(static_cast<double>(matched) / total, 0.99) << list;
  EXPECT_GE(static_cast<double>(atoms_matched) / atoms_total, 0.998) << list;
}

TEST(Smiles, SimpleGraphs) {
  EXPECT_EQ(smiles_to_2d_graph("C").num_atoms(), 1);
  EXPECT_TRUE(smiles_to_2d_graph("C").bond_list.empty());
  const Molecular2DGraph ethane = smiles_to_2d_graph("CC");
  EXPECT_EQ(ethane.num_atoms(), 2);
  ASSERT_EQ(ethane.bond_list.size(), 1u);
  const Molecular2DGraph benzene = smiles_to_2d_graph("c1ccccc1");
  EXPECT_EQ(benzene.num_atoms(), 6);
  EXPECT_EQ(benzene.bond_list.size(), 6u);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(benzene.node_features(i, 69), 1.0);      // aromatic
    EXPECT_EQ(benzene.node_features(i, 44 + 2), 1.0);  // degree 2
    EXPECT_EQ(benzene.node_features(i, 65), 1.0);      // sp2
    EXPECT_EQ(benzene.node_features(i, 70 + 1), 1.0);  // one H
  }
}

TEST(Smiles, InvalidInputRaisesChemistryErrorWithString) {
  for (const char *bad : {"C1CC", "C(", "Xx", "", "C)C"}) {
    try {
      smiles_to_2d_graph(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const ChemistryError &e) {
      EXPECT_NE(std::string(e.what()).find(std::string("'") + bad + "'"),
                std::string::npos);
    }
  }
}

TEST(Smiles, AdjacencyIsSymmetricWithZeroDiagonal) {
  for (const std::string &s : synthetic_smiles()) {
    const Molecular2DGraph g = smiles_to_2d_graph(s);
    EXPECT_EQ(g.node_features.cols(), kAtomFeatureDim);
    EXPECT_TRUE(g.adjacency.isApprox(g.adjacency.transpose()));
    EXPECT_TRUE(g.adjacency.diagonal().isZero());
    for (auto [i, j] : g.bond_list) {
      EXPECT_LT(i, j);
      EXPECT_EQ(g.adjacency(i, j), 1.0);
    }
    EXPECT_EQ(g.adjacency.sum(), 2.0 * g.bond_list.size());
  }
}

// ---------------------------------------------------------------------------
// Feature layouts

TEST(Features, AtomFeatureBlocks) {
  AtomDescriptor c{"C", 4, 4, 0, 0, chem::Hybridization::kSP3, false, 4};
  const RowVector v = atom_features_75(c);
  ASSERT_EQ(v.size(), 75);
  EXPECT_EQ(v.head(44).sum(), 1.0);
  EXPECT_EQ(v(0), 1.0);
  EXPECT_EQ(v(44 + 4), 1.0);
  EXPECT_EQ(v(55 + 4), 1.0);
  EXPECT_EQ(v(66), 1.0);
  EXPECT_EQ(v(70 + 4), 1.0);
  AtomDescriptor odd{"Xe", 12, 9, -2, 1, chem::Hybridization::kOther, true, 7};
  const RowVector w = atom_features_75(odd);
  EXPECT_EQ(w(43), 1.0);  // other
  EXPECT_EQ(w(54), 1.0);  // degree saturates
  EXPECT_EQ(w(61), 1.0);
  EXPECT_EQ(w(62), -2.0);
  EXPECT_EQ(w(63), 1.0);
  EXPECT_EQ(w.segment(64, 5).sum(), 0.0);
  EXPECT_EQ(w(74), 1.0);
}

TEST(Features, PocketFeatureBlocks) {
  AtomDescriptor n{"N", 2, 1, 0, 0, chem::Hybridization::kSP2, true, 1};
  const RowVector v = pocket_atom_features_31(n);
  ASSERT_EQ(v.size(), 31);
  EXPECT_EQ(v(1), 1.0);
  EXPECT_EQ(v(11 + 2), 1.0);
  EXPECT_EQ(v(18 + 1), 1.0);
  EXPECT_EQ(v(24 + 1), 1.0);
  EXPECT_EQ(v(30), 1.0);
  EXPECT_EQ(v.sum(), 5.0);
}

TEST(Features, RbfMatchesDefinition) {
  const RowVector r = gaussian_rbf(1.3, 4.5, 16);
  const double step = 4.5 / 15;
  for (int k = 0; k < 16; ++k) {
    const double z = (1.3 - k * step) / step;
    EXPECT_NEAR(r(k), std::exp(-z * z), 1e-15);
  }
}

// ---------------------------------------------------------------------------
// 3D graphs

std::string molblock(const std::vector<std::string> &el, const Matrix &x,
                     const std::vector<Edge> &bonds) {
  std::string s = "fixture\n\n\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%3d%3d  0  0  0  0  0  0  0  0999 V2000\n",
                static_cast<int>(el.size()), static_cast<int>(bonds.size()));
  s += buf;
  for (std::size_t i = 0; i < el.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%10.4f%10.4f%10.4f %-3s 0  0\n", x(i, 0),
                  x(i, 1), x(i, 2), el[i].c_str());
    s += buf;
  }
  for (auto [a, b] : bonds) {
    std::snprintf(buf, sizeof buf, "%3d%3d  1  0\n", a + 1, b + 1);
    s += buf;
  }
  return s + "M  END\n";
}

TEST(Geometry3D, EdgesMatchBruteForceOnRandomConformers) {
  Rng rng(2026);
  std::uniform_int_distribution<int> count(1, 40);
  std::uniform_real_distribution<double> box(0.0, 9.0);
  const std::vector<std::string> elements{"C", "N", "O", "S", "Cl", "Se"};
  for (int trial = 0; trial < 25; ++trial) {
    const int n = count(rng);
    Matrix x(n, 3);
    std::vector<std::string> el;
    for (int i = 0; i < n; ++i) {
      // Round to the mol-block precision so both sides see the same values.
      for (int b = 0; b < 3; ++b)
        x(i, b) = std::round(box(rng) * 1e4) / 1e4;
      el.push_back(elements[static_cast<std::size_t>(i) % elements.size()]);
    }
    const Molecular3DGraph g = sdf_to_3d_graph(molblock(el, x, {}));
    const std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
    EXPECT_EQ(got.size(), g.edges.size());
    EXPECT_EQ(got, brute_edges(x, 4.5, false)) << "trial " << trial;
    EXPECT_EQ(g.node_scalars.cols(), kNodeScalarDim);
    EXPECT_EQ(g.edge_scalars.rows(), static_cast<Eigen::Index>(g.edges.size()));
    EXPECT_EQ(g.edge_vectors.rows(), 3 * static_cast<Eigen::Index>(g.edges.size()));
  }
}

TEST(Geometry3D, CutoffIsStrict) {
  Matrix x(3, 3);
  x << 0, 0, 0, 4.5, 0, 0, 3.0, 0, 0;
  const Molecular3DGraph g = sdf_to_3d_graph(molblock({"C", "C", "O"}, x, {}));
  const std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
  EXPECT_FALSE(got.count({0, 1}));
  EXPECT_TRUE(got.count({0, 2}));
  EXPECT_TRUE(got.count({2, 1}));
  Matrix far(2, 3);
  far << 0, 0, 0, 5, 0, 0;
  EXPECT_TRUE(sdf_to_3d_graph(molblock({"C", "C"}, far, {})).edges.empty());
}

TEST(Geometry3D, FeatureContent) {
  Matrix x(3, 3);
  x << 0, 0, 0, 1.5, 0, 0, 1.5, 2.0, 0;
  const Molecular3DGraph g =
      sdf_to_3d_graph(molblock({"C", "N", "H"}, x, {{0, 1}}));
  ASSERT_EQ(g.num_atoms(), 2);  // hydrogen dropped
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.node_scalars(0, 0), 1.0);
  EXPECT_EQ(g.node_scalars(1, 1), 1.0);
  // Node vectors point from the centroid to the atom.
  EXPECT_NEAR(g.node_vectors(0, 0), -1.0, 1e-12);
  EXPECT_NEAR(g.node_vectors(1, 0), 1.0, 1e-12);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(g.edge_scalars(k, kEdgeRbfCount), 1.0);  // bonded
    const auto [s, d] = g.edges[k];
    EXPECT_NEAR(g.edge_vectors(k, 0), (x(s, 0) - x(d, 0)) / 1.5, 1e-12);
  }
  const RowVector rbf = gaussian_rbf(1.5, 4.5, kEdgeRbfCount);
  EXPECT_TRUE(g.edge_scalars.block(0, 0, 1, kEdgeRbfCount).isApprox(rbf));
}

TEST(Geometry3D, ConformerMustMatchSmiles) {
  const Molecular2DGraph ref = smiles_to_2d_graph("CO");
  Matrix x(2, 3);
  x << 0, 0, 0, 1.4, 0, 0;
  EXPECT_NO_THROW(sdf_to_3d_graph(molblock({"C", "O"}, x, {{0, 1}}), 4.5, &ref));
  EXPECT_THROW(sdf_to_3d_graph(molblock({"O", "C"}, x, {{0, 1}}), 4.5, &ref),
               IntegrityError);
  Matrix y(3, 3);
  y << 0, 0, 0, 1.4, 0, 0, 2.8, 0, 0;
  EXPECT_THROW(sdf_to_3d_graph(molblock({"C", "O", "C"}, y, {}), 4.5, &ref),
               IntegrityError);
}

TEST(Geometry3D, MalformedMolblock) {
  EXPECT_THROW(parse_molblock("x\n\n\n  2  0\n    0.0\n"), ParseError);
  EXPECT_THROW(parse_molblock("only\n"), ParseError);
  std::string bad = "x\n\n\n  1  0  0  0  0  0  0  0  0  0999 V2000\n"
                    "    abc       0.0       0.0 C   0\nM  END\n";
  EXPECT_THROW(parse_molblock(bad), ParseError);
}

TEST(Geometry3D, SyntheticConformersAgreeWithSmiles) {
  for (std::size_t i = 0; i < synthetic_smiles().size(); ++i) {
    const std::string &s = synthetic_smiles()[i];
    const Molecular2DGraph ref = smiles_to_2d_graph(s);
    const Conformer c = parse_molblock(synthetic_molblock(s, i));
    EXPECT_EQ(c.elements, ref.elements) << s;
    EXPECT_EQ(c.bonds, ref.bond_list) << s;
    for (auto [a, b] : c.bonds) {
      const double d = (c.coords.row(a) - c.coords.row(b)).norm();
      EXPECT_GT(d, 1.0) << s;
      EXPECT_LT(d, 2.0) << s;
    }
  }
}

// ---------------------------------------------------------------------------
// PDB, residue graphs and pockets

std::string atom_line(int serial, const char *name, const char *res, int seq,
                      double x, double y, double z, const char *element,
                      const char *record = "ATOM  ") {
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%s%5d  %-3s %3s A%4d    %8.3f%8.3f%8.3f  1.00 20.00"
                "           %s\n",
                record, serial, name, res, seq, x, y, z, element);
  return buf;
}

TEST(Residues, ContactGraphMatchesBruteForce) {
  Rng rng(8);
  std::uniform_int_distribution<int> count(2, 60);
  std::uniform_real_distribution<double> box(0.0, 25.0);
  const char *names[] = {"ALA", "GLY", "TRP", "UNK", "SER"};
  for (int trial = 0; trial < 25; ++trial) {
    const int n = count(rng);
    Matrix ca(n, 3);
    std::string pdb;
    int serial = 1;
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < 3; ++b)
        ca(i, b) = std::round(box(rng) * 1e3) / 1e3;
      const char *res = names[i % 5];
      pdb += atom_line(serial++, "N", res, i + 1, ca(i, 0) + 1, ca(i, 1),
                       ca(i, 2), "N");
      pdb += atom_line(serial++, "CA", res, i + 1, ca(i, 0), ca(i, 1),
                       ca(i, 2), "C");
    }
    const ResidueContactGraph g = pdb_to_residue_graph(pdb);
    ASSERT_EQ(g.num_residues(), n);
    EXPECT_EQ(g.residue_onehot.cols(), kResidueTypes);
    const std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
    EXPECT_EQ(got.size(), g.edges.size());
    EXPECT_EQ(got, brute_edges(ca, 8.0, true)) << "trial " << trial;
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(g.residue_onehot.row(i).sum(), 1.0);
      EXPECT_EQ(g.residue_onehot(i, residue_type_index(names[i % 5])), 1.0);
    }
  }
}

TEST(Residues, CutoffIsInclusive) {
  std::string pdb = atom_line(1, "CA", "ALA", 1, 0, 0, 0, "C") +
                    atom_line(2, "CA", "ALA", 2, 7.9, 0, 0, "C") +
                    atom_line(3, "CA", "ALA", 3, 16.0, 0, 0, "C") +
                    atom_line(4, "CA", "ALA", 4, 24.1, 0, 0, "C");
  const ResidueContactGraph g = pdb_to_residue_graph(pdb);
  const std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
  EXPECT_TRUE(got.count({0, 1}));
  EXPECT_FALSE(got.count({1, 2}));  // 8.1
  EXPECT_FALSE(got.count({2, 3}));  // 8.1
  Matrix x(2, 3);
  x << 0, 0, 0, 8.0, 0, 0;
  EXPECT_EQ(neighbor_pairs(x, 8.0, true).size(), 1u);
  EXPECT_EQ(neighbor_pairs(x, 8.0, false).size(), 0u);
}

TEST(Residues, DuplicateNumberingWarnsAndKeepsFirst) {
  std::string pdb = atom_line(1, "CA", "ALA", 1, 0, 0, 0, "C") +
                    atom_line(2, "CA", "GLY", 1, 3, 0, 0, "C") +
                    atom_line(3, "CA", "SER", 2, 6, 0, 0, "C");
  std::vector<std::string> warnings;
  const ResidueContactGraph g = pdb_to_residue_graph(pdb, 8.0, &warnings);
  EXPECT_EQ(g.num_residues(), 2);
  EXPECT_EQ(g.residue_onehot(0, residue_type_index("ALA")), 1.0);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Residues, NoCalphaIsParseError) {
  EXPECT_THROW(pdb_to_residue_graph(atom_line(1, "N", "ALA", 1, 0, 0, 0, "N")),
               ParseError);
}

TEST(Residues, OnlyFirstModelIsRead) {
  std::string pdb = "MODEL        1\n" +
                    atom_line(1, "CA", "ALA", 1, 0, 0, 0, "C") +
                    "ENDMDL\nMODEL        2\n" +
                    atom_line(2, "CA", "ALA", 2, 1, 0, 0, "C") + "ENDMDL\n";
  EXPECT_EQ(parse_pdb(pdb).atoms.size(), 1u);
}

std::string small_protein() {
  std::string pdb;
  int serial = 1;
  for (int i = 0; i < 4; ++i) {
    const double x = 3.8 * i;
    pdb += atom_line(serial++, "N", "SER", i + 1, x - 1.2, 0.5, 0, "N");
    pdb += atom_line(serial++, "CA", "SER", i + 1, x, 0, 0, "C");
    pdb += atom_line(serial++, "C", "SER", i + 1, x + 1.3, 0.4, 0, "C");
    pdb += atom_line(serial++, "O", "SER", i + 1, x + 1.5, 1.6, 0, "O");
    pdb += atom_line(serial++, "CB", "SER", i + 1, x, -1.5, 0, "C");
    pdb += atom_line(serial++, "OG", "SER", i + 1, x, -2.9, 0.3, "O");
  }
  return pdb + atom_line(serial, "O", "HOH", 9, 30, 30, 30, "O", "HETATM");
}

TEST(Pockets, CountsPassThrough) {
  const PdbStructure s = parse_pdb(small_protein());
  std::string json = R"({"pockets": [{"atom_serials": [1,2,3,4,5,6,7,8,9,10]},
                                      {"atom_serials": [1,2,3,4,5,6,7,8,9,10,
                                                        11,12,13,14]}]})";
  const auto pockets = pockets_from_json(json, s, "P1");
  ASSERT_EQ(pockets.size(), 2u);
  EXPECT_EQ(pockets[0].num_atoms(), 10);
  EXPECT_EQ(pockets[1].num_atoms(), 14);
  for (const PocketGraph &p : pockets) {
    EXPECT_EQ(p.node_features.cols(), kPocketFeatureDim);
    const Matrix a = p.adjacency();
    EXPECT_TRUE(a.isApprox(a.transpose()));
    EXPECT_TRUE(a.diagonal().isZero());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      EXPECT_EQ(p.node_features.row(i).segment(0, 11).sum(), 1.0);
  }
  // N-CA bond of residue 1 is present, CA-OG is not.
  const Matrix a = pockets[0].adjacency();
  EXPECT_EQ(a(0, 1), 1.0);
  EXPECT_EQ(a(1, 5), 0.0);
}

TEST(Pockets, ResidueListsAndUnknownSerials) {
  const PdbStructure s = parse_pdb(small_protein());
  const auto by_res =
      pockets_from_json(R"({"pockets": [{"residues": [2, 3]}]})", s, "P1");
  ASSERT_EQ(by_res.size(), 1u);
  EXPECT_EQ(by_res[0].num_atoms(), 12);
  EXPECT_THROW(
      pockets_from_json(R"({"pockets": [{"atom_serials": [1, 999]}]})", s, "P1"),
      IntegrityError);
  EXPECT_THROW(pockets_from_json(R"({"pocket": []})", s, "P1"), ParseError);
  EXPECT_THROW(pockets_from_json("{", s, "P1"), ParseError);
}

TEST(Pockets, FallbackCoversWholeChain) {
  const PdbStructure s = parse_pdb(small_protein());
  const auto pockets = load_pockets("P1", std::nullopt, s);
  ASSERT_EQ(pockets.size(), 1u);
  EXPECT_EQ(pockets[0].num_atoms(), 24);  // ATOM records only
  const PocketGraph capped = whole_chain_pocket(s, 13);
  EXPECT_EQ(capped.num_atoms(), 12);  // whole residues only
}

TEST(Pockets, SequenceOfChain) {
  EXPECT_EQ(chain_sequence(parse_pdb(small_protein())), "SSSS");
}

// ---------------------------------------------------------------------------
// Interaction tables

TEST(Interactions, CountsAndColumnOrder) {
  const auto t = parse_interactions(
      "label,drug_id,smiles,protein_id,sequence\n"
      "1,D1,CCO,P1,MKV\n0,D2,CCN,P1,MKV\n1,D2,CCN,P2,AAG\n",
      TableFormat::kCsv);
  EXPECT_EQ(t.samples.size(), 3u);
  EXPECT_EQ(t.positives(), 2u);
  EXPECT_EQ(t.negatives(), 1u);
  EXPECT_EQ(t.drug_smiles.at("D2"), "CCN");
  EXPECT_EQ(t.samples[2].protein_id, "P2");
  const auto tsv = parse_interactions(
      "drug_id\tsmiles\tprotein_id\tsequence\tlabel\nD1\tCCO\tP1\tMKV\t0\n",
      TableFormat::kTsv);
  EXPECT_EQ(tsv.samples.size(), 1u);
}

TEST(Interactions, Errors) {
  const std::string header = "drug_id,smiles,protein_id,sequence,label\n";
  try {
    parse_interactions("", TableFormat::kCsv);
    ADD_FAILURE();
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("no data rows"), std::string::npos);
  }
  EXPECT_THROW(parse_interactions(header, TableFormat::kCsv), ParseError);
  try {
    parse_interactions(header + "D1,CCO,P1,MKV,1\nD2,CC,P1\n",
                       TableFormat::kCsv);
    ADD_FAILURE();
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
  EXPECT_THROW(parse_interactions(header + "D1,CCO,P1,MKV,2\n",
                                  TableFormat::kCsv),
               ParseError);
  EXPECT_THROW(parse_interactions(header + "D1,CCO,P1,MKV,1\nD1,CCO,P1,MKV,0\n",
                                  TableFormat::kCsv),
               IntegrityError);
  EXPECT_THROW(parse_interactions(header + "D1,CCO,P1,MKV,1\nD1,CCN,P2,MKV,0\n",
                                  TableFormat::kCsv),
               IntegrityError);
  EXPECT_THROW(parse_interactions("drug_id,smiles,label\nD1,C,1\n",
                                  TableFormat::kCsv),
               ParseError);
}

TEST(Interactions, DuplicateAgreeingRowsAreKept) {
  const auto t = parse_interactions(
      "drug_id,smiles,protein_id,sequence,label\n"
      "D1,CCO,P1,MKV,1\nD1,CCO,P1,MKV,1\n",
      TableFormat::kCsv);
  EXPECT_GE(t.samples.size(), 1u);
}

TEST(Determinism, ReparsingGivesIdenticalGraphs) {
  const std::string block = synthetic_molblock(synthetic_smiles()[4], 3);
  const Molecular3DGraph a = sdf_to_3d_graph(block);
  const Molecular3DGraph b = sdf_to_3d_graph(block);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.edge_scalars, b.edge_scalars);
  EXPECT_EQ(a.node_vectors, b.node_vectors);
}

} // namespace
} // namespace tridti
