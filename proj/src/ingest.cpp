//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tridti/error.hpp"

namespace tridti {

// ---------------------------------------------------------------------------
// Atom features

namespace {

void one_hot(RowVector &v, int offset, int size, int index) {
  index = std::clamp(index, 0, size - 1);
  v(offset + index) = 1.0;
}

int drug_symbol_index(std::string_view symbol) {
  for (std::size_t i = 0; i + 1 < kDrugSymbols.size(); ++i)
    if (kDrugSymbols[i] == symbol)
      return static_cast<int>(i);
  return static_cast<int>(kDrugSymbols.size()) - 1;
}

} // namespace

AtomDescriptor describe_atom(const chem::Molecule &mol, int atom) {
  const chem::Atom &a = mol.atoms[atom];
  AtomDescriptor d;
  d.symbol = a.symbol;
  d.degree = mol.degree(atom);
  d.implicit_valence = a.implicit_h;
  d.formal_charge = a.formal_charge;
  d.radical_electrons = a.radical_electrons;
  d.hybridization = a.hybridization;
  d.aromatic = a.aromatic;
  d.total_h = a.total_h();
  return d;
}

RowVector atom_features_75(const AtomDescriptor &atom) {
  RowVector v = RowVector::Zero(kAtomFeatureDim);
  one_hot(v, 0, 44, drug_symbol_index(atom.symbol));
  one_hot(v, 44, 11, atom.degree);
  one_hot(v, 55, 7, atom.implicit_valence);
  v(62) = atom.formal_charge;
  v(63) = atom.radical_electrons;
  using chem::Hybridization;
  switch (atom.hybridization) {
  case Hybridization::kSP: v(64) = 1; break;
  case Hybridization::kSP2: v(65) = 1; break;
  case Hybridization::kSP3: v(66) = 1; break;
  case Hybridization::kSP3D: v(67) = 1; break;
  case Hybridization::kSP3D2: v(68) = 1; break;
  default: break;
  }
  v(69) = atom.aromatic ? 1.0 : 0.0;
  one_hot(v, 70, 5, atom.total_h);
  return v;
}

int element_class(std::string_view symbol) {
  for (std::size_t i = 0; i + 1 < kPocketSymbols.size(); ++i)
    if (kPocketSymbols[i] == symbol)
      return static_cast<int>(i);
  return kElementClasses - 1;
}

RowVector pocket_atom_features_31(const AtomDescriptor &atom) {
  RowVector v = RowVector::Zero(kPocketFeatureDim);
  one_hot(v, 0, 11, element_class(atom.symbol));
  one_hot(v, 11, 7, atom.degree);
  one_hot(v, 18, 6, atom.total_h);
  one_hot(v, 24, 6, atom.implicit_valence);
  v(30) = atom.aromatic ? 1.0 : 0.0;
  return v;
}

int residue_type_index(std::string_view res_name) {
  static const std::unordered_map<std::string_view, int> table = [] {
    constexpr std::string_view names[] = {"ALA", "CYS", "ASP", "GLU", "PHE",
                                          "GLY", "HIS", "ILE", "LYS", "LEU",
                                          "MET", "ASN", "PRO", "GLN", "ARG",
                                          "SER", "THR", "VAL", "TRP", "TYR"};
    std::unordered_map<std::string_view, int> t;
    for (int i = 0; i < 20; ++i)
      t.emplace(names[i], i);
    return t;
  }();
  auto it = table.find(res_name);
  return it == table.end() ? kResidueTypes - 1 : it->second;
}

char residue_letter(std::string_view res_name) {
  const int idx = residue_type_index(res_name);
  return idx < 20 ? kResidueLetters[idx] : 'X';
}

RowVector gaussian_rbf(double distance, double max, int count) {
  RowVector v(count);
  const double step = max / (count - 1);
  for (int k = 0; k < count; ++k) {
    const double z = (distance - k * step) / step;
    v(k) = std::exp(-z * z);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Interaction tables

std::size_t InteractionTable::positives() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [](const InteractionSample &s) { return s.label == 1; }));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'
                        || s.front() == '\r' || s.front() == '"'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'
                        || s.back() == '\r' || s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = line.find(sep, start);
    out.push_back(trim(line.substr(start, p - start)));
    if (p == std::string_view::npos)
      break;
    start = p + 1;
  }
  return out;
}

std::optional<int> parse_label(std::string_view s) {
  if (s == "0" || s == "0.0" || s == "0.")
    return 0;
  if (s == "1" || s == "1.0" || s == "1.")
    return 1;
  return std::nullopt;
}

} // namespace

InteractionTable parse_interactions(std::string_view text, TableFormat format) {
  const char sep = format == TableFormat::kTsv ? '\t' : ',';
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::size_t start = 0, lineno = 1;
    while (start <= text.size()) {
      std::size_t p = text.find('\n', start);
      std::string_view line =
          text.substr(start, p == std::string_view::npos ? p : p - start);
      if (!trim(line).empty())
        lines.emplace_back(lineno, line);
      if (p == std::string_view::npos)
        break;
      start = p + 1;
      ++lineno;
    }
  }
  if (lines.size() < 2)
    throw ParseError("no data rows");

  const auto header = split(lines.front().second, sep);
  const std::string_view wanted[] = {"drug_id", "smiles", "protein_id",
                                     "sequence", "label"};
  int col[5];
  for (int k = 0; k < 5; ++k) {
    auto it = std::find(header.begin(), header.end(), wanted[k]);
    if (it == header.end())
      throw ParseError("header is missing column '" + std::string(wanted[k]) +
                       "'");
    col[k] = static_cast<int>(it - header.begin());
  }

  InteractionTable table;
  std::map<std::pair<std::string, std::string>, std::pair<int, std::size_t>>
      seen;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto [lineno, line] = lines[r];
    const auto fields = split(line, sep);
    const std::string where = "row " + std::to_string(lineno);
    if (fields.size() != header.size())
      throw ParseError(where + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    for (int k = 0; k < 5; ++k)
      if (fields[col[k]].empty())
        throw ParseError(where + ": empty '" + std::string(wanted[k]) +
                         "' field");
    const auto label = parse_label(fields[col[4]]);
    if (!label)
      throw ParseError(where + ": label '" + std::string(fields[col[4]]) +
                       "' is not 0 or 1");

    InteractionSample s{std::string(fields[col[0]]),
                        std::string(fields[col[2]]), *label};
    const std::string smiles(fields[col[1]]);
    const std::string sequence(fields[col[3]]);

    auto [dit, dnew] = table.drug_smiles.emplace(s.drug_id, smiles);
    if (!dnew && dit->second != smiles)
      throw IntegrityError(where + ": drug '" + s.drug_id +
                           "' appears with two different SMILES");
    auto [pit, pnew] = table.protein_sequences.emplace(s.protein_id, sequence);
    if (!pnew && pit->second != sequence)
      throw IntegrityError(where + ": protein '" + s.protein_id +
                           "' appears with two different sequences");

    auto key = std::make_pair(s.drug_id, s.protein_id);
    auto [sit, snew] = seen.emplace(key, std::make_pair(s.label, lineno));
    if (!snew && sit->second.first != s.label)
      throw IntegrityError(where + ": pair (" + s.drug_id + ", " +
                           s.protein_id + ") conflicts with the label on row " +
                           std::to_string(sit->second.second));
    table.samples.push_back(std::move(s));
  }
  return table;
}

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InteractionTable load_interactions(const std::filesystem::path &path,
                                   TableFormat format) {
  if (!std::filesystem::exists(path))
    throw ParseError("interaction table '" + path.string() + "' not found");
  return parse_interactions(read_text_file(path), format);
}

InteractionTable load_interactions(const std::filesystem::path &path) {
  return load_interactions(path, path.extension() == ".tsv"
                                     ? TableFormat::kTsv
                                     : TableFormat::kCsv);
}

// ---------------------------------------------------------------------------
// 2D graph

Molecular2DGraph smiles_to_2d_graph(std::string_view smiles) {
  const chem::Molecule mol = chem::parse_smiles(smiles);
  const int n = static_cast<int>(mol.atoms.size());
  Molecular2DGraph g;
  g.node_features.resize(n, kAtomFeatureDim);
  g.adjacency = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    g.node_features.row(i) = atom_features_75(describe_atom(mol, i));
    g.elements.push_back(mol.atoms[i].symbol);
  }
  for (const chem::Bond &b : mol.bonds) {
    const int i = std::min(b.begin, b.end), j = std::max(b.begin, b.end);
    g.bond_list.emplace_back(i, j);
    g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
  }
  std::sort(g.bond_list.begin(), g.bond_list.end());
  return g;
}

// ---------------------------------------------------------------------------
// Mol blocks and 3D graphs

namespace {

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty())
    return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::optional<int> to_int(std::string_view s) {
  s = trim(s);
  if (s.empty())
    return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    return std::nullopt;
  return v;
}

std::string_view field(std::string_view line, std::size_t start,
                       std::size_t len) {
  if (start >= line.size())
    return {};
  return line.substr(start, len);
}

} // namespace

Conformer parse_molblock(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t p = text.find('\n', start);
      std::string_view l =
          text.substr(start, p == std::string_view::npos ? p : p - start);
      if (!l.empty() && l.back() == '\r')
        l.remove_suffix(1);
      if (l.substr(0, 4) == "$$$$")
        break;
      lines.push_back(l);
      if (p == std::string_view::npos)
        break;
      start = p + 1;
    }
  }
  if (lines.size() < 4)
    throw ParseError("mol block: missing counts line");
  const std::string_view counts = lines[3];
  if (counts.find("V3000") != std::string_view::npos)
    throw ParseError("mol block: V3000 is not supported");
  const auto natoms = to_int(field(counts, 0, 3));
  const auto nbonds = to_int(field(counts, 3, 3));
  if (!natoms || !nbonds || *natoms < 0 || *nbonds < 0)
    throw ParseError("mol block: malformed counts line");
  if (lines.size() < 4 + static_cast<std::size_t>(*natoms + *nbonds))
    throw ParseError("mol block: truncated atom/bond block");

  std::vector<std::string> elements;
  std::vector<std::array<double, 3>> xyz;
  for (int i = 0; i < *natoms; ++i) {
    const std::string_view l = lines[4 + i];
    const auto x = to_double(field(l, 0, 10));
    const auto y = to_double(field(l, 10, 10));
    const auto z = to_double(field(l, 20, 10));
    if (!x || !y || !z)
      throw ParseError("mol block: atom " + std::to_string(i + 1) +
                       " is missing coordinates");
    std::string sym(trim(field(l, 31, 3)));
    if (sym.empty())
      throw ParseError("mol block: atom " + std::to_string(i + 1) +
                       " has no element symbol");
    elements.push_back(sym);
    xyz.push_back({*x, *y, *z});
  }

  std::vector<int> remap(*natoms, -1);
  Conformer c;
  for (int i = 0; i < *natoms; ++i)
    if (elements[i] != "H" && elements[i] != "D") {
      remap[i] = static_cast<int>(c.elements.size());
      c.elements.push_back(elements[i]);
    }
  c.coords.resize(static_cast<Eigen::Index>(c.elements.size()), 3);
  for (int i = 0; i < *natoms; ++i)
    if (remap[i] >= 0)
      c.coords.row(remap[i]) << xyz[i][0], xyz[i][1], xyz[i][2];

  for (int k = 0; k < *nbonds; ++k) {
    const std::string_view l = lines[4 + *natoms + k];
    const auto a = to_int(field(l, 0, 3));
    const auto b = to_int(field(l, 3, 3));
    if (!a || !b || *a < 1 || *b < 1 || *a > *natoms || *b > *natoms)
      throw ParseError("mol block: malformed bond line " +
                       std::to_string(k + 1));
    const int ia = remap[*a - 1], ib = remap[*b - 1];
    if (ia >= 0 && ib >= 0)
      c.bonds.emplace_back(std::min(ia, ib), std::max(ia, ib));
  }
  std::sort(c.bonds.begin(), c.bonds.end());
  if (c.elements.empty())
    throw ParseError("mol block: no heavy atoms");
  return c;
}

Molecular3DGraph build_3d_graph(const Conformer &conf, double cutoff) {
  const int n = static_cast<int>(conf.coords.rows());
  Molecular3DGraph g;
  g.coords = conf.coords;

  const RowVector centroid = conf.coords.colwise().mean();
  g.node_scalars = Matrix::Zero(n, kNodeScalarDim);
  g.node_vectors = Matrix::Zero(3 * n, kNodeVectorDim);
  for (int i = 0; i < n; ++i) {
    g.node_scalars(i, element_class(conf.elements[i])) = 1.0;
    const RowVector rel = conf.coords.row(i) - centroid;
    const double d = rel.norm();
    g.node_scalars.block(i, kElementClasses, 1, kNodeRbfCount) =
        gaussian_rbf(d, kNodeRbfMax, kNodeRbfCount);
    if (d > 0.0)
      for (int b = 0; b < 3; ++b)
        g.node_vectors(b * n + i, 0) = rel(b) / d;
  }

  std::set<std::pair<int, int>> bonded(conf.bonds.begin(), conf.bonds.end());
  for (auto [i, j] : neighbor_pairs(conf.coords, cutoff, false)) {
    g.edges.emplace_back(i, j);
    g.edges.emplace_back(j, i);
  }
  const int e = static_cast<int>(g.edges.size());
  g.edge_scalars = Matrix::Zero(e, kEdgeScalarDim);
  g.edge_vectors = Matrix::Zero(3 * e, kEdgeVectorDim);
  for (int k = 0; k < e; ++k) {
    const auto [src, dst] = g.edges[k];
    const RowVector rel = conf.coords.row(src) - conf.coords.row(dst);
    const double d = rel.norm();
    g.edge_scalars.block(k, 0, 1, kEdgeRbfCount) =
        gaussian_rbf(d, cutoff, kEdgeRbfCount);
    g.edge_scalars(k, kEdgeRbfCount) =
        bonded.count({std::min(src, dst), std::max(src, dst)}) ? 1.0 : 0.0;
    if (d > 0.0)
      for (int b = 0; b < 3; ++b)
        g.edge_vectors(b * e + k, 0) = rel(b) / d;
  }
  return g;
}

Molecular3DGraph sdf_to_3d_graph(std::string_view molblock, double cutoff,
                                 const Molecular2DGraph *reference) {
  const Conformer conf = parse_molblock(molblock);
  if (reference != nullptr) {
    if (static_cast<int>(conf.elements.size()) != reference->num_atoms())
      throw IntegrityError("conformer has " +
                           std::to_string(conf.elements.size()) +
                           " heavy atoms, 2D graph has " +
                           std::to_string(reference->num_atoms()));
    for (std::size_t i = 0; i < conf.elements.size(); ++i)
      if (conf.elements[i] != reference->elements[i])
        throw IntegrityError("conformer atom " + std::to_string(i + 1) +
                             " is " + conf.elements[i] +
                             " but the 2D graph has " +
                             reference->elements[i]);
  }
  return build_3d_graph(conf, cutoff);
}

} // namespace tridti
