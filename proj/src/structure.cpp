//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/structure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "tridti/error.hpp"
#include "tridti/features.hpp"
#include "tridti/ingest.hpp"

namespace tridti {
namespace {

std::string_view column(std::string_view line, std::size_t start,
                        std::size_t len) {
  if (start >= line.size())
    return {};
  return line.substr(start, len);
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, int &out) {
  s = strip(s);
  if (s.empty())
    return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_double(std::string_view s, double &out) {
  s = strip(s);
  if (s.empty())
    return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::string normalize_element(std::string_view e) {
  std::string out(strip(e));
  if (out.empty())
    return out;
  out[0] = static_cast<char>(std::toupper(out[0]));
  for (std::size_t i = 1; i < out.size(); ++i)
    out[i] = static_cast<char>(std::tolower(out[i]));
  return out;
}

// Element from the atom name when columns 77-78 are blank.
std::string element_from_name(std::string_view raw_name) {
  // Two-letter elements are right-justified starting in column 13.
  if (raw_name.size() >= 2 && raw_name[0] != ' '
      && !std::isdigit(static_cast<unsigned char>(raw_name[0]))) {
    const std::string two = normalize_element(raw_name.substr(0, 2));
    if (two == "Fe" || two == "Zn" || two == "Mg" || two == "Ca"
        || two == "Cl" || two == "Br" || two == "Na" || two == "Mn"
        || two == "Cu" || two == "Se")
      return two;
  }
  for (char c : raw_name)
    if (std::isalpha(static_cast<unsigned char>(c)))
      return std::string(1, static_cast<char>(std::toupper(c)));
  return "X";
}

bool is_hydrogen(const PdbAtom &a) {
  return a.element == "H" || a.element == "D";
}

} // namespace

int PdbStructure::find_serial(int serial) const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].serial == serial)
      return static_cast<int>(i);
  return -1;
}

PdbStructure parse_pdb(std::string_view text) {
  PdbStructure s;
  std::size_t start = 0, lineno = 0;
  bool in_model = false, model_done = false;
  while (start <= text.size()) {
    const std::size_t p = text.find('\n', start);
    std::string_view line =
        text.substr(start, p == std::string_view::npos ? p : p - start);
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    const std::string_view rec = column(line, 0, 6);

    if (rec.substr(0, 5) == "MODEL") {
      if (in_model || model_done)
        model_done = true;
      in_model = true;
    } else if (rec.substr(0, 6) == "ENDMDL") {
      model_done = true;
    } else if (!model_done && (rec == "ATOM  " || rec == "HETATM"
                               || rec.substr(0, 4) == "ATOM")) {
      PdbAtom a;
      a.hetero = rec == "HETATM";
      if (!parse_int(column(line, 6, 5), a.serial))
        throw ParseError("PDB line " + std::to_string(lineno) +
                         ": bad atom serial");
      const std::string_view raw_name = column(line, 12, 4);
      a.name = std::string(strip(raw_name));
      a.alt_loc = line.size() > 16 ? line[16] : ' ';
      a.res_name = std::string(strip(column(line, 17, 3)));
      a.chain = line.size() > 21 ? line[21] : ' ';
      if (!parse_int(column(line, 22, 4), a.res_seq))
        throw ParseError("PDB line " + std::to_string(lineno) +
                         ": bad residue number");
      a.icode = line.size() > 26 ? line[26] : ' ';
      if (!parse_double(column(line, 30, 8), a.x)
          || !parse_double(column(line, 38, 8), a.y)
          || !parse_double(column(line, 46, 8), a.z))
        throw ParseError("PDB line " + std::to_string(lineno) +
                         ": missing coordinates");
      a.element = normalize_element(column(line, 76, 2));
      if (a.element.empty())
        a.element = element_from_name(raw_name);
      s.atoms.push_back(std::move(a));
    } else if (rec == "CONECT") {
      int from = 0;
      if (parse_int(column(line, 6, 5), from)) {
        for (std::size_t c = 11; c + 5 <= line.size() && c < 31; c += 5) {
          int to = 0;
          if (parse_int(column(line, c, 5), to) && to != from)
            s.conect.emplace_back(std::min(from, to), std::max(from, to));
        }
      }
    }
    if (p == std::string_view::npos)
      break;
    start = p + 1;
  }
  std::sort(s.conect.begin(), s.conect.end());
  s.conect.erase(std::unique(s.conect.begin(), s.conect.end()),
                 s.conect.end());
  return s;
}

std::vector<std::pair<int, int>> neighbor_pairs(const Matrix &coords,
                                                double cutoff, bool inclusive) {
  const Eigen::Index n = coords.rows();
  std::vector<std::pair<int, int>> out;
  if (n < 2)
    return out;
  const double cell = std::max(cutoff, 1e-6);
  const RowVector lo = coords.colwise().minCoeff();
  using Key = std::tuple<long, long, long>;
  std::map<Key, std::vector<int>> grid;
  auto key_of = [&](Eigen::Index i) {
    return Key{static_cast<long>(std::floor((coords(i, 0) - lo(0)) / cell)),
               static_cast<long>(std::floor((coords(i, 1) - lo(1)) / cell)),
               static_cast<long>(std::floor((coords(i, 2) - lo(2)) / cell))};
  };
  for (Eigen::Index i = 0; i < n; ++i)
    grid[key_of(i)].push_back(static_cast<int>(i));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [kx, ky, kz] = key_of(i);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find(Key{kx + dx, ky + dy, kz + dz});
          if (it == grid.end())
            continue;
          for (int j : it->second) {
            if (j <= i)
              continue;
            const double d = (coords.row(i) - coords.row(j)).norm();
            if (inclusive ? d <= cutoff : d < cutoff)
              out.emplace_back(static_cast<int>(i), j);
          }
        }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ResidueContactGraph build_residue_graph(const PdbStructure &structure,
                                        double cutoff,
                                        std::vector<std::string> *warnings) {
  std::vector<const PdbAtom *> cas;
  std::set<std::tuple<char, int, char>> seen;
  for (const PdbAtom &a : structure.atoms) {
    if (a.hetero || a.name != "CA" || a.element != "C")
      continue;
    if (a.alt_loc != ' ' && a.alt_loc != 'A')
      continue;
    if (!seen.insert({a.chain, a.res_seq, a.icode}).second) {
      if (warnings != nullptr)
        warnings->push_back("duplicate residue " + std::string(1, a.chain) +
                            ":" + std::to_string(a.res_seq) +
                            " ignored (keeping first occurrence)");
      continue;
    }
    cas.push_back(&a);
  }
  if (cas.empty())
    throw ParseError("no CA atoms found");

  const int r = static_cast<int>(cas.size());
  ResidueContactGraph g;
  g.residue_onehot = Matrix::Zero(r, kResidueTypes);
  g.calpha_coords.resize(r, 3);
  for (int i = 0; i < r; ++i) {
    g.residue_onehot(i, residue_type_index(cas[i]->res_name)) = 1.0;
    g.calpha_coords.row(i) << cas[i]->x, cas[i]->y, cas[i]->z;
  }
  for (auto [i, j] : neighbor_pairs(g.calpha_coords, cutoff, true)) {
    g.edges.emplace_back(i, j);
    g.edges.emplace_back(j, i);
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

ResidueContactGraph pdb_to_residue_graph(std::string_view pdb_text,
                                         double cutoff,
                                         std::vector<std::string> *warnings) {
  return build_residue_graph(parse_pdb(pdb_text), cutoff, warnings);
}

// ---------------------------------------------------------------------------
// Pockets

Matrix PocketGraph::adjacency() const {
  Matrix a = Matrix::Zero(num_atoms(), num_atoms());
  for (auto [i, j] : edges)
    a(i, j) = a(j, i) = 1.0;
  return a;
}

std::shared_ptr<const SparseMatrix> PocketGraph::sparse_adjacency() const {
  auto a = std::make_shared<SparseMatrix>(num_atoms(), num_atoms());
  std::vector<Eigen::Triplet<double>> t;
  for (auto [i, j] : edges) {
    t.emplace_back(i, j, 1.0);
    t.emplace_back(j, i, 1.0);
  }
  a->setFromTriplets(t.begin(), t.end());
  return a;
}

namespace {

int default_valence(std::string_view element) {
  if (element == "C") return 4;
  if (element == "N") return 3;
  if (element == "O" || element == "S" || element == "Se") return 2;
  if (element == "P") return 3;
  return 0;
}

bool aromatic_ring_atom(std::string_view res, std::string_view name) {
  static const std::map<std::string_view, std::set<std::string_view>> rings =
      {{"PHE", {"CG", "CD1", "CD2", "CE1", "CE2", "CZ"}},
       {"TYR", {"CG", "CD1", "CD2", "CE1", "CE2", "CZ"}},
       {"TRP",
        {"CG", "CD1", "CD2", "NE1", "CE2", "CE3", "CZ2", "CZ3", "CH2"}},
       {"HIS", {"CG", "ND1", "CD2", "CE1", "NE2"}}};
  auto it = rings.find(res);
  return it != rings.end() && it->second.count(name) != 0;
}

// Atoms carrying one double bond in a standard residue (outside aromatic
// rings).
bool has_double_bond(std::string_view res, std::string_view name) {
  if (name == "C" || name == "O")
    return true;
  static const std::map<std::string_view, std::set<std::string_view>> table =
      {{"ASN", {"CG", "OD1"}}, {"GLN", {"CD", "OE1"}},
       {"ASP", {"CG", "OD1"}}, {"GLU", {"CD", "OE1"}},
       {"ARG", {"CZ", "NH2"}}};
  auto it = table.find(res);
  return it != table.end() && it->second.count(name) != 0;
}

// Covalent topology of the whole structure: CONECT records plus any
// non H-H atom pair closer than kPocketBondCutoff.
struct Topology {
  std::vector<std::vector<int>> neighbors;
  bool explicit_hydrogens = false;
};

Topology build_topology(const PdbStructure &s) {
  const int n = static_cast<int>(s.atoms.size());
  Topology t;
  t.neighbors.resize(n);
  Matrix coords(n, 3);
  for (int i = 0; i < n; ++i) {
    coords.row(i) << s.atoms[i].x, s.atoms[i].y, s.atoms[i].z;
    t.explicit_hydrogens = t.explicit_hydrogens || is_hydrogen(s.atoms[i]);
  }
  std::set<std::pair<int, int>> bonds;
  for (auto [i, j] : neighbor_pairs(coords, kPocketBondCutoff, false))
    if (!(is_hydrogen(s.atoms[i]) && is_hydrogen(s.atoms[j])))
      bonds.insert({i, j});
  std::unordered_map<int, int> by_serial;
  for (int i = 0; i < n; ++i)
    by_serial.emplace(s.atoms[i].serial, i);
  for (auto [a, b] : s.conect) {
    auto ia = by_serial.find(a), ib = by_serial.find(b);
    if (ia != by_serial.end() && ib != by_serial.end())
      bonds.insert({std::min(ia->second, ib->second),
                    std::max(ia->second, ib->second)});
  }
  for (auto [i, j] : bonds) {
    t.neighbors[i].push_back(j);
    t.neighbors[j].push_back(i);
  }
  return t;
}

AtomDescriptor describe_pdb_atom(const PdbStructure &s, const Topology &t,
                                 int i) {
  const PdbAtom &a = s.atoms[i];
  AtomDescriptor d;
  d.symbol = a.element;
  int heavy = 0, hydrogens = 0;
  for (int j : t.neighbors[i])
    (is_hydrogen(s.atoms[j]) ? hydrogens : heavy) += 1;
  d.degree = heavy;
  d.aromatic = aromatic_ring_atom(a.res_name, a.name);
  if (t.explicit_hydrogens) {
    d.total_h = hydrogens;
    d.implicit_valence = 0;
  } else {
    const int pi =
        (d.aromatic || has_double_bond(a.res_name, a.name)) ? 1 : 0;
    const int h = std::max(0, default_valence(a.element) - heavy - pi);
    d.total_h = h;
    d.implicit_valence = h;
  }
  return d;
}

PocketGraph pocket_from_atoms(const PdbStructure &s, const Topology &t,
                              const std::vector<int> &members) {
  PocketGraph g;
  const int m = static_cast<int>(members.size());
  g.node_features.resize(m, kPocketFeatureDim);
  std::unordered_map<int, int> local;
  for (int k = 0; k < m; ++k) {
    local.emplace(members[k], k);
    g.node_features.row(k) =
        pocket_atom_features_31(describe_pdb_atom(s, t, members[k]));
    g.atom_serials.push_back(s.atoms[members[k]].serial);
  }
  for (int k = 0; k < m; ++k)
    for (int j : t.neighbors[members[k]]) {
      auto it = local.find(j);
      if (it != local.end() && k < it->second)
        g.edges.emplace_back(k, it->second);
    }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

} // namespace

std::vector<PocketGraph> pockets_from_json(std::string_view json_text,
                                           const PdbStructure &structure,
                                           const std::string &protein_id) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError("pocket file for '" + protein_id + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("pockets")
      || !doc["pockets"].is_array())
    throw ParseError("pocket file for '" + protein_id +
                     "' lacks a \"pockets\" array");

  const Topology topo = build_topology(structure);
  std::unordered_map<int, int> by_serial;
  for (int i = 0; i < static_cast<int>(structure.atoms.size()); ++i)
    by_serial.emplace(structure.atoms[i].serial, i);

  std::vector<PocketGraph> out;
  int index = 0;
  for (const auto &p : doc["pockets"]) {
    std::vector<int> members;
    if (p.contains("atom_serials")) {
      for (const auto &v : p["atom_serials"]) {
        if (!v.is_number_integer())
          throw ParseError("pocket " + std::to_string(index) + " of '" +
                           protein_id + "': non-integer atom serial");
        const int serial = v.get<int>();
        auto it = by_serial.find(serial);
        if (it == by_serial.end())
          throw IntegrityError("pocket " + std::to_string(index) + " of '" +
                               protein_id + "' references atom " +
                               std::to_string(serial) +
                               " absent from the structure");
        members.push_back(it->second);
      }
    } else if (p.contains("residues")) {
      std::set<int> wanted;
      for (const auto &v : p["residues"])
        wanted.insert(v.get<int>());
      for (int i = 0; i < static_cast<int>(structure.atoms.size()); ++i)
        if (wanted.count(structure.atoms[i].res_seq)
            && !is_hydrogen(structure.atoms[i]))
          members.push_back(i);
    } else {
      throw ParseError("pocket " + std::to_string(index) + " of '" +
                       protein_id + "' has neither atom_serials nor residues");
    }
    if (members.empty())
      throw IntegrityError("pocket " + std::to_string(index) + " of '" +
                           protein_id + "' is empty");
    out.push_back(pocket_from_atoms(structure, topo, members));
    ++index;
  }
  return out;
}

PocketGraph whole_chain_pocket(const PdbStructure &structure,
                               std::size_t cap) {
  std::vector<std::vector<int>> residues;
  char chain = 0;
  std::tuple<char, int, char> current{0, 0, 0};
  for (int i = 0; i < static_cast<int>(structure.atoms.size()); ++i) {
    const PdbAtom &a = structure.atoms[i];
    if (a.hetero || is_hydrogen(a))
      continue;
    if (chain == 0)
      chain = a.chain;
    if (a.chain != chain)
      continue;
    const std::tuple<char, int, char> key{a.chain, a.res_seq, a.icode};
    if (residues.empty() || key != current) {
      residues.emplace_back();
      current = key;
    }
    residues.back().push_back(i);
  }
  if (residues.empty())
    throw ParseError("structure has no heavy ATOM records");

  std::vector<int> members;
  for (const auto &res : residues) {
    if (members.size() + res.size() > cap)
      break;
    members.insert(members.end(), res.begin(), res.end());
  }
  if (members.empty())
    members.assign(residues.front().begin(),
                   residues.front().begin()
                       + static_cast<long>(
                           std::min(cap, residues.front().size())));
  if (members.empty())
    throw ValueError("pocket atom cap must be positive");
  return pocket_from_atoms(structure, build_topology(structure), members);
}

std::vector<PocketGraph>
load_pockets(const std::string &protein_id,
             const std::optional<std::filesystem::path> &pocket_file,
             const PdbStructure &structure, std::size_t fallback_cap) {
  if (pocket_file && std::filesystem::exists(*pocket_file))
    return pockets_from_json(read_text_file(*pocket_file), structure,
                             protein_id);
  return {whole_chain_pocket(structure, fallback_cap)};
}

std::string chain_sequence(const PdbStructure &structure) {
  std::string seq;
  std::set<std::tuple<char, int, char>> seen;
  char chain = 0;
  for (const PdbAtom &a : structure.atoms) {
    if (a.hetero || a.name != "CA")
      continue;
    if (chain == 0)
      chain = a.chain;
    if (a.chain != chain || !seen.insert({a.chain, a.res_seq, a.icode}).second)
      continue;
    seq.push_back(residue_letter(a.res_name));
  }
  return seq;
}

} // namespace tridti
