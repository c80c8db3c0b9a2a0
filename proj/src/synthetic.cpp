//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "tridti/error.hpp"
#include "tridti/smiles.hpp"

namespace fs = std::filesystem;

namespace tridti {

namespace {

using Vec3 = Eigen::Vector3d;

void write_file(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ParseError("cannot write '" + path.string() + "'");
  out << text;
}

std::string line(const char *format, auto... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Vec3 random_unit(std::mt19937_64 &rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v(n(rng), n(rng), n(rng));
  return v.norm() < 1e-9 ? Vec3(1, 0, 0) : Vec3(v.normalized());
}

// Target distances: bonded 1.5, two bonds apart 2.5; other pairs are only
// pushed out to 3.0.
Eigen::MatrixXd embed(int n, const std::vector<std::pair<int, int>> &bonds,
                      std::mt19937_64 &rng) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : bonds) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  Eigen::MatrixXi topo = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j : adj[i]) {
      topo(i, j) = 1;
      for (int k : adj[j])
        if (k != i && topo(i, k) != 1)
          topo(i, k) = 2;
    }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double box = 1.2 * std::cbrt(static_cast<double>(n)) + 1.0;
  Eigen::MatrixXd x(n, 3);
  for (int i = 0; i < n; ++i)
    x.row(i) << box * u(rng), box * u(rng), box * u(rng);
  for (int it = 0; it < 600; ++it) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Eigen::RowVector3d d = x.row(i) - x.row(j);
        const double r = std::max(d.norm(), 1e-6);
        double target = 0.0;
        if (topo(i, j) == 1)
          target = 1.5;
        else if (topo(i, j) == 2)
          target = 2.5;
        else if (r < 3.0)
          target = 3.0;
        else
          continue;
        const Eigen::RowVector3d f = (r - target) / r * d;
        g.row(i) += f;
        g.row(j) -= f;
      }
    x -= 0.1 * g;
  }
  // Separate any coincident atoms left over.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((x.row(i) - x.row(j)).norm() < 0.5)
        x.row(j) += 0.7 * random_unit(rng).transpose();
  return x;
}

constexpr std::string_view kResidueLetters = "ACDEFGHIKLMNPQRSTVWY";
constexpr std::array<const char *, 20> kResidueNames = {
    "ALA", "CYS", "ASP", "GLU", "PHE", "GLY", "HIS", "ILE", "LYS", "LEU",
    "MET", "ASN", "PRO", "GLN", "ARG", "SER", "THR", "VAL", "TRP", "TYR"};

struct ProteinModel {
  std::string sequence;
  std::string pdb;
  std::vector<int> pocket_serials;
};

// Residues favoured by each protein family (index mod 3), so that sequence,
// pocket and residue-graph views all carry the family.
constexpr std::array<std::string_view, 3> kFamilyResidues = {
    "AILMFVW", "DEKRHNQ", "GPSTCYG"};

ProteinModel make_protein(int length, int family, std::mt19937_64 &rng) {
  ProteinModel p;
  std::uniform_int_distribution<int> aa(0, 19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::string_view favoured = kFamilyResidues[family % 3];
  std::uniform_int_distribution<int> fav(
      0, static_cast<int>(favoured.size()) - 1);
  for (int i = 0; i < length; ++i)
    p.sequence += u(rng) < 0.7 ? favoured[fav(rng)] : kResidueLetters[aa(rng)];

  // C-alpha random walk with 3.8 A steps, avoiding clashes below 4 A.
  std::vector<Vec3> ca{Vec3::Zero()};
  Vec3 heading = random_unit(rng);
  while (static_cast<int>(ca.size()) < length) {
    Vec3 next;
    for (int attempt = 0;; ++attempt) {
      const Vec3 dir = (heading + 0.9 * random_unit(rng)).normalized();
      next = ca.back() + 3.8 * dir;
      bool clash = false;
      for (std::size_t k = 0; k + 1 < ca.size() && !clash; ++k)
        clash = (ca[k] - next).norm() < 4.0;
      if (!clash || attempt > 50) {
        heading = dir;
        break;
      }
    }
    ca.push_back(next);
  }

  int serial = 1;
  std::vector<std::pair<int, Vec3>> atoms;  // residue index, position
  for (int i = 0; i < length; ++i) {
    const Vec3 prev = i > 0 ? ca[i - 1] : Vec3(ca[i] - (ca[i + 1] - ca[i]));
    const Vec3 next = i + 1 < length ? ca[i + 1] : Vec3(ca[i] + (ca[i] - prev));
    const Vec3 back = (prev - ca[i]).normalized();
    const Vec3 fwd = (next - ca[i]).normalized();
    Vec3 side = -(back + fwd);
    side = side.norm() < 1e-6 ? random_unit(rng) : Vec3(side.normalized());
    const Vec3 normal = back.cross(fwd).norm() < 1e-6
                            ? side.unitOrthogonal()
                            : Vec3(back.cross(fwd).normalized());
    const char *res = kResidueNames[kResidueLetters.find(p.sequence[i])];
    struct Placed {
      const char *name;
      const char *element;
      Vec3 pos;
    };
    std::vector<Placed> placed = {
        {"N", "N", ca[i] + 1.46 * back},
        {"CA", "C", ca[i]},
        {"C", "C", ca[i] + 1.52 * fwd},
        {"O", "O", ca[i] + 1.52 * fwd + 1.23 * normal},
    };
    if (p.sequence[i] != 'G')
      placed.push_back({"CB", "C", ca[i] + 1.53 * side});
    for (const Placed &a : placed) {
      p.pdb += line("ATOM  %5d  %-3s %3s A%4d    %8.3f%8.3f%8.3f  1.00 20.00"
                    "           %s\n",
                    serial, a.name, res, i + 1, a.pos.x(), a.pos.y(),
                    a.pos.z(), a.element);
      atoms.emplace_back(i, a.pos);
      ++serial;
    }
  }
  p.pdb += "TER\nEND\n";

  std::uniform_int_distribution<int> centre(length / 4, 3 * length / 4);
  const Vec3 c = ca[centre(rng)];
  for (std::size_t k = 0; k < atoms.size(); ++k)
    if ((atoms[k].second - c).norm() <= 8.0)
      p.pocket_serials.push_back(static_cast<int>(k) + 1);
  return p;
}

std::string id_for(const char *prefix, int i) {
  return line("%s%03d", prefix, i);
}

} // namespace

const std::vector<std::string> &synthetic_smiles() {
  static const std::vector<std::string> list = {
      "CC(=O)Oc1ccccc1C(=O)O",
      "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
      "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
      "CC(=O)Nc1ccc(O)cc1",
      "OC(=O)c1ccccc1O",
      "CCN(CC)CC(=O)Nc1c(C)cccc1C",
      "CNCCC(Oc1ccc(cc1)C(F)(F)F)c1ccccc1",
      "COc1ccc2[nH]cc(CCN)c2c1",
      "NCCc1ccc(O)c(O)c1",
      "CC(N)Cc1ccccc1",
      "CN(C)CCCN1c2ccccc2CCc2ccccc21",
      "OC(=O)CCc1ccccc1",
      "Clc1ccc(cc1)C(c1ccccc1)N1CCNCC1",
      "CC1=CC(=O)c2ccccc2C1=O",
      "NC(=O)c1cccnc1",
      "CCOC(=O)c1ccc(N)cc1",
      "O=C(O)c1ccncc1",
      "CC(C)NCC(O)COc1cccc2ccccc12",
      "CN1CCC[C@H]1c1cccnc1",
      "OCC1OC(O)C(O)C(O)C1O",
      "CCCCc1oc2ccccc2c1C(=O)c1ccccc1",
      "Cc1ccc(cc1)S(=O)(=O)N",
      "NS(=O)(=O)c1cc(C(=O)O)c(NCc2ccco2)cc1Cl",
      "CC(=O)OCC[N+](C)(C)C",
      "c1ccc2c(c1)ccc1ccccc12",
      "OC(=O)C(F)(F)F",
      "CCCC(C)C1(CC)C(=O)NC(=O)NC1=O",
      "COC(=O)C1C(OC(=O)c2ccccc2)CC2CCC1N2C",
      "Nc1ncnc2[nH]cnc12",
      "CC(C)(C)NCC(O)c1ccc(O)c(CO)c1",
      "O=C1CCCN1",
      "C1CCC(CC1)N",
      "Oc1ccc(Br)cc1",
      "CSCCC(N)C(=O)O",
      "N#Cc1ccccc1",
      "CC(=O)c1ccc(I)cc1",
  };
  return list;
}

std::string synthetic_molblock(const std::string &smiles, std::uint64_t seed) {
  const chem::Molecule mol = chem::parse_smiles(smiles);
  const int n = static_cast<int>(mol.atoms.size());
  std::vector<std::pair<int, int>> bonds;
  for (const chem::Bond &b : mol.bonds)
    bonds.emplace_back(b.begin, b.end);
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd x = embed(n, bonds, rng);
  std::string out = smiles + "\n  tridti-synthetic\n\n";
  out += line("%3d%3d  0  0  0  0  0  0  0  0999 V2000\n", n,
              static_cast<int>(mol.bonds.size()));
  for (int i = 0; i < n; ++i)
    out += line("%10.4f%10.4f%10.4f %-3s 0  0  0  0  0  0  0  0  0  0  0  0\n",
                x(i, 0), x(i, 1), x(i, 2), mol.atoms[i].symbol.c_str());
  for (const chem::Bond &b : mol.bonds)
    out += line("%3d%3d%3d  0\n", b.begin + 1, b.end + 1,
                static_cast<int>(b.order));
  out += "M  END\n$$$$\n";
  return out;
}

void write_synthetic_dataset(const fs::path &dir,
                             const SyntheticOptions &o) {
  const auto &smiles = synthetic_smiles();
  if (o.num_drugs < 3 || o.num_drugs > static_cast<int>(smiles.size()))
    throw UsageError("synthetic: num_drugs must be in [3, " +
                     std::to_string(smiles.size()) + "]");
  if (o.num_proteins < 3)
    throw UsageError("synthetic: num_proteins must be >= 3");
  if (o.min_residues < 8 || o.max_residues < o.min_residues)
    throw UsageError("synthetic: bad residue range");
  if (o.balanced_pairs < 0 || o.drugs_without_conformer < 0
      || o.proteins_without_pockets < 0)
    throw UsageError("synthetic: counts must be non-negative");
  int n_pos = 0;
  for (int d = 0; d < o.num_drugs; ++d)
    for (int t = 0; t < o.num_proteins; ++t)
      n_pos += d % 3 == t % 3;
  const int n_neg = o.num_drugs * o.num_proteins - n_pos;
  if (o.balanced_pairs > std::min(n_pos, n_neg))
    throw UsageError("synthetic: balanced_pairs exceeds the " +
                     std::to_string(std::min(n_pos, n_neg)) +
                     " pairs available per class");

  fs::create_directories(dir / "conformers");
  fs::create_directories(dir / "structures");
  fs::create_directories(dir / "pockets");
  std::mt19937_64 rng(o.seed);

  std::vector<std::string> sequences;
  std::uniform_int_distribution<int> len(o.min_residues, o.max_residues);
  for (int t = 0; t < o.num_proteins; ++t) {
    const ProteinModel p = make_protein(len(rng), t, rng);
    const std::string id = id_for("T", t);
    sequences.push_back(p.sequence);
    write_file(dir / "structures" / (id + ".pdb"), p.pdb);
    if (t >= o.proteins_without_pockets) {
      nlohmann::json doc;
      doc["pockets"] = {{{"atom_serials", p.pocket_serials}}};
      write_file(dir / "pockets" / (id + ".json"), doc.dump() + "\n");
    }
  }
  for (int d = 0; d < o.num_drugs; ++d)
    if (d >= o.drugs_without_conformer)
      write_file(dir / "conformers" / (id_for("D", d) + ".sdf"),
                 synthetic_molblock(smiles[d], o.seed * 1000003u + d));

  struct Row {
    int d, t, label;
  };
  std::vector<Row> pos, neg;
  for (int d = 0; d < o.num_drugs; ++d)
    for (int t = 0; t < o.num_proteins; ++t)
      (d % 3 == t % 3 ? pos : neg).push_back({d, t, d % 3 == t % 3});
  std::vector<Row> rows;
  if (o.balanced_pairs == 0) {
    rows = pos;
    rows.insert(rows.end(), neg.begin(), neg.end());
  } else {
    const std::size_t k = static_cast<std::size_t>(o.balanced_pairs);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    rows.assign(pos.begin(), pos.begin() + static_cast<long>(k));
    rows.insert(rows.end(), neg.begin(), neg.begin() + static_cast<long>(k));
  }
  std::shuffle(rows.begin(), rows.end(), rng);

  auto table = [&](std::size_t from, std::size_t to) {
    std::string s = "drug_id,smiles,protein_id,sequence,label\n";
    for (std::size_t i = from; i < to; ++i)
      s += id_for("D", rows[i].d) + "," + smiles[rows[i].d] + "," +
           id_for("T", rows[i].t) + "," + sequences[rows[i].t] + "," +
           std::to_string(rows[i].label) + "\n";
    return s;
  };
  if (o.fixed_split) {
    const std::size_t cut = rows.size() * 4 / 5;
    write_file(dir / "train.csv", table(0, cut));
    write_file(dir / "test.csv", table(cut, rows.size()));
  } else {
    write_file(dir / "interactions.csv", table(0, rows.size()));
  }
}

} // namespace tridti
