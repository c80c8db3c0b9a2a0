//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "tridti/error.hpp"

namespace tridti::chem {
namespace {

constexpr std::array<const char *, 119> kElements = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

// Default valences of the organic subset, ascending.
std::vector<int> default_valences(int z) {
  switch (z) {
  case 5: return {3};
  case 6: return {4};
  case 7: return {3, 5};
  case 8: return {2};
  case 15: return {3, 5};
  case 16: return {2, 4, 6};
  case 9:
  case 17:
  case 35:
  case 53: return {1};
  default: return {};
  }
}

int bond_valence(BondOrder o) {
  switch (o) {
  case BondOrder::kSingle: return 1;
  case BondOrder::kDouble: return 2;
  case BondOrder::kTriple: return 3;
  case BondOrder::kAromatic: return 1;
  }
  return 1;
}

class Parser {
public:
  explicit Parser(std::string_view s) : s_(s) { }

  Molecule run() {
    if (s_.empty())
      fail("empty SMILES");
    int prev = -1;
    std::optional<BondOrder> pending;
    std::vector<int> branches;
    struct Open {
      int atom;
      std::optional<BondOrder> order;
    };
    std::map<int, Open> rings;

    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') {
        if (prev < 0 || pending)
          fail("branch opened without a preceding atom");
        branches.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (branches.empty())
          fail("unmatched ')'");
        if (pending)
          fail("dangling bond before ')'");
        prev = branches.back();
        branches.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == '$' || c == ':'
                 || c == '/' || c == '\\') {
        if (pending)
          fail("two consecutive bond symbols");
        if (prev < 0)
          fail("bond without a preceding atom");
        pending = c == '=' ? BondOrder::kDouble
                  : c == '#' ? BondOrder::kTriple
                  : c == '$' ? BondOrder::kTriple
                  : c == ':' ? BondOrder::kAromatic
                             : BondOrder::kSingle;
        if (c == '$')
          fail("quadruple bonds are not supported");
        ++pos_;
      } else if (c == '.') {
        if (pending)
          fail("bond symbol before '.'");
        if (prev < 0)
          fail("'.' without a preceding atom");
        prev = -1;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0)
          fail("ring closure without a preceding atom");
        const int num = read_ring_number();
        auto it = rings.find(num);
        if (it == rings.end()) {
          rings.emplace(num, Open{prev, pending});
        } else {
          const Open open = it->second;
          rings.erase(it);
          if (open.order && pending && *open.order != *pending)
            fail("conflicting ring-closure bond orders");
          std::optional<BondOrder> order = pending ? pending : open.order;
          add_bond(open.atom, prev, order);
        }
        pending.reset();
      } else {
        const int atom = c == '[' ? read_bracket_atom() : read_organic_atom();
        if (prev >= 0)
          add_bond(prev, atom, pending);
        else if (pending)
          fail("bond without a preceding atom");
        pending.reset();
        prev = atom;
      }
    }
    if (pending)
      fail("dangling bond at end of SMILES");
    if (!branches.empty())
      fail("unclosed branch");
    if (!rings.empty())
      fail("unclosed ring bond " + std::to_string(rings.begin()->first));
    return std::move(mol_);
  }

private:
  [[noreturn]] void fail(const std::string &why) const {
    throw ChemistryError(why + " at position " + std::to_string(pos_),
                         std::string(s_));
  }

  int read_ring_number() {
    if (s_[pos_] == '%') {
      if (pos_ + 2 >= s_.size() || !std::isdigit((unsigned char)s_[pos_ + 1])
          || !std::isdigit((unsigned char)s_[pos_ + 2]))
        fail("malformed %nn ring number");
      const int n = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
      pos_ += 3;
      return n;
    }
    return s_[pos_++] - '0';
  }

  void add_bond(int a, int b, std::optional<BondOrder> order) {
    if (a == b)
      fail("atom bonded to itself");
    for (const Bond &bd : mol_.bonds)
      if ((bd.begin == a && bd.end == b) || (bd.begin == b && bd.end == a))
        fail("duplicate bond");
    BondOrder o = BondOrder::kSingle;
    if (order)
      o = *order;
    else if (mol_.atoms[a].aromatic && mol_.atoms[b].aromatic)
      o = BondOrder::kAromatic;
    mol_.bonds.push_back({a, b, o});
  }

  int push_atom(Atom atom) {
    mol_.atoms.push_back(std::move(atom));
    return static_cast<int>(mol_.atoms.size()) - 1;
  }

  int read_organic_atom() {
    const char c = s_[pos_];
    Atom atom;
    auto next_is = [&](char n) {
      return pos_ + 1 < s_.size() && s_[pos_ + 1] == n;
    };
    if (c == 'C' && next_is('l')) {
      atom.symbol = "Cl";
      pos_ += 2;
    } else if (c == 'B' && next_is('r')) {
      atom.symbol = "Br";
      pos_ += 2;
    } else if (std::string_view("BCNOPSFI").find(c) != std::string_view::npos) {
      atom.symbol = std::string(1, c);
      ++pos_;
    } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
      atom.symbol = std::string(1, static_cast<char>(std::toupper(c)));
      atom.aromatic = true;
      ++pos_;
    } else if (c == '*') {
      atom.symbol = "*";
      ++pos_;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
    atom.atomic_number = atomic_number(atom.symbol);
    return push_atom(std::move(atom));
  }

  int read_int() {
    int v = 0;
    bool any = false;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
      v = v * 10 + (s_[pos_++] - '0');
      any = true;
    }
    return any ? v : -1;
  }

  int read_bracket_atom() {
    ++pos_;  // '['
    Atom atom;
    atom.bracket = true;
    const int iso = read_int();
    atom.isotope = iso > 0 ? iso : 0;
    if (pos_ >= s_.size())
      fail("unterminated bracket atom");

    const char c = s_[pos_];
    if (c == '*') {
      atom.symbol = "*";
      ++pos_;
    } else if (std::islower((unsigned char)c)) {
      for (std::string_view arom : {"se", "as", "te", "b", "c", "n", "o", "p",
                                    "s"}) {
        if (s_.substr(pos_, arom.size()) == arom) {
          atom.symbol = std::string(arom);
          atom.symbol[0] = static_cast<char>(std::toupper(atom.symbol[0]));
          atom.aromatic = true;
          pos_ += arom.size();
          break;
        }
      }
      if (atom.symbol.empty())
        fail("unknown aromatic symbol in brackets");
    } else if (std::isupper((unsigned char)c)) {
      std::string two = std::string(s_.substr(pos_, 2));
      if (two.size() == 2 && std::islower((unsigned char)two[1])
          && atomic_number(two) > 0) {
        atom.symbol = two;
        pos_ += 2;
      } else {
        atom.symbol = std::string(1, c);
        if (atomic_number(atom.symbol) <= 0)
          fail("unknown element");
        ++pos_;
      }
    } else {
      fail("expected element symbol in brackets");
    }
    atom.atomic_number = atomic_number(atom.symbol);

    if (pos_ < s_.size() && s_[pos_] == '@') {
      ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '@') {
        ++pos_;
      } else {
        for (std::string_view tag : {"TH", "AL", "SP", "TB", "OH"})
          if (s_.substr(pos_, 2) == tag) {
            pos_ += 2;
            read_int();
            break;
          }
      }
    }
    if (pos_ < s_.size() && s_[pos_] == 'H') {
      ++pos_;
      const int h = read_int();
      atom.explicit_h = h < 0 ? 1 : h;
    }
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      const char sign = s_[pos_++];
      int mag = read_int();
      if (mag < 0) {
        mag = 1;
        while (pos_ < s_.size() && s_[pos_] == sign) {
          ++mag;
          ++pos_;
        }
      }
      atom.formal_charge = sign == '+' ? mag : -mag;
    }
    if (pos_ < s_.size() && s_[pos_] == ':') {
      ++pos_;
      if (read_int() < 0)
        fail("atom class without digits");
    }
    if (pos_ >= s_.size() || s_[pos_] != ']')
      fail("unterminated bracket atom");
    ++pos_;
    return push_atom(std::move(atom));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Molecule mol_;
};

int bond_order_sum(const Molecule &m, int a) {
  int sum = 0;
  for (const Bond &b : m.bonds)
    if (b.begin == a || b.end == a)
      sum += bond_valence(b.order);
  return sum;
}

void assign_implicit_hydrogens(Molecule &m) {
  for (int i = 0; i < static_cast<int>(m.atoms.size()); ++i) {
    Atom &a = m.atoms[i];
    if (a.bracket) {
      // Neutral bracket atoms short of the next allowed valence carry
      // radicals, e.g. [CH3] or [S](=O)=O. Iodine also allows 3 and 5.
      auto vals = default_valences(a.atomic_number);
      if (a.atomic_number == 53)
        vals = {1, 3, 5};
      if (a.formal_charge == 0) {
        int used = bond_order_sum(m, i) + a.explicit_h;
        if (a.aromatic && a.atomic_number == 6)
          used += 1;
        for (int v : vals)
          if (v >= used) {
            a.radical_electrons = v - used;
            break;
          }
      }
      continue;
    }
    const auto vals = default_valences(a.atomic_number);
    if (vals.empty())
      continue;
    int sum = bond_order_sum(m, i);
    if (a.aromatic) {
      // Aromatic atoms that contribute one electron to the pi system carry
      // an extra bond's worth of valence. Chalcogens contribute a lone pair,
      // as does a three-connected nitrogen.
      const bool lone_pair_donor =
          a.atomic_number == 8 || a.atomic_number == 16
          || (a.atomic_number == 7 && m.degree(i) >= 3);
      if (!lone_pair_donor)
        sum += 1;
    }
    int h = 0;
    for (int v : vals)
      if (v >= sum) {
        h = v - sum;
        break;
      }
    a.implicit_h = h;
  }
}

// Removes plain [H] atoms attached to a heavy atom, counting them on the
// neighbor instead.
void fold_hydrogens(Molecule &m) {
  const int n = static_cast<int>(m.atoms.size());
  std::vector<bool> drop(n, false);
  for (int i = 0; i < n; ++i) {
    const Atom &a = m.atoms[i];
    if (a.atomic_number != 1 || a.isotope != 0 || a.formal_charge != 0
        || a.explicit_h != 0)
      continue;
    const auto nb = m.neighbors(i);
    if (nb.size() != 1 || m.atoms[nb[0]].atomic_number == 1)
      continue;
    drop[i] = true;
    m.atoms[nb[0]].explicit_h += 1;
  }
  if (std::none_of(drop.begin(), drop.end(), [](bool b) { return b; }))
    return;
  std::vector<int> remap(n, -1);
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i)
    if (!drop[i]) {
      remap[i] = static_cast<int>(atoms.size());
      atoms.push_back(m.atoms[i]);
    }
  std::vector<Bond> bonds;
  for (const Bond &b : m.bonds)
    if (!drop[b.begin] && !drop[b.end])
      bonds.push_back({remap[b.begin], remap[b.end], b.order});
  m.atoms = std::move(atoms);
  m.bonds = std::move(bonds);
}

// Marks bonds that lie on at least one cycle (non-bridges).
std::vector<bool> ring_bonds(const Molecule &m) {
  const int n = static_cast<int>(m.atoms.size());
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int k = 0; k < static_cast<int>(m.bonds.size()); ++k) {
    adj[m.bonds[k].begin].emplace_back(m.bonds[k].end, k);
    adj[m.bonds[k].end].emplace_back(m.bonds[k].begin, k);
  }
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> in_ring(m.bonds.size(), true);
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int u, int parent_bond) {
    disc[u] = low[u] = timer++;
    for (auto [v, k] : adj[u]) {
      if (k == parent_bond)
        continue;
      if (disc[v] < 0) {
        dfs(v, k);
        low[u] = std::min(low[u], low[v]);
        if (low[v] > disc[u])
          in_ring[k] = false;
      } else {
        low[u] = std::min(low[u], disc[v]);
      }
    }
  };
  for (int i = 0; i < n; ++i)
    if (disc[i] < 0)
      dfs(i, -1);
  return in_ring;
}

int find_bond(const Molecule &m, int a, int b) {
  for (int k = 0; k < static_cast<int>(m.bonds.size()); ++k)
    if ((m.bonds[k].begin == a && m.bonds[k].end == b)
        || (m.bonds[k].begin == b && m.bonds[k].end == a))
      return k;
  return -1;
}

constexpr std::size_t kMaxRingSize = 8;

// Smallest set of smallest rings (up to kMaxRingSize atoms): simple cycles
// sorted by size, kept when independent of the ones already kept over GF(2)
// on their bond sets. Rings are atom lists in cycle order.
std::vector<std::vector<int>> ring_basis(const Molecule &m,
                                         const std::vector<bool> &in_ring) {
  const int n = static_cast<int>(m.atoms.size());
  std::vector<std::vector<int>> adj(n);
  for (std::size_t k = 0; k < m.bonds.size(); ++k)
    if (in_ring[k]) {
      adj[m.bonds[k].begin].push_back(m.bonds[k].end);
      adj[m.bonds[k].end].push_back(m.bonds[k].begin);
    }
  std::vector<std::vector<int>> cycles;
  std::vector<int> path;
  std::function<void(int, int)> walk = [&](int start, int u) {
    for (int v : adj[u]) {
      if (v == start && path.size() >= 3 && path[1] < path.back()) {
        cycles.push_back(path);
        continue;
      }
      if (v <= start || path.size() >= kMaxRingSize
          || std::find(path.begin(), path.end(), v) != path.end())
        continue;
      path.push_back(v);
      walk(start, v);
      path.pop_back();
    }
  };
  for (int s = 0; s < n; ++s) {
    if (adj[s].empty())
      continue;
    path = {s};
    walk(s, s);
  }
  std::stable_sort(cycles.begin(), cycles.end(),
                   [](const auto &x, const auto &y) {
                     return x.size() < y.size();
                   });

  const std::size_t nbits = m.bonds.size();
  const std::size_t words = (nbits + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  auto test = [](const Bits &b, std::size_t bit) {
    return (b[bit / 64] >> (bit % 64)) & 1U;
  };
  std::vector<Bits> basis;
  std::vector<std::size_t> pivots;
  std::vector<std::vector<int>> rings;
  for (const auto &cyc : cycles) {
    Bits row(words, 0);
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const auto bond = static_cast<std::size_t>(
          find_bond(m, cyc[k], cyc[(k + 1) % cyc.size()]));
      row[bond / 64] ^= std::uint64_t{1} << (bond % 64);
    }
    for (std::size_t r = 0; r < basis.size(); ++r)
      if (test(row, pivots[r]))
        for (std::size_t w = 0; w < words; ++w)
          row[w] ^= basis[r][w];
    std::size_t pivot = nbits;
    for (std::size_t bit = 0; bit < nbits; ++bit)
      if (test(row, bit)) {
        pivot = bit;
        break;
      }
    if (pivot == nbits)
      continue;
    // Keep rows reduced so later eliminations stay single-pass.
    for (std::size_t r = 0; r < basis.size(); ++r)
      if (test(basis[r], pivot))
        for (std::size_t w = 0; w < words; ++w)
          basis[r][w] ^= row[w];
    basis.push_back(std::move(row));
    pivots.push_back(pivot);
    rings.push_back(cyc);
  }
  return rings;
}

double electronegativity(int z) {
  switch (z) {
  case 1: return 2.20;
  case 5: return 2.04;
  case 6: return 2.55;
  case 7: return 3.04;
  case 8: return 3.44;
  case 9: return 3.98;
  case 15: return 2.19;
  case 16: return 2.58;
  case 17: return 3.16;
  case 33: return 2.18;
  case 34: return 2.55;
  case 35: return 2.96;
  case 52: return 2.10;
  case 53: return 2.66;
  default: return 1.5;
  }
}

int outer_electrons(int z);

// Pi electrons an atom would contribute to an aromatic ring, or -1 when it
// cannot be part of one.
int aromatic_electrons(const Molecule &m, int i,
                       const std::vector<bool> &in_ring) {
  const Atom &a = m.atoms[i];
  // A multiple bond leaving every ring, and its partner.
  int exo_partner = -1;
  bool multiple = false;
  for (std::size_t k = 0; k < m.bonds.size(); ++k) {
    const Bond &b = m.bonds[k];
    if (b.begin != i && b.end != i)
      continue;
    if (b.order == BondOrder::kDouble || b.order == BondOrder::kTriple) {
      multiple = true;
      if (!in_ring[k])
        exo_partner = b.begin == i ? b.end : b.begin;
    }
  }
  const bool exo_withdrawn =
      exo_partner >= 0
      && electronegativity(m.atoms[exo_partner].atomic_number)
             > electronegativity(a.atomic_number);

  if (a.aromatic) {
    if (exo_withdrawn)
      return 0;
    const bool donor =
        a.formal_charge <= 0
        && (a.atomic_number == 8 || a.atomic_number == 16
            || a.atomic_number == 34
            || ((a.atomic_number == 7 || a.atomic_number == 15)
                && m.degree(i) + a.total_h() >= 3));
    return donor ? 2 : 1;
  }

  int dv = 0;
  switch (a.atomic_number) {
  case 5: case 7: case 15: case 33: dv = 3; break;
  case 6: dv = 4; break;
  case 8: case 16: case 34: case 52: dv = 2; break;
  default: return -1;
  }
  const int deg = m.degree(i) + a.total_h();
  if (deg > 3 || a.radical_electrons != 0)
    return -1;
  const int lone =
      std::max(outer_electrons(a.atomic_number) - dv - a.formal_charge, 0);
  int nelec = (dv - deg) + lone;
  if (nelec > 1 && bond_order_sum(m, i) - m.degree(i) > 1)
    nelec = 1;
  if (nelec < 0)
    return -1;
  if (nelec == 0)
    return a.formal_charge != 0 || multiple ? 0 : -1;
  if (nelec == 1) {
    if (exo_partner >= 0)
      return exo_withdrawn ? 0 : 1;
    if (multiple)
      return 1;
    return a.formal_charge == 1 ? 0 : -1;
  }
  return multiple ? 1 : 2;
}

// Marks rings, and fused combinations of up to three rings, holding 4n+2
// pi electrons as aromatic. Rings written entirely in aromatic form are
// kept as given.
void perceive_aromaticity(Molecule &m) {
  const auto in_ring = ring_bonds(m);
  const auto rings = ring_basis(m, in_ring);
  if (rings.empty())
    return;
  const int n = static_cast<int>(m.atoms.size());
  std::vector<int> electrons(n);
  for (int i = 0; i < n; ++i)
    electrons[i] = aromatic_electrons(m, i, in_ring);

  std::vector<std::vector<int>> ring_bond_ids(rings.size());
  for (std::size_t r = 0; r < rings.size(); ++r)
    for (std::size_t k = 0; k < rings[r].size(); ++k)
      ring_bond_ids[r].push_back(
          find_bond(m, rings[r][k], rings[r][(k + 1) % rings[r].size()]));

  std::vector<bool> atom_flag(n, false);
  std::vector<bool> bond_flag(m.bonds.size(), false);
  auto try_combo = [&](std::initializer_list<std::size_t> combo) {
    std::set<int> atoms;
    for (std::size_t r : combo)
      atoms.insert(rings[r].begin(), rings[r].end());
    int total = 0;
    bool all_given = true;
    for (int a : atoms) {
      if (electrons[a] < 0)
        return;
      total += electrons[a];
      all_given = all_given && m.atoms[a].aromatic;
    }
    if (all_given || total % 4 != 2)
      return;
    for (std::size_t r : combo) {
      for (int a : rings[r])
        atom_flag[a] = true;
      for (int b : ring_bond_ids[r])
        bond_flag[b] = true;
    }
  };
  auto fused = [&](std::size_t x, std::size_t y) {
    for (int b : ring_bond_ids[x])
      if (std::find(ring_bond_ids[y].begin(), ring_bond_ids[y].end(), b)
          != ring_bond_ids[y].end())
        return true;
    return false;
  };

  const std::size_t nr = rings.size();
  for (std::size_t r = 0; r < nr; ++r)
    try_combo({r});
  for (std::size_t x = 0; x < nr; ++x)
    for (std::size_t y = x + 1; y < nr; ++y) {
      if (!fused(x, y))
        continue;
      try_combo({x, y});
      for (std::size_t z = y + 1; z < nr; ++z)
        if (fused(x, z) || fused(y, z))
          try_combo({x, y, z});
    }

  for (int i = 0; i < n; ++i)
    if (atom_flag[i])
      m.atoms[i].aromatic = true;
  for (std::size_t k = 0; k < m.bonds.size(); ++k)
    if (bond_flag[k])
      m.bonds[k].order = BondOrder::kAromatic;

  // Hydrogens on aromatic heteroatoms are pinned, as in [nH].
  for (Atom &a : m.atoms)
    if (a.aromatic && a.atomic_number != 6 && a.implicit_h > 0) {
      a.explicit_h += a.implicit_h;
      a.implicit_h = 0;
    }
}

// Valence electrons used by the orbital-count rule below. Transition metals
// count d electrons, except group 12 which counts only the s pair.
int outer_electrons(int z) {
  static constexpr std::array<int, 8> kPeriodStarts = {1, 3, 11, 19,
                                                       37, 55, 87, 119};
  if (z <= 0)
    return 0;
  if (z <= 2)
    return z;
  int start = 0;
  for (std::size_t k = 0; k + 1 < kPeriodStarts.size(); ++k)
    if (z >= kPeriodStarts[k] && z < kPeriodStarts[k + 1])
      start = kPeriodStarts[k];
  const int col = z - start + 1;  // 1-based position in the period
  if (start <= 11)
    return col;
  int group = col;
  if (start >= 55) {
    // Lanthanides/actinides collapse onto group 3.
    if (col >= 3 && col <= 17)
      return 3;
    group = col > 17 ? col - 14 : col;
  }
  return group <= 11 ? group : (group == 12 ? 2 : group - 10);
}

bool lone_pair_donor(const Molecule &m, int i) {
  const Atom &a = m.atoms[i];
  if (!a.aromatic || a.formal_charge > 0)
    return false;
  if (a.atomic_number == 8 || a.atomic_number == 16 || a.atomic_number == 34)
    return true;
  if (a.atomic_number == 7 || a.atomic_number == 15)
    return m.degree(i) + a.total_h() >= 3;
  return false;
}

// Total valence with aromatic bonds resolved to their Kekule share.
int total_valence(const Molecule &m, int i) {
  const Atom &a = m.atoms[i];
  int v = bond_order_sum(m, i) + a.total_h();
  if (a.aromatic && !lone_pair_donor(m, i))
    v += 1;
  return v;
}

// Electrons an atom can lend to a conjugated system, or -1 when it cannot
// take part (univalent, or four or more substituents).
int conjugation_electrons(const Molecule &m, int i) {
  const Atom &a = m.atoms[i];
  const auto vals = default_valences(a.atomic_number);
  const int dv = vals.empty() ? 0 : vals.front();
  if (dv <= 1)
    return -1;
  const int deg = m.degree(i) + a.total_h();
  if (deg > 3)
    return -1;
  const int nlp =
      std::max(outer_electrons(a.atomic_number) - dv - a.formal_charge, 0);
  return (dv - deg) + nlp - a.radical_electrons;
}

// Heavier group 15/16 atoms only join a conjugated path as terminal atoms.
bool conjugation_candidate(const Molecule &m, int i) {
  const int z = m.atoms[i].atomic_number;
  const int nouter = outer_electrons(z);
  return conjugation_electrons(m, i) >= 0
         && (z <= 10 || (nouter != 5 && nouter != 6)
             || (nouter == 6 && m.degree(i) < 2));
}

// Orbital-count hybridization: substituents + lone pairs (+ radicals below
// an octet). A four-orbital second-row atom with a single bond into a pi
// system is lowered to sp2.
void assign_hybridization(Molecule &m) {
  const int n = static_cast<int>(m.atoms.size());
  std::vector<bool> has_pi(n, false);
  for (const Bond &b : m.bonds)
    if (b.order != BondOrder::kSingle) {
      has_pi[b.begin] = true;
      has_pi[b.end] = true;
    }
  for (int i = 0; i < n; ++i) {
    Atom &a = m.atoms[i];
    if (a.atomic_number == 0) {
      a.hybridization = Hybridization::kOther;
      continue;
    }
    const int deg = m.degree(i);
    const int valence = total_valence(m, i);
    const int nouter = outer_electrons(a.atomic_number);
    const int free_electrons = nouter - (valence + a.formal_charge);
    int orbitals = deg + a.total_h();
    if (valence + nouter - a.formal_charge < 8)
      orbitals += (free_electrons - a.radical_electrons) / 2
                  + a.radical_electrons;
    else
      orbitals += free_electrons / 2;

    if (a.aromatic) {
      a.hybridization = Hybridization::kSP2;
      continue;
    }
    switch (orbitals) {
    case 0:
    case 1: a.hybridization = Hybridization::kS; break;
    case 2: a.hybridization = Hybridization::kSP; break;
    case 3: a.hybridization = Hybridization::kSP2; break;
    case 4: {
      bool conjugated = false;
      if (a.atomic_number <= 10 && deg >= 1 && deg <= 3 && !has_pi[i]
          && conjugation_electrons(m, i) > 0)
        for (int nb : m.neighbors(i)) {
          if (!conjugation_candidate(m, nb))
            continue;
          if (m.atoms[nb].aromatic)
            conjugated = true;
          for (const Bond &b : m.bonds)
            if ((b.begin == nb || b.end == nb) && b.order != BondOrder::kSingle
                && conjugation_candidate(m, b.begin == nb ? b.end : b.begin))
              conjugated = true;
        }
      a.hybridization =
          conjugated ? Hybridization::kSP2 : Hybridization::kSP3;
      break;
    }
    case 5: a.hybridization = Hybridization::kSP3D; break;
    case 6: a.hybridization = Hybridization::kSP3D2; break;
    default: a.hybridization = Hybridization::kOther; break;
    }
  }
}

} // namespace

int Molecule::degree(int atom) const {
  int d = 0;
  for (const Bond &b : bonds)
    if (b.begin == atom || b.end == atom)
      ++d;
  return d;
}

std::vector<int> Molecule::neighbors(int atom) const {
  std::vector<int> out;
  for (const Bond &b : bonds) {
    if (b.begin == atom)
      out.push_back(b.end);
    else if (b.end == atom)
      out.push_back(b.begin);
  }
  return out;
}

int atomic_number(std::string_view symbol) {
  for (std::size_t z = 0; z < kElements.size(); ++z)
    if (symbol == kElements[z])
      return static_cast<int>(z);
  return -1;
}

const char *element_symbol(int z) {
  if (z < 0 || z >= static_cast<int>(kElements.size()))
    return "*";
  return kElements[z];
}

Molecule parse_smiles(std::string_view smiles) {
  Molecule m = Parser(smiles).run();
  assign_implicit_hydrogens(m);
  fold_hydrogens(m);

  const auto in_ring = ring_bonds(m);
  for (std::size_t k = 0; k < m.bonds.size(); ++k)
    if (m.bonds[k].order == BondOrder::kAromatic && !in_ring[k])
      m.bonds[k].order = BondOrder::kSingle;
  for (int i = 0; i < static_cast<int>(m.atoms.size()); ++i) {
    if (!m.atoms[i].aromatic)
      continue;
    bool has_ring_bond = false;
    for (std::size_t k = 0; k < m.bonds.size(); ++k)
      if ((m.bonds[k].begin == i || m.bonds[k].end == i) && in_ring[k])
        has_ring_bond = true;
    if (!has_ring_bond)
      throw ChemistryError("aromatic atom outside a ring", std::string(smiles));
  }

  perceive_aromaticity(m);
  assign_hybridization(m);
  return m;
}

} // namespace tridti::chem
