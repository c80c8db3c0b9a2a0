//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/archive.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "tridti/binary_io.hpp"
#include "tridti/error.hpp"

namespace tridti {

namespace fs = std::filesystem;

void write_binary_file(const fs::path &path, std::string_view bytes) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ParseError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw ParseError("short write to '" + path.string() + "'");
}

void BinaryWriter::save(const fs::path &path) const {
  write_binary_file(path, buf_);
}

BinaryReader BinaryReader::open(const fs::path &path) {
  return BinaryReader(read_text_file(path), path.string());
}

namespace {

constexpr std::string_view kMagic = "TRIDTI-DATA";

std::optional<fs::path> table_path(const fs::path &dir,
                                   const std::string &stem) {
  for (const char *ext : {".csv", ".tsv"}) {
    fs::path p = dir / (stem + ext);
    if (fs::exists(p))
      return p;
  }
  return std::nullopt;
}

void write_drug(BinaryWriter &w, const DrugRecord &d) {
  w.str(d.drug_id);
  w.str(d.smiles);
  w.matrix(d.graph2d.node_features);
  w.pairs(d.graph2d.bond_list);
  w.u64(d.graph2d.elements.size());
  for (const std::string &e : d.graph2d.elements)
    w.str(e);
  w.u8(d.graph3d ? 1 : 0);
  if (d.graph3d) {
    const Molecular3DGraph &g = *d.graph3d;
    w.matrix(g.coords);
    w.matrix(g.node_scalars);
    w.matrix(g.node_vectors);
    w.pairs(g.edges);
    w.matrix(g.edge_scalars);
    w.matrix(g.edge_vectors);
  }
}

DrugRecord read_drug(BinaryReader &r) {
  DrugRecord d;
  d.drug_id = r.str();
  d.smiles = r.str();
  d.graph2d.node_features = r.matrix();
  d.graph2d.bond_list = r.pairs();
  const std::uint64_t ne = r.u64();
  for (std::uint64_t i = 0; i < ne; ++i)
    d.graph2d.elements.push_back(r.str());
  const int n = d.graph2d.num_atoms();
  d.graph2d.adjacency = Matrix::Zero(n, n);
  for (auto [i, j] : d.graph2d.bond_list) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw ParseError(r.what() + ": bond outside drug " + d.drug_id);
    d.graph2d.adjacency(i, j) = d.graph2d.adjacency(j, i) = 1.0;
  }
  if (r.u8()) {
    Molecular3DGraph g;
    g.coords = r.matrix();
    g.node_scalars = r.matrix();
    g.node_vectors = r.matrix();
    g.edges = r.pairs();
    g.edge_scalars = r.matrix();
    g.edge_vectors = r.matrix();
    d.graph3d = std::move(g);
  }
  return d;
}

void write_protein(BinaryWriter &w, const ProteinRecord &p) {
  w.str(p.protein_id);
  w.str(p.sequence);
  w.u64(p.pockets.size());
  for (const PocketGraph &g : p.pockets) {
    w.matrix(g.node_features);
    w.pairs(g.edges);
    w.ints(g.atom_serials);
  }
  w.u8(p.residue_graph ? 1 : 0);
  if (p.residue_graph) {
    w.matrix(p.residue_graph->residue_onehot);
    w.matrix(p.residue_graph->calpha_coords);
    w.pairs(p.residue_graph->edges);
  }
}

ProteinRecord read_protein(BinaryReader &r) {
  ProteinRecord p;
  p.protein_id = r.str();
  p.sequence = r.str();
  const std::uint64_t np = r.u64();
  for (std::uint64_t i = 0; i < np; ++i) {
    PocketGraph g;
    g.node_features = r.matrix();
    g.edges = r.pairs();
    g.atom_serials = r.ints();
    p.pockets.push_back(std::move(g));
  }
  if (r.u8()) {
    ResidueContactGraph g;
    g.residue_onehot = r.matrix();
    g.calpha_coords = r.matrix();
    g.edges = r.pairs();
    p.residue_graph = std::move(g);
  }
  return p;
}

} // namespace

int Dataset::drug_index(const std::string &id) const {
  auto it = std::lower_bound(
      drugs.begin(), drugs.end(), id,
      [](const DrugRecord &d, const std::string &k) { return d.drug_id < k; });
  return it != drugs.end() && it->drug_id == id
             ? static_cast<int>(it - drugs.begin())
             : -1;
}

int Dataset::protein_index(const std::string &id) const {
  auto it = std::lower_bound(proteins.begin(), proteins.end(), id,
                             [](const ProteinRecord &p, const std::string &k) {
                               return p.protein_id < k;
                             });
  return it != proteins.end() && it->protein_id == id
             ? static_cast<int>(it - proteins.begin())
             : -1;
}

std::string SkipManifest::to_json() const {
  nlohmann::ordered_json doc;
  auto list = [](const std::vector<SkippedEntity> &v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const SkippedEntity &e : v)
      a.push_back({{"id", e.id}, {"reason", e.reason}});
    return a;
  };
  doc["kept_drugs"] = kept_drugs;
  doc["kept_proteins"] = kept_proteins;
  doc["kept_samples"] = kept_samples;
  doc["dropped_samples"] = dropped_samples;
  doc["skipped_drugs"] = list(drugs);
  doc["skipped_proteins"] = list(proteins);
  return doc.dump(2) + "\n";
}

Dataset preprocess_directory(const fs::path &data_dir, SkipManifest *manifest,
                             const PreprocessOptions &options) {
  if (!fs::is_directory(data_dir))
    throw ParseError("data directory '" + data_dir.string() +
                     "' does not exist");
  InteractionTable table;
  std::size_t n_train = 0;
  bool fixed = false;
  if (auto p = table_path(data_dir, "interactions")) {
    table = load_interactions(*p);
  } else {
    auto tr = table_path(data_dir, "train");
    auto te = table_path(data_dir, "test");
    if (!tr || !te)
      throw ParseError("data directory '" + data_dir.string() +
                       "' has neither interactions.csv nor train/test tables");
    // Parse both and merge; ids must agree across the two tables.
    const std::string train_text = read_text_file(*tr);
    const std::string test_text = read_text_file(*te);
    const TableFormat ftr =
        tr->extension() == ".tsv" ? TableFormat::kTsv : TableFormat::kCsv;
    const TableFormat fte =
        te->extension() == ".tsv" ? TableFormat::kTsv : TableFormat::kCsv;
    InteractionTable a = parse_interactions(train_text, ftr);
    InteractionTable b = parse_interactions(test_text, fte);
    auto merge = [](std::map<std::string, std::string> &into,
                    const std::map<std::string, std::string> &from,
                    const char *kind) {
      for (const auto &[id, s] : from) {
        auto [it, fresh] = into.emplace(id, s);
        if (!fresh && it->second != s)
          throw IntegrityError(std::string(kind) + " " + id +
                               " differs between train and test tables");
      }
    };
    table = std::move(a);
    n_train = table.samples.size();
    merge(table.drug_smiles, b.drug_smiles, "drug");
    merge(table.protein_sequences, b.protein_sequences, "protein");
    table.samples.insert(table.samples.end(), b.samples.begin(),
                         b.samples.end());
    fixed = true;
  }

  SkipManifest local;
  SkipManifest &m = manifest ? *manifest : local;
  m = SkipManifest{};
  Dataset data;

  for (const auto &[id, smiles] : table.drug_smiles) {
    const fs::path sdf = data_dir / "conformers" / (id + ".sdf");
    DrugRecord d;
    d.drug_id = id;
    d.smiles = smiles;
    try {
      d.graph2d = smiles_to_2d_graph(smiles);
    } catch (const ChemistryError &e) {
      m.drugs.push_back({id, std::string("invalid SMILES: ") + e.what()});
      continue;
    }
    if (!fs::exists(sdf)) {
      m.drugs.push_back({id, "missing conformer " + sdf.string()});
      continue;
    }
    try {
      d.graph3d = sdf_to_3d_graph(read_text_file(sdf), kDrugEdgeCutoff,
                                  &d.graph2d);
    } catch (const IntegrityError &e) {
      throw IntegrityError("drug " + id + ": " + e.what());
    } catch (const ParseError &e) {
      throw ParseError("drug " + id + ": " + e.what());
    }
    data.drugs.push_back(std::move(d));
  }

  for (const auto &[id, sequence] : table.protein_sequences) {
    const fs::path pdb = data_dir / "structures" / (id + ".pdb");
    if (!fs::exists(pdb)) {
      m.proteins.push_back({id, "missing structure " + pdb.string()});
      continue;
    }
    ProteinRecord p;
    p.protein_id = id;
    p.sequence = sequence;
    try {
      const PdbStructure s = parse_pdb(read_text_file(pdb));
      std::vector<std::string> warnings;
      p.residue_graph =
          build_residue_graph(s, kResidueContactCutoff, &warnings);
      if (options.warnings)
        for (const std::string &w : warnings)
          options.warnings->push_back("protein " + id + ": " + w);
      const fs::path pocket = data_dir / "pockets" / (id + ".json");
      p.pockets = load_pockets(
          id, fs::exists(pocket) ? std::optional(pocket) : std::nullopt, s,
          options.pocket_atom_cap);
    } catch (const IntegrityError &e) {
      throw IntegrityError("protein " + id + ": " + e.what());
    } catch (const ParseError &e) {
      throw ParseError("protein " + id + ": " + e.what());
    }
    data.proteins.push_back(std::move(p));
  }

  std::vector<int> train, test;
  for (std::size_t i = 0; i < table.samples.size(); ++i) {
    const InteractionSample &s = table.samples[i];
    if (data.drug_index(s.drug_id) < 0 || data.protein_index(s.protein_id) < 0) {
      ++m.dropped_samples;
      continue;
    }
    const int k = static_cast<int>(data.samples.size());
    (i < n_train ? train : test).push_back(k);
    data.samples.push_back(s);
  }
  if (fixed) {
    data.fixed_train = std::move(train);
    data.fixed_test = std::move(test);
  }
  m.kept_samples = data.samples.size();
  m.kept_drugs = data.drugs.size();
  m.kept_proteins = data.proteins.size();
  return data;
}

std::string serialize_dataset(const Dataset &data) {
  BinaryWriter w;
  w.str(kMagic);
  w.u32(kArchiveVersion);
  w.u64(data.samples.size());
  for (const InteractionSample &s : data.samples) {
    w.str(s.drug_id);
    w.str(s.protein_id);
    w.i32(s.label);
  }
  w.u64(data.drugs.size());
  for (const DrugRecord &d : data.drugs)
    write_drug(w, d);
  w.u64(data.proteins.size());
  for (const ProteinRecord &p : data.proteins)
    write_protein(w, p);
  w.u8(data.fixed_train ? 1 : 0);
  if (data.fixed_train) {
    w.ints(*data.fixed_train);
    w.ints(*data.fixed_test);
  }
  return w.bytes();
}

Dataset deserialize_dataset(std::string bytes) {
  BinaryReader r(std::move(bytes), "dataset archive");
  if (r.str() != kMagic)
    throw ParseError("dataset archive: bad magic");
  if (const std::uint32_t v = r.u32(); v != kArchiveVersion)
    throw ParseError("dataset archive: unsupported version " +
                     std::to_string(v));
  Dataset data;
  const std::uint64_t ns = r.u64();
  for (std::uint64_t i = 0; i < ns; ++i) {
    InteractionSample s;
    s.drug_id = r.str();
    s.protein_id = r.str();
    s.label = r.i32();
    data.samples.push_back(std::move(s));
  }
  const std::uint64_t nd = r.u64();
  for (std::uint64_t i = 0; i < nd; ++i)
    data.drugs.push_back(read_drug(r));
  const std::uint64_t np = r.u64();
  for (std::uint64_t i = 0; i < np; ++i)
    data.proteins.push_back(read_protein(r));
  if (r.u8()) {
    data.fixed_train = r.ints();
    data.fixed_test = r.ints();
  }
  if (!r.at_end())
    throw ParseError("dataset archive: trailing bytes");
  return data;
}

void save_dataset(const Dataset &data, const fs::path &path) {
  write_binary_file(path, serialize_dataset(data));
}

Dataset load_dataset(const fs::path &path) {
  return deserialize_dataset(read_text_file(path));
}

std::vector<IndexedSample> index_samples(const Dataset &data) {
  std::vector<IndexedSample> out;
  out.reserve(data.samples.size());
  for (const InteractionSample &s : data.samples) {
    const int d = data.drug_index(s.drug_id);
    const int p = data.protein_index(s.protein_id);
    if (d < 0 || p < 0)
      throw IntegrityError("sample (" + s.drug_id + ", " + s.protein_id +
                           ") references a missing entity");
    out.push_back({d, p, s.label});
  }
  return out;
}

} // namespace tridti
