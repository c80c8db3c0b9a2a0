//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Preprocessing of a raw data directory into a binary dataset archive.
//
// Directory layout:
//   interactions.csv|tsv          or  train.csv|tsv + test.csv|tsv
//   conformers/<drug_id>.sdf
//   structures/<protein_id>.pdb
//   pockets/<protein_id>.json     (optional; whole-chain fallback)
//
// Drugs without a conformer or with unreadable SMILES and proteins without
// a structure are skipped and listed in the manifest, together with the
// interactions that referenced them. Integrity errors (atom-count mismatch,
// unknown pocket atoms, conflicting labels) abort.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tridti/ingest.hpp"

namespace tridti {

inline constexpr std::uint32_t kArchiveVersion = 1;

struct Dataset {
  std::vector<InteractionSample> samples;
  std::vector<DrugRecord> drugs;        // sorted by id
  std::vector<ProteinRecord> proteins;  // sorted by id
  // Sample indices of a predefined train/test partition, when the raw data
  // came as separate train and test tables.
  std::optional<std::vector<int>> fixed_train, fixed_test;

  int drug_index(const std::string &id) const;     // -1 if absent
  int protein_index(const std::string &id) const;  // -1 if absent
};

struct SkippedEntity {
  std::string id;
  std::string reason;
};

struct SkipManifest {
  std::vector<SkippedEntity> drugs, proteins;
  std::size_t dropped_samples = 0;
  std::size_t kept_samples = 0;
  std::size_t kept_drugs = 0, kept_proteins = 0;

  std::string to_json() const;
};

struct PreprocessOptions {
  std::size_t pocket_atom_cap = kDefaultPocketAtomCap;
  std::vector<std::string> *warnings = nullptr;
};

Dataset preprocess_directory(const std::filesystem::path &data_dir,
                             SkipManifest *manifest = nullptr,
                             const PreprocessOptions &options = {});

std::string serialize_dataset(const Dataset &data);
Dataset deserialize_dataset(std::string bytes);
void save_dataset(const Dataset &data, const std::filesystem::path &path);
Dataset load_dataset(const std::filesystem::path &path);

// Drug and protein index of every sample (IntegrityError on a dangling id).
struct IndexedSample {
  int drug = 0;
  int protein = 0;
  int label = 0;
};
std::vector<IndexedSample> index_samples(const Dataset &data);

} // namespace tridti
