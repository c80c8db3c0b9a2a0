//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tridti/analysis.hpp"
#include "tridti/archive.hpp"
#include "tridti/checkpoint.hpp"
#include "tridti/config.hpp"
#include "tridti/error.hpp"
#include "tridti/synthetic.hpp"
#include "tridti/trainer.hpp"

namespace fs = std::filesystem;

namespace tridti::cli {

namespace {

constexpr const char *kArchiveFile = "dataset.bin";
constexpr const char *kManifestFile = "manifest.json";
constexpr const char *kCheckpointFile = "model.ckpt";

void write_text(const fs::path &path, const std::string &text) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw ParseError("cannot write '" + path.string() + "'");
  f << text;
}

// An archive argument may name the file or the preprocess output directory.
Dataset open_dataset(const fs::path &p) {
  return load_dataset(fs::is_directory(p) ? p / kArchiveFile : p);
}

TrainedModel open_checkpoint(const fs::path &p) {
  return load_checkpoint(fs::is_directory(p) ? p / kCheckpointFile : p);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

struct Common {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  bool desk = false;
  std::string out = ".";

  void attach(CLI::App *c, bool with_out = true) {
    c->add_option("--config", config_file, "JSON file with ModelConfig keys");
    c->add_option("--seed", seed, "Base seed (overrides the config)");
    c->add_flag("--desk", desk, "Start from the small desk-scale config");
    if (with_out)
      c->add_option("--out", out, "Output directory")->capture_default_str();
  }

  ModelConfig config() const {
    ModelConfig c = desk ? desk_config() : ModelConfig{};
    if (!config_file.empty())
      c = load_config(config_file, c);
    if (seed)
      c.seed = *seed;
    c.validate();
    return c;
  }
};

TrainOptions progress_options(bool progress, std::ostream &err) {
  TrainOptions o;
  if (progress)
    o.on_epoch = [&err](int run, const EpochRecord &e) {
      err << "progress run=" << run << " epoch=" << e.epoch
          << " train_loss=" << e.train_loss << " val_loss=" << e.val_loss
          << " train_auc=" << e.train.auc << " val_auc=" << e.val.auc << '\n';
    };
  return o;
}

std::string quoted(const std::string &s) { return nlohmann::json(s).dump(); }

int fail(std::ostream &err, const std::string &kind, int code,
         const std::string &message) {
  err << "tridti: error kind=" << kind << " code=" << code
      << " message=" << quoted(message) << '\n';
  return code;
}

int classify(const Error &e) {
  const std::string &k = e.kind();
  if (k == "usage" || k == "value")
    return kUsage;
  if (k == "training")
    return kTraining;
  return kData;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Drug-target interaction prediction from sequence, graph and "
               "3D structure",
               "tridti"};
  app.require_subcommand(1);
  std::function<void()> action;

  // demo-data
  SyntheticOptions demo;
  std::string demo_out;
  auto *c_demo = app.add_subcommand(
      "demo-data", "Write a small deterministic dataset in the raw layout");
  c_demo->add_option("--out", demo_out, "Target directory")->required();
  c_demo->add_option("--seed", demo.seed)->capture_default_str();
  c_demo->add_option("--drugs", demo.num_drugs)->capture_default_str();
  c_demo->add_option("--proteins", demo.num_proteins)->capture_default_str();
  c_demo->add_option("--pairs", demo.balanced_pairs,
                     "Positives (and negatives) kept; 0 keeps all")
      ->capture_default_str();
  c_demo->add_option("--missing-conformers", demo.drugs_without_conformer);
  c_demo->add_option("--pocketless", demo.proteins_without_pockets,
                     "Proteins without a pocket file");
  c_demo->add_flag("--fixed-split", demo.fixed_split,
                   "Write train.csv/test.csv");
  c_demo->callback([&] {
    action = [&] {
      write_synthetic_dataset(demo_out, demo);
      out << "wrote " << demo_out << '\n';
    };
  });

  // preprocess
  std::string data_dir;
  std::size_t pocket_cap = kDefaultPocketAtomCap;
  Common pre;
  auto *c_pre = app.add_subcommand(
      "preprocess", "Parse a raw data directory into a binary archive");
  c_pre->add_option("data_dir", data_dir)->required();
  c_pre->add_option("--pocket-cap", pocket_cap)->capture_default_str();
  pre.attach(c_pre);
  c_pre->callback([&] {
    action = [&] {
      SkipManifest manifest;
      std::vector<std::string> warnings;
      PreprocessOptions opts;
      opts.pocket_atom_cap = pocket_cap;
      opts.warnings = &warnings;
      const Dataset data = preprocess_directory(data_dir, &manifest, opts);
      fs::create_directories(pre.out);
      save_dataset(data, fs::path(pre.out) / kArchiveFile);
      write_text(fs::path(pre.out) / kManifestFile, manifest.to_json());
      for (const std::string &w : warnings)
        err << "warning " << quoted(w) << '\n';
      out << "drugs=" << data.drugs.size()
          << " proteins=" << data.proteins.size()
          << " samples=" << data.samples.size()
          << " skipped_drugs=" << manifest.drugs.size()
          << " skipped_proteins=" << manifest.proteins.size() << '\n';
    };
  });

  // train-vocab
  std::string vocab_archive;
  Common voc;
  auto *c_voc = app.add_subcommand(
      "train-vocab", "Train the drug and protein subword vocabularies");
  c_voc->add_option("archive", vocab_archive)->required();
  voc.attach(c_voc);
  c_voc->callback([&] {
    action = [&] {
      const ModelConfig cfg = voc.config();
      const Dataset data = open_dataset(vocab_archive);
      std::vector<std::string> smiles, seqs;
      for (const DrugRecord &d : data.drugs)
        smiles.push_back(d.smiles);
      for (const ProteinRecord &p : data.proteins)
        seqs.push_back(p.sequence);
      const Vocabulary dv =
          train_vocab(smiles, cfg.drug_vocab_size, cfg.min_pair_freq);
      const Vocabulary pv =
          train_vocab(seqs, cfg.protein_vocab_size, cfg.min_pair_freq);
      fs::create_directories(voc.out);
      dv.save(fs::path(voc.out) / "drug_vocab.json");
      pv.save(fs::path(voc.out) / "protein_vocab.json");
      out << "drug_vocab=" << dv.size() << " protein_vocab=" << pv.size()
          << '\n';
    };
  });

  // train
  std::string train_archive, variant_arg = "all", scheme_name =
                                                       "repeated_8_1_1";
  bool progress = false;
  Common tr;
  auto *c_train = app.add_subcommand(
      "train", "Train repeated runs; writes report and best checkpoint");
  c_train->add_option("archive", train_archive)->required();
  c_train->add_option("--variant", variant_arg)->capture_default_str();
  c_train->add_option("--scheme", scheme_name,
                      "repeated_8_1_1, gpcr_fixed or kfold_5")
      ->capture_default_str();
  c_train->add_flag("--progress", progress, "Per-epoch lines on stderr");
  tr.attach(c_train);
  c_train->callback([&] {
    action = [&] {
      const ModelConfig cfg = tr.config();
      const Variant variant = parse_variant(variant_arg);
      const Dataset data = open_dataset(train_archive);
      const auto splits =
          splits_for(data, parse_split_scheme(scheme_name), cfg);
      TrainedModel best;
      const TrainReport report =
          train_runs(cfg, data, splits, variant,
                     fs::path(train_archive).stem().string(),
                     progress_options(progress, err), &best);
      const fs::path dir(tr.out);
      fs::create_directories(dir);
      save_checkpoint(best, dir / kCheckpointFile);
      write_text(dir / "config.json", config_to_json(cfg));
      write_text(dir / "report.json", report.to_json());
      write_text(dir / "report.txt", report_table({report}));
      out << report_table({report});
    };
  });

  // evaluate
  std::string eval_ckpt, eval_archive;
  double eval_threshold = -1.0;
  auto *c_eval = app.add_subcommand(
      "evaluate", "Metrics of a checkpoint on its train/val/test partitions");
  c_eval->add_option("checkpoint", eval_ckpt)->required();
  c_eval->add_option("archive", eval_archive)->required();
  c_eval->add_option("--threshold", eval_threshold,
                     "Precision threshold (default: from the config)");
  c_eval->callback([&] {
    action = [&] {
      const TrainedModel m = open_checkpoint(eval_ckpt);
      const Dataset data = open_dataset(eval_archive);
      const int n = static_cast<int>(data.samples.size());
      for (const auto *part : {&m.split.train, &m.split.val, &m.split.test})
        for (int i : *part)
          if (i < 0 || i >= n)
            throw IntegrityError(
                "checkpoint split does not fit this archive (sample " +
                std::to_string(i) + ")");
      const TrainingData prep =
          prepare_with_vocab(data, m.drug_vocab, m.protein_vocab, m.config);
      const double t = eval_threshold >= 0 ? eval_threshold : m.config.threshold;
      nlohmann::ordered_json doc;
      doc["variant"] = std::string(variant_name(m.variant));
      std::vector<std::string> warnings;
      auto put = [&](const char *name, const std::vector<int> &idx) {
        if (idx.empty())
          return;
        const Metrics r = evaluate_indices(m, prep, idx, t, &warnings);
        doc[name] = {{"auc", r.auc}, {"aupr", r.aupr},
                     {"precision", r.precision}, {"count", idx.size()}};
      };
      put("train", m.split.train);
      put("val", m.split.val);
      put("test", m.split.test);
      doc["warnings"] = warnings;
      out << doc.dump(2) << '\n';
    };
  });

  // ablate
  std::string abl_archive, abl_variants, abl_scheme = "repeated_8_1_1";
  bool abl_progress = false;
  Common ab;
  auto *c_abl = app.add_subcommand("ablate", "Train each model variant");
  c_abl->add_option("archive", abl_archive)->required();
  c_abl->add_option("--variants", abl_variants,
                    "Comma-separated variants (default: all of them)");
  c_abl->add_option("--scheme", abl_scheme)->capture_default_str();
  c_abl->add_flag("--progress", abl_progress);
  ab.attach(c_abl);
  c_abl->callback([&] {
    action = [&] {
      const ModelConfig cfg = ab.config();
      std::vector<Variant> variants;
      if (abl_variants.empty())
        variants.assign(kAllVariants.begin(), kAllVariants.end());
      else
        for (const std::string &v : split_list(abl_variants))
          variants.push_back(parse_variant(v));
      const Dataset data = open_dataset(abl_archive);
      const auto splits = splits_for(data, parse_split_scheme(abl_scheme), cfg);
      const auto reports =
          run_ablation(cfg, data, splits, variants,
                       fs::path(abl_archive).stem().string(),
                       progress_options(abl_progress, err));
      fs::create_directories(ab.out);
      write_text(fs::path(ab.out) / "ablation.json", reports_json(reports));
      write_text(fs::path(ab.out) / "ablation.txt", report_table(reports));
      out << report_table(reports);
    };
  });

  // sweep
  std::string sw_archive, sw_grid, sw_scheme = "repeated_8_1_1";
  bool sw_progress = false;
  Common sw;
  auto *c_sw = app.add_subcommand("sweep", "Train every point of a grid");
  c_sw->add_option("archive", sw_archive)->required();
  c_sw->add_option("--grid", sw_grid,
                   "JSON grid file; default varies dropout, learning_rate, "
                   "gcn_layers and attention_heads one at a time");
  c_sw->add_option("--scheme", sw_scheme)->capture_default_str();
  c_sw->add_flag("--progress", sw_progress);
  sw.attach(c_sw);
  c_sw->callback([&] {
    action = [&] {
      const ModelConfig cfg = sw.config();
      const SweepGrid grid = sw_grid.empty()
                                 ? default_sweep_grid()
                                 : parse_sweep_grid(read_text_file(sw_grid));
      const Dataset data = open_dataset(sw_archive);
      const auto rows = run_sweep(cfg, data, parse_split_scheme(sw_scheme),
                                  grid, fs::path(sw_archive).stem().string(),
                                  progress_options(sw_progress, err));
      fs::create_directories(sw.out);
      write_text(fs::path(sw.out) / "sweep.csv", sweep_csv(rows));
      write_text(fs::path(sw.out) / "sweep.json", sweep_json(rows));
      out << sweep_csv(rows);
    };
  });

  // rank-targets / rank-drugs
  struct RankArgs {
    std::string ckpt, archive, id, candidates, out;
    int k = 10;
  };
  RankArgs rt, rd;
  auto add_rank = [&](const char *name, const char *help, RankArgs &a,
                      const char *id_flag, bool targets) {
    auto *c = app.add_subcommand(name, help);
    c->add_option("checkpoint", a.ckpt)->required();
    c->add_option("archive", a.archive)->required();
    c->add_option(id_flag, a.id)->required();
    c->add_option("--candidates", a.candidates,
                  "Comma-separated ids (default: every entity)");
    c->add_option("-k,--top", a.k)->capture_default_str();
    c->add_option("--out", a.out, "CSV file (default: stdout)");
    c->callback([&, targets] {
      action = [&, targets] {
        const TrainedModel m = open_checkpoint(a.ckpt);
        const Dataset data = open_dataset(a.archive);
        const TrainingData prep =
            prepare_with_vocab(data, m.drug_vocab, m.protein_vocab, m.config);
        const auto ranking =
            targets ? rank_targets(m, prep, a.id, split_list(a.candidates), a.k)
                    : rank_drugs(m, prep, a.id, split_list(a.candidates), a.k);
        const std::string csv =
            ranking_csv(ranking, targets ? "target_id" : "drug_id");
        if (a.out.empty())
          out << csv;
        else
          write_text(a.out, csv);
      };
    });
  };
  add_rank("rank-targets", "Top-k candidate targets for one drug", rt,
           "--drug", true);
  add_rank("rank-drugs", "Top-k candidate drugs for one target", rd,
           "--target", false);

  // modal-similarity
  std::string ms_ckpt, ms_archive, ms_out = ".";
  auto *c_ms = app.add_subcommand(
      "modal-similarity",
      "Cosine similarity between the modality embeddings of each entity");
  c_ms->add_option("checkpoint", ms_ckpt)->required();
  c_ms->add_option("archive", ms_archive)->required();
  c_ms->add_option("--out", ms_out)->capture_default_str();
  c_ms->callback([&] {
    action = [&] {
      const TrainedModel m = open_checkpoint(ms_ckpt);
      const Dataset data = open_dataset(ms_archive);
      const TrainingData prep =
          prepare_with_vocab(data, m.drug_vocab, m.protein_vocab, m.config);
      const SimilarityReport r = modal_similarity(m, prep);
      const fs::path dir(ms_out);
      fs::create_directories(dir);
      write_text(dir / "similarity.json", r.to_json());
      write_text(dir / "similarity_histogram.csv", r.histogram_csv());
      write_text(dir / "similarity_values.csv", r.values_csv());
      write_text(dir / "similarity.svg", r.to_svg());
      out << "inside_band_fraction=" << r.inside_band << '\n';
      for (const ModalPairSimilarity &p : r.pairs)
        out << p.name << " mean=" << p.mean << " std=" << p.std
            << " inside_band=" << p.inside_band << '\n';
    };
  });

  std::vector<const char *> argv;
  for (const std::string &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    return fail(err, "usage", kUsage, e.what());
  } catch (const Error &e) {
    return fail(err, e.kind(), classify(e), e.what());
  }

  try {
    if (action)
      action();
    return kOk;
  } catch (const Error &e) {
    return fail(err, e.kind(), classify(e), e.what());
  } catch (const nlohmann::json::exception &e) {
    return fail(err, "parse", kData, e.what());
  } catch (const fs::filesystem_error &e) {
    return fail(err, "io", kData, e.what());
  } catch (const std::exception &e) {
    return fail(err, "internal", kTraining, e.what());
  }
}

} // namespace tridti::cli
