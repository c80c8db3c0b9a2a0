//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tridti/error.hpp"
#include "tridti/fusion.hpp"

namespace tridti {

namespace {

constexpr std::uint64_t kShuffleSalt = 0x9e3779b97f4a7c15ULL;

std::vector<std::string> corpus(const std::set<std::string> &items) {
  return {items.begin(), items.end()};
}

double safe_bce(const std::vector<double> &labels,
                const std::vector<double> &probs) {
  return labels.empty() ? 0.0 : bce_loss(labels, probs);
}

// Metrics of a score list. When only one class is present AUC/AUPR are
// reported as NaN with a warning.
Metrics metrics_or_nan(const std::vector<int> &labels,
                       const std::vector<double> &scores, double threshold,
                       std::vector<std::string> *warnings, const char *what) {
  Metrics m;
  if (labels.empty()) {
    m.auc = m.aupr = m.precision = std::nan("");
    return m;
  }
  try {
    m = compute_metrics(labels, scores, threshold, warnings);
  } catch (const ValueError &) {
    if (warnings)
      warnings->push_back(std::string(what) +
                          ": one class only, AUC/AUPR undefined");
    m.auc = m.aupr = std::nan("");
    m.precision = precision_at(labels, scores, threshold, nullptr);
  }
  return m;
}

struct Scored {
  std::vector<int> labels;
  std::vector<double> y;
  std::vector<double> scores;
};

Scored score(const TriModel &model, const TrainingData &prep,
             const std::vector<int> &indices, const VariantPlan &plan) {
  std::vector<PairRef> pairs;
  pairs.reserve(indices.size());
  Scored s;
  for (int i : indices) {
    pairs.push_back(prep.pairs.at(i));
    s.labels.push_back(static_cast<int>(prep.pairs[i].label));
    s.y.push_back(prep.pairs[i].label);
  }
  if (!pairs.empty())
    s.scores = model.predict(pairs, prep.drugs, prep.proteins, plan);
  return s;
}

bool better(const Metrics &candidate, double cand_loss, const Metrics &best,
            double best_loss) {
  const bool ca = std::isfinite(candidate.auc), ba = std::isfinite(best.auc);
  if (ca && ba)
    return candidate.auc > best.auc;
  if (ca != ba)
    return ca;
  return cand_loss < best_loss;
}

nlohmann::ordered_json metrics_json(const Metrics &m) {
  auto num = [](double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v)
                            : nlohmann::ordered_json(nullptr);
  };
  return {{"auc", num(m.auc)}, {"aupr", num(m.aupr)},
          {"precision", num(m.precision)}};
}

nlohmann::ordered_json mean_std_json(const MeanStd &m) {
  nlohmann::ordered_json j = {{"mean", m.mean}, {"count", m.count}};
  j["std"] = m.count >= 2 ? nlohmann::ordered_json(m.std)
                          : nlohmann::ordered_json(nullptr);
  return j;
}

std::string format_mean_std(const MeanStd &m) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  if (m.count == 0) {
    os << "n/a";
    return os.str();
  }
  os << m.mean;
  if (m.count >= 2)
    os << " ± " << m.std;
  return os.str();
}

nlohmann::ordered_json report_json(const TrainReport &r) {
  nlohmann::ordered_json doc;
  doc["dataset"] = r.dataset;
  doc["variant"] = r.variant;
  doc["auc"] = mean_std_json(r.auc);
  doc["aupr"] = mean_std_json(r.aupr);
  doc["precision"] = mean_std_json(r.precision);
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const RunReport &run : r.runs) {
    nlohmann::ordered_json j;
    j["run"] = run.run;
    j["seed"] = run.seed;
    j["best_epoch"] = run.best_epoch;
    j["train"] = metrics_json(run.train);
    j["val"] = metrics_json(run.val);
    j["test"] = metrics_json(run.test);
    nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
    for (const EpochRecord &e : run.epochs)
      epochs.push_back({{"epoch", e.epoch},
                        {"train_loss", e.train_loss},
                        {"val_loss", e.val_loss},
                        {"train", metrics_json(e.train)},
                        {"val", metrics_json(e.val)}});
    j["epochs"] = std::move(epochs);
    j["warnings"] = run.warnings;
    runs.push_back(std::move(j));
  }
  doc["runs"] = std::move(runs);
  return doc;
}

bool same(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

bool same(const Metrics &a, const Metrics &b) {
  return same(a.auc, b.auc) && same(a.aupr, b.aupr)
         && same(a.precision, b.precision);
}

} // namespace

bool operator==(const RunReport &a, const RunReport &b) {
  if (a.run != b.run || a.seed != b.seed || a.best_epoch != b.best_epoch
      || a.epochs.size() != b.epochs.size() || !same(a.train, b.train)
      || !same(a.val, b.val) || !same(a.test, b.test))
    return false;
  for (std::size_t i = 0; i < a.epochs.size(); ++i) {
    const EpochRecord &x = a.epochs[i], &y = b.epochs[i];
    if (x.epoch != y.epoch || !same(x.train_loss, y.train_loss)
        || !same(x.val_loss, y.val_loss) || !same(x.train, y.train)
        || !same(x.val, y.val))
      return false;
  }
  return true;
}

TrainingData prepare_with_vocab(const Dataset &data,
                                const Vocabulary &drug_vocab,
                                const Vocabulary &protein_vocab,
                                const ModelConfig &config) {
  TrainingData t;
  t.drug_vocab = drug_vocab;
  t.protein_vocab = protein_vocab;
  for (const DrugRecord &d : data.drugs)
    t.drugs.push_back(prepare_drug(d, drug_vocab, config.drug_max_len));
  for (const ProteinRecord &p : data.proteins)
    t.proteins.push_back(
        prepare_protein(p, protein_vocab, config.protein_max_len));
  for (const IndexedSample &s : index_samples(data))
    t.pairs.push_back({s.drug, s.protein, static_cast<double>(s.label)});
  return t;
}

TrainingData prepare_training_data(const Dataset &data,
                                   const DatasetSplit &split,
                                   const ModelConfig &config) {
  std::set<std::string> smiles, sequences;
  for (int i : split.train) {
    const InteractionSample &s = data.samples.at(i);
    smiles.insert(data.drugs.at(data.drug_index(s.drug_id)).smiles);
    sequences.insert(
        data.proteins.at(data.protein_index(s.protein_id)).sequence);
  }
  if (smiles.empty())
    throw ValueError("training split is empty");
  const Vocabulary dv =
      train_vocab(corpus(smiles), config.drug_vocab_size, config.min_pair_freq);
  const Vocabulary pv = train_vocab(corpus(sequences),
                                    config.protein_vocab_size,
                                    config.min_pair_freq);
  return prepare_with_vocab(data, dv, pv, config);
}

Metrics evaluate_indices(const TrainedModel &model, const TrainingData &prep,
                         const std::vector<int> &indices, double threshold,
                         std::vector<std::string> *warnings) {
  Scored s = score(*model.model, prep, indices, plan_for(model.variant));
  return metrics_or_nan(s.labels, s.scores, threshold, warnings, "evaluate");
}

RunReport train_run(const ModelConfig &config, const Dataset &data,
                    const DatasetSplit &split, Variant variant,
                    const TrainOptions &options, TrainedModel *out,
                    int run_index) {
  config.validate();
  const VariantPlan plan = plan_for(variant);
  TrainedModel tm;
  tm.config = config;
  tm.variant = variant;
  tm.split = split;
  TrainingData prep = prepare_training_data(data, split, config);
  tm.drug_vocab = prep.drug_vocab;
  tm.protein_vocab = prep.protein_vocab;
  tm.build();
  TriModel &model = *tm.model;
  ParamStore &store = model.params();

  RunReport report;
  report.run = run_index;
  report.seed = config.seed;

  Adam adam(store, {config.learning_rate, 0.9, 0.999, 1e-8,
                    config.weight_decay});
  Rng rng(config.seed ^ kShuffleSalt);

  auto evaluate = [&](const std::vector<int> &idx, const char *what,
                      double *loss) {
    Scored s = score(model, prep, idx, plan);
    if (loss)
      *loss = safe_bce(s.y, s.scores);
    return metrics_or_nan(s.labels, s.scores, config.threshold,
                          &report.warnings, what);
  };

  double best_loss = 0.0;
  Metrics best_val = evaluate(split.val, "validation", &best_loss);
  std::vector<Matrix> best_params = store.snapshot();
  int since_best = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<int> order = seeded_permutation(
        static_cast<int>(split.train.size()), rng());
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<PairRef> batch;
      for (std::size_t k = start; k < end; ++k)
        batch.push_back(prep.pairs.at(split.train[order[k]]));
      ag::Tape tape;
      tape.set_training(true, &rng);
      const std::string where = "epoch " + std::to_string(epoch) +
                                ", batch starting at " + std::to_string(start);
      double l = 0.0;
      try {
        TriModel::Output o =
            model.forward(tape, batch, prep.drugs, prep.proteins, plan);
        l = o.loss.scalar();
        if (!std::isfinite(l))
          throw TrainingError("non-finite loss at " + where);
        store.zero_grad();
        tape.backward(o.loss);
      } catch (const ValueError &e) {
        // Degenerate activations (e.g. zero-norm embeddings) after a diverged
        // update.
        throw TrainingError(std::string(e.what()) + " at " + where);
      }
      adam.step();
      loss_sum += l * static_cast<double>(batch.size());
      seen += batch.size();
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = seen ? loss_sum / static_cast<double>(seen) : 0.0;
    if (options.train_metrics_each_epoch)
      rec.train = evaluate(split.train, "train", nullptr);
    rec.val = evaluate(split.val, "validation", &rec.val_loss);
    report.epochs.push_back(rec);
    if (options.on_epoch)
      options.on_epoch(run_index, rec);

    if (better(rec.val, rec.val_loss, best_val, best_loss)
        || report.best_epoch == 0) {
      best_val = rec.val;
      best_loss = rec.val_loss;
      report.best_epoch = epoch;
      best_params = store.snapshot();
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }

  store.restore(best_params);
  report.train = evaluate(split.train, "train", nullptr);
  report.val = best_val;
  report.test = evaluate(split.test, "test", nullptr);
  std::ostringstream rs;
  rs << rng;
  tm.rng_state = rs.str();
  if (out)
    *out = std::move(tm);
  return report;
}

void TrainReport::summarize() {
  std::vector<double> a, p, q;
  for (const RunReport &r : runs) {
    if (std::isfinite(r.test.auc))
      a.push_back(r.test.auc);
    if (std::isfinite(r.test.aupr))
      p.push_back(r.test.aupr);
    if (std::isfinite(r.test.precision))
      q.push_back(r.test.precision);
  }
  auc = mean_std(a);
  aupr = mean_std(p);
  precision = mean_std(q);
}

std::string TrainReport::to_json() const { return report_json(*this).dump(2); }

std::vector<DatasetSplit> splits_for(const Dataset &data, SplitScheme scheme,
                                     const ModelConfig &config) {
  if (scheme == SplitScheme::kGpcrFixed) {
    if (!data.fixed_train)
      throw UsageError("gpcr_fixed split needs an archive built from "
                       "train/test tables");
    return {gpcr_split(*data.fixed_train, *data.fixed_test, config.seed)};
  }
  return make_splits(static_cast<int>(data.samples.size()), scheme,
                     config.seed, config.runs);
}

TrainReport train_runs(const ModelConfig &config, const Dataset &data,
                       const std::vector<DatasetSplit> &splits,
                       Variant variant, const std::string &dataset_name,
                       const TrainOptions &options, TrainedModel *best) {
  if (splits.empty())
    throw ValueError("train: no splits");
  TrainReport report;
  report.dataset = dataset_name;
  report.variant = std::string(variant_name(variant));
  double best_auc = -1.0;
  for (int r = 0; r < config.runs; ++r) {
    ModelConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(r);
    TrainedModel tm;
    RunReport run = train_run(c, data, splits[r % splits.size()], variant,
                              options, best ? &tm : nullptr, r);
    const double v = std::isfinite(run.val.auc) ? run.val.auc : 0.0;
    if (best && (r == 0 || v > best_auc)) {
      best_auc = v;
      *best = std::move(tm);
    }
    report.runs.push_back(std::move(run));
  }
  report.summarize();
  return report;
}

std::vector<TrainReport> run_ablation(const ModelConfig &config,
                                      const Dataset &data,
                                      const std::vector<DatasetSplit> &splits,
                                      const std::vector<Variant> &variants,
                                      const std::string &dataset_name,
                                      const TrainOptions &options) {
  if (variants.empty())
    throw UsageError("ablation: no variants requested");
  std::vector<TrainReport> out;
  for (Variant v : variants)
    out.push_back(train_runs(config, data, splits, v, dataset_name, options));
  return out;
}

std::string report_table(const std::vector<TrainReport> &reports) {
  std::vector<std::array<std::string, 5>> rows = {
      {"Dataset", "Variant", "AUC", "AUPR", "Precision"}};
  for (const TrainReport &r : reports)
    rows.push_back({r.dataset, r.variant, format_mean_std(r.auc),
                    format_mean_std(r.aupr), format_mean_std(r.precision)});
  // Width in code points; the plus-minus sign is two bytes.
  auto width = [](const std::string &s) {
    std::size_t w = 0;
    for (unsigned char c : s)
      w += (c & 0xC0) != 0x80;
    return w;
  };
  std::array<std::size_t, 5> w{};
  for (const auto &row : rows)
    for (int c = 0; c < 5; ++c)
      w[c] = std::max(w[c], width(row[c]));
  std::ostringstream os;
  for (const auto &row : rows) {
    for (int c = 0; c < 5; ++c) {
      os << row[c];
      if (c < 4)
        os << std::string(w[c] - width(row[c]) + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

std::string reports_json(const std::vector<TrainReport> &reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const TrainReport &r : reports)
    doc.push_back(report_json(r));
  return doc.dump(2) + "\n";
}

Dataset balanced_subsample(const Dataset &data, int n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0)
    throw ValueError("balanced subsample: size must be even and >= 2");
  std::vector<int> pos, neg;
  for (std::size_t i = 0; i < data.samples.size(); ++i)
    (data.samples[i].label == 1 ? pos : neg).push_back(static_cast<int>(i));
  const auto half = static_cast<std::size_t>(n / 2);
  if (pos.size() < half || neg.size() < half)
    throw ValueError("balanced subsample: not enough samples of each class");
  std::vector<int> keep;
  for (auto *cls : {&pos, &neg}) {
    std::vector<int> p =
        seeded_permutation(static_cast<int>(cls->size()), seed);
    for (std::size_t k = 0; k < half; ++k)
      keep.push_back((*cls)[p[k]]);
  }
  std::sort(keep.begin(), keep.end());
  Dataset out;
  out.drugs = data.drugs;
  out.proteins = data.proteins;
  for (int i : keep)
    out.samples.push_back(data.samples[i]);
  return out;
}

} // namespace tridti
