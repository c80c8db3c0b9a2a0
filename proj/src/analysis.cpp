//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tridti/config.hpp"
#include "tridti/contrastive.hpp"
#include "tridti/error.hpp"

namespace tridti {

namespace {

std::vector<RankedEntry> rank(std::vector<std::pair<std::string, double>> s,
                              int k) {
  if (k < 1)
    throw UsageError("rank: k must be >= 1");
  std::sort(s.begin(), s.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second)
      return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<RankedEntry> out;
  for (std::size_t i = 0; i < s.size() && i < static_cast<std::size_t>(k);
       ++i)
    out.push_back({static_cast<int>(i) + 1, s[i].first, s[i].second});
  return out;
}

template <class Entities>
int find_entity(const Entities &list, const std::string &id,
                const char *kind) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].id == id)
      return static_cast<int>(i);
  throw UsageError(std::string("unknown ") + kind + " id '" + id + "'");
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

} // namespace

std::vector<RankedEntry> rank_targets(const TrainedModel &model,
                                      const TrainingData &prep,
                                      const std::string &drug_id,
                                      std::vector<std::string> candidates,
                                      int k) {
  const int d = find_entity(prep.drugs, drug_id, "drug");
  if (candidates.empty())
    for (const PreparedProtein &p : prep.proteins)
      candidates.push_back(p.id);
  std::vector<PairRef> pairs;
  for (const std::string &c : candidates)
    pairs.push_back({d, find_entity(prep.proteins, c, "target"), 0.0});
  const std::vector<double> s = model.model->predict(
      pairs, prep.drugs, prep.proteins, plan_for(model.variant));
  std::vector<std::pair<std::string, double>> scored;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    scored.emplace_back(candidates[i], s[i]);
  return rank(std::move(scored), k);
}

std::vector<RankedEntry> rank_drugs(const TrainedModel &model,
                                    const TrainingData &prep,
                                    const std::string &protein_id,
                                    std::vector<std::string> candidates,
                                    int k) {
  const int p = find_entity(prep.proteins, protein_id, "target");
  if (candidates.empty())
    for (const PreparedDrug &d : prep.drugs)
      candidates.push_back(d.id);
  std::vector<PairRef> pairs;
  for (const std::string &c : candidates)
    pairs.push_back({find_entity(prep.drugs, c, "drug"), p, 0.0});
  const std::vector<double> s = model.model->predict(
      pairs, prep.drugs, prep.proteins, plan_for(model.variant));
  std::vector<std::pair<std::string, double>> scored;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    scored.emplace_back(candidates[i], s[i]);
  return rank(std::move(scored), k);
}

std::string ranking_csv(const std::vector<RankedEntry> &ranking,
                        const std::string &id_column) {
  std::ostringstream os;
  os << "rank," << id_column << ",score\n";
  for (const RankedEntry &e : ranking)
    os << e.rank << ',' << e.id << ',' << fmt(e.score, 9) << '\n';
  return os.str();
}

int similarity_bin(double s) {
  const int b = static_cast<int>(std::floor((s + 1.0) / kSimilarityBinWidth));
  return std::clamp(b, 0, kSimilarityBins - 1);
}

ModalPairSimilarity pair_similarity(const std::string &name,
                                    const std::vector<std::string> &ids,
                                    const std::vector<RowVector> &a,
                                    const std::vector<RowVector> &b) {
  if (a.size() != b.size() || a.size() != ids.size())
    throw DimensionError("similarity: embedding lists differ in length");
  ModalPairSimilarity r;
  r.name = name;
  r.ids = ids;
  int inside = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double s = cosine_sim(a[i], b[i]);
    r.values.push_back(s);
    ++r.histogram[similarity_bin(s)];
    inside += std::abs(s) <= kSimilarityBand;
  }
  const MeanStd ms = mean_std(r.values);
  r.mean = ms.mean;
  r.std = ms.std;
  r.inside_band = r.values.empty()
                      ? 0.0
                      : static_cast<double>(inside) /
                            static_cast<double>(r.values.size());
  return r;
}

SimilarityReport modal_similarity(const TrainedModel &model,
                                  const TrainingData &prep) {
  std::array<std::vector<RowVector>, 3> d, t;
  std::vector<std::string> dids, tids;
  for (const PreparedDrug &x : prep.drugs) {
    auto e = model.model->drug_embeddings(x);
    for (int m = 0; m < 3; ++m)
      d[m].push_back(e[m]);
    dids.push_back(x.id);
  }
  for (const PreparedProtein &x : prep.proteins) {
    auto e = model.model->protein_embeddings(x);
    for (int m = 0; m < 3; ++m)
      t[m].push_back(e[m]);
    tids.push_back(x.id);
  }
  SimilarityReport r;
  const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {1, 2}, {0, 2}}};
  for (auto [a, b] : pairs)
    r.pairs.push_back(pair_similarity("d" + std::to_string(a + 1) + "-d" +
                                          std::to_string(b + 1),
                                      dids, d[a], d[b]));
  for (auto [a, b] : pairs)
    r.pairs.push_back(pair_similarity("t" + std::to_string(a + 1) + "-t" +
                                          std::to_string(b + 1),
                                      tids, t[a], t[b]));
  std::size_t total = 0, inside = 0;
  for (const ModalPairSimilarity &p : r.pairs)
    for (double s : p.values) {
      ++total;
      inside += std::abs(s) <= kSimilarityBand;
    }
  r.inside_band = total ? static_cast<double>(inside) /
                              static_cast<double>(total)
                        : 0.0;
  return r;
}

std::string SimilarityReport::histogram_csv() const {
  std::ostringstream os;
  os << "pair,bin_low,bin_high,count\n";
  for (const ModalPairSimilarity &p : pairs)
    for (int b = 0; b < kSimilarityBins; ++b)
      os << p.name << ',' << fmt(-1.0 + b * kSimilarityBinWidth) << ','
         << fmt(-1.0 + (b + 1) * kSimilarityBinWidth) << ',' << p.histogram[b]
         << '\n';
  return os.str();
}

std::string SimilarityReport::values_csv() const {
  std::ostringstream os;
  os << "pair,entity_id,cosine\n";
  for (const ModalPairSimilarity &p : pairs)
    for (std::size_t i = 0; i < p.values.size(); ++i)
      os << p.name << ',' << p.ids[i] << ',' << fmt(p.values[i], 9) << '\n';
  return os.str();
}

std::string SimilarityReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["band"] = {-kSimilarityBand, kSimilarityBand};
  doc["inside_band_fraction"] = inside_band;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const ModalPairSimilarity &p : pairs)
    list.push_back({{"pair", p.name},
                    {"count", p.values.size()},
                    {"mean", p.mean},
                    {"std", p.std},
                    {"inside_band_fraction", p.inside_band},
                    {"histogram", p.histogram}});
  doc["pairs"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string SimilarityReport::to_svg() const {
  // Six histogram panels in a 3 x 2 grid, band [-0.25, 0.25] shaded.
  constexpr int pw = 300, ph = 180, margin = 30;
  const int cols = 3, rows = static_cast<int>((pairs.size() + 2) / 3);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << cols * (pw + margin) + margin << "\" height=\""
     << rows * (ph + 2 * margin) + margin
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const ModalPairSimilarity &p = pairs[k];
    const int x0 = margin + static_cast<int>(k % cols) * (pw + margin);
    const int y0 = margin + static_cast<int>(k / cols) * (ph + 2 * margin);
    const int peak =
        std::max(1, *std::max_element(p.histogram.begin(), p.histogram.end()));
    const double bw = static_cast<double>(pw) / kSimilarityBins;
    const double band_x = x0 + (1.0 - kSimilarityBand) / 2.0 * pw;
    os << "<rect x=\"" << band_x << "\" y=\"" << y0 << "\" width=\""
       << kSimilarityBand * pw << "\" height=\"" << ph
       << "\" fill=\"#eeeeee\"/>\n";
    for (int b = 0; b < kSimilarityBins; ++b) {
      if (p.histogram[b] == 0)
        continue;
      const double h = static_cast<double>(p.histogram[b]) / peak * ph;
      os << "<rect x=\"" << x0 + b * bw << "\" y=\"" << y0 + ph - h
         << "\" width=\"" << bw - 1 << "\" height=\"" << h
         << "\" fill=\"#4477aa\"/>\n";
    }
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 + ph << "\" x2=\""
       << x0 + pw << "\" y2=\"" << y0 + ph << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x0 << "\" y=\"" << y0 + ph + 14 << "\">-1</text>\n";
    os << "<text x=\"" << x0 + pw / 2 - 3 << "\" y=\"" << y0 + ph + 14
       << "\">0</text>\n";
    os << "<text x=\"" << x0 + pw - 6 << "\" y=\"" << y0 + ph + 14
       << "\">1</text>\n";
    os << "<text x=\"" << x0 << "\" y=\"" << y0 - 6 << "\">" << p.name
       << "  inside band: " << fmt(p.inside_band, 3) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::vector<std::pair<std::string, std::string>>>
SweepGrid::points() const {
  std::vector<std::vector<std::pair<std::string, std::string>>> out;
  if (axes.empty())
    return out;
  if (!cartesian) {
    for (const SweepAxis &a : axes)
      for (const std::string &v : a.second)
        out.push_back({{a.first, v}});
    return out;
  }
  out.push_back({});
  for (const SweepAxis &a : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto &p : out)
      for (const std::string &v : a.second) {
        auto q = p;
        q.emplace_back(a.first, v);
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

SweepGrid parse_sweep_grid(std::string_view json_text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    throw UsageError(std::string("sweep grid: invalid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw UsageError("sweep grid: top level must be an object");
  SweepGrid g;
  const std::vector<std::string> keys = config_keys();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw UsageError("sweep grid: unknown key '" + it.key() + "'");
    if (!it.value().is_array() || it.value().empty())
      throw UsageError("sweep grid: '" + it.key() +
                       "' must be a non-empty list");
    SweepAxis a{it.key(), {}};
    for (const auto &v : it.value())
      a.second.push_back(v.dump());
    g.axes.push_back(std::move(a));
  }
  if (g.axes.empty())
    throw UsageError("sweep grid is empty");
  return g;
}

SweepGrid default_sweep_grid() {
  SweepGrid g;
  g.cartesian = false;
  g.axes = {{"dropout", {"0.1", "0.2", "0.3", "0.4", "0.5"}},
            {"learning_rate", {"0.0001", "0.0005", "0.001", "0.005", "0.01"}},
            {"gcn_layers", {"1", "2", "3", "4"}},
            {"attention_heads", {"1", "2", "4", "8"}}};
  return g;
}

std::vector<SweepRow> run_sweep(const ModelConfig &base, const Dataset &data,
                                SplitScheme scheme, const SweepGrid &grid,
                                const std::string &dataset_name,
                                const TrainOptions &options) {
  const auto points = grid.points();
  if (points.empty())
    throw UsageError("sweep grid is empty");
  const std::vector<DatasetSplit> splits = splits_for(data, scheme, base);
  std::vector<SweepRow> rows;
  for (const auto &point : points) {
    ModelConfig c = base;
    for (const auto &[k, v] : point)
      set_config_value(c, k, v);
    try {
      c.validate();
    } catch (const ValueError &e) {
      throw UsageError(std::string("sweep point: ") + e.what());
    }
    rows.push_back({point, train_runs(c, data, splits, Variant::kAll,
                                      dataset_name, options)});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
  std::vector<std::string> keys;
  for (const SweepRow &r : rows)
    for (const auto &kv : r.setting)
      if (std::find(keys.begin(), keys.end(), kv.first) == keys.end())
        keys.push_back(kv.first);
  std::ostringstream os;
  for (const std::string &k : keys)
    os << k << ',';
  os << "auc_mean,auc_std,aupr_mean,aupr_std,precision_mean,precision_std\n";
  for (const SweepRow &r : rows) {
    for (const std::string &k : keys) {
      auto it = std::find_if(r.setting.begin(), r.setting.end(),
                             [&](const auto &kv) { return kv.first == k; });
      os << (it == r.setting.end() ? "" : it->second) << ',';
    }
    const TrainReport &t = r.report;
    os << fmt(t.auc.mean) << ',' << fmt(t.auc.std) << ',' << fmt(t.aupr.mean)
       << ',' << fmt(t.aupr.std) << ',' << fmt(t.precision.mean) << ','
       << fmt(t.precision.std) << '\n';
  }
  return os.str();
}

std::string sweep_json(const std::vector<SweepRow> &rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SweepRow &r : rows) {
    nlohmann::ordered_json setting = nlohmann::ordered_json::object();
    for (const auto &[k, v] : r.setting)
      setting[k] = nlohmann::ordered_json::parse(v);
    doc.push_back({{"setting", setting},
                   {"report", nlohmann::ordered_json::parse(
                                  r.report.to_json())}});
  }
  return doc.dump(2) + "\n";
}

} // namespace tridti
