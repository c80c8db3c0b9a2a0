//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Shared fixtures: scratch directories and a small preprocessed dataset.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tridti/archive.hpp"
#include "tridti/autograd.hpp"
#include "tridti/config.hpp"
#include "tridti/params.hpp"
#include "tridti/synthetic.hpp"

namespace tridti::test {

class ScratchDir {
public:
  explicit ScratchDir(const std::string &tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("tridti-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &s) const {
    return path_ / s;
  }

private:
  std::filesystem::path path_;
};

// Preprocessed synthetic dataset.
inline Dataset small_dataset(const SyntheticOptions &options) {
  ScratchDir dir("data");
  write_synthetic_dataset(dir.path(), options);
  return preprocess_directory(dir.path());
}

inline SyntheticOptions tiny_options() {
  SyntheticOptions o;
  o.num_drugs = 6;
  o.num_proteins = 3;
  o.min_residues = 16;
  o.max_residues = 24;
  o.balanced_pairs = 0;
  return o;
}

// Very small widths for gradient checks and fast unit tests.
inline ModelConfig tiny_config() {
  ModelConfig c = desk_config();
  c.embed_dim = 8;
  c.attention_heads = 2;
  c.model_dim = 8;
  c.feedforward_dim = 12;
  c.gcn_hidden = 6;
  c.gcn_layers = 2;
  c.tagcn_hidden = 6;
  c.gvp_scalar_hidden = 6;
  c.gvp_vector_hidden = 3;
  c.gvp_layers = 1;
  c.mlp_hidden1 = 8;
  c.mlp_hidden2 = 6;
  c.drug_vocab_size = 40;
  c.protein_vocab_size = 40;
  c.drug_max_len = 32;
  c.protein_max_len = 32;
  c.batch_size = 8;
  c.epochs = 3;
  return c;
}

inline Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng &rng,
                            double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = n(rng);
  return m;
}

inline ag::Parameter make_param(const std::string &name, Matrix value) {
  ag::Parameter p{name, std::move(value), {}};
  p.zero_grad();
  return p;
}

// Largest relative discrepancy between backprop and central differences
// over every entry of `params`; |a - n| / max(|a|, |n|, floor).
inline double gradient_error(const std::vector<ag::Parameter *> &params,
                             const std::function<ag::Var(ag::Tape &)> &f,
                             double h = 1e-6, double floor = 1e-2,
                             std::string *worst = nullptr) {
  for (ag::Parameter *p : params)
    p->zero_grad();
  {
    ag::Tape tape;
    tape.backward(f(tape));
  }
  auto value = [&] {
    ag::Tape tape;
    return f(tape).value()(0, 0);
  };
  double err = 0.0;
  for (ag::Parameter *p : params)
    for (Eigen::Index k = 0; k < p->value.size(); ++k) {
      double &x = p->value.data()[k];
      const double x0 = x;
      x = x0 + h;
      const double up = value();
      x = x0 - h;
      const double down = value();
      x = x0;
      const double numeric = (up - down) / (2 * h);
      const double analytic = p->grad.data()[k];
      const double e = std::abs(numeric - analytic) /
                       std::max({std::abs(numeric), std::abs(analytic), floor});
      if (e > err) {
        err = e;
        if (worst)
          *worst = p->name + "[" + std::to_string(k) + "] numeric " +
                   std::to_string(numeric) + " analytic " +
                   std::to_string(analytic);
      }
    }
  return err;
}

inline std::vector<ag::Parameter *> all_params(ParamStore &store) {
  std::vector<ag::Parameter *> out;
  for (ag::Parameter &p : store)
    out.push_back(&p);
  return out;
}

// Weighted sum of all entries with fixed pseudo-random weights, turning a
// matrix output into a scalar that exercises every entry.
inline ag::Var probe(ag::Tape &tape, ag::Var x, std::uint64_t seed = 99) {
  Rng rng(seed);
  const Matrix w = random_matrix(x.rows(), x.cols(), rng);
  return ag::sum(ag::mul(x, tape.constant(w)));
}

} // namespace tridti::test
