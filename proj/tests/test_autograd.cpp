//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "support.hpp"

namespace tridti {
namespace {

using test::gradient_error;
using test::make_param;
using test::probe;
using test::random_matrix;

class OpGradient : public ::testing::Test {
protected:
  Rng rng{5};
  ag::Parameter a = make_param("a", random_matrix(4, 3, rng));
  ag::Parameter b = make_param("b", random_matrix(4, 3, rng));
  ag::Parameter c = make_param("c", random_matrix(3, 5, rng));
  ag::Parameter row = make_param("row", random_matrix(1, 3, rng));
  ag::Parameter col = make_param("col", random_matrix(4, 1, rng));

  void expect_ok(std::vector<ag::Parameter *> ps,
                 const std::function<ag::Var(ag::Tape &)> &f) {
    std::string worst;
    EXPECT_LT(gradient_error(ps, f, 1e-6, 1e-2, &worst), 1e-4) << worst;
  }
};

TEST_F(OpGradient, Elementwise) {
  expect_ok({&a, &b}, [&](ag::Tape &t) {
    ag::Var x = t.param(a), y = t.param(b);
    ag::Var z = ag::add(ag::mul(x, y), ag::scale(ag::sub(x, y), 0.3));
    z = ag::add(ag::sigmoid(z), ag::exp(ag::scale(x, 0.2)));
    return probe(t, ag::log(ag::add(z, t.constant(Matrix::Constant(4, 3, 2)))));
  });
}

TEST_F(OpGradient, ReluAwayFromKink) {
  a.value = a.value.unaryExpr([](double v) { return v + (v >= 0 ? 0.1 : -0.1); });
  expect_ok({&a}, [&](ag::Tape &t) { return probe(t, ag::relu(t.param(a))); });
}

TEST_F(OpGradient, MatrixProducts) {
  expect_ok({&a, &c, &b}, [&](ag::Tape &t) {
    ag::Var m = ag::matmul(t.param(a), t.param(c));
    ag::Var n = ag::matmul_nt(t.param(a), t.param(b));
    return ag::add(probe(t, m), probe(t, ag::transpose(n), 3));
  });
}

TEST_F(OpGradient, Broadcasts) {
  expect_ok({&a, &row, &col}, [&](ag::Tape &t) {
    ag::Var x = ag::add_bias(t.param(a), t.param(row));
    return probe(t, ag::mul_colwise(x, t.param(col)));
  });
}

TEST_F(OpGradient, Reductions) {
  expect_ok({&a}, [&](ag::Tape &t) {
    ag::Var x = t.param(a);
    ag::Var s = ag::add(ag::sum(x), ag::scale(ag::mean(x), 2.0));
    return ag::add(s, ag::add(probe(t, ag::sum_rows(x)),
                              probe(t, ag::mean_rows(x), 7)));
  });
}

TEST_F(OpGradient, ConcatSliceGatherScatter) {
  expect_ok({&a, &b}, [&](ag::Tape &t) {
    std::vector<ag::Var> cols{t.param(a), t.param(b)};
    ag::Var x = ag::concat_cols(cols);
    std::vector<ag::Var> rows{x, ag::slice_rows(x, 1, 2)};
    ag::Var y = ag::concat_rows(rows);
    ag::Var g = ag::gather_rows(ag::slice_cols(y, 2, 3), {0, 5, 5, 2});
    ag::Var s = ag::scatter_add_rows(g, {1, 0, 1, 1}, 3, {0.5, 2.0, -1.0, 1.0});
    return probe(t, s);
  });
}

TEST_F(OpGradient, SparseProduct) {
  auto s = std::make_shared<SparseMatrix>(3, 4);
  s->insert(0, 1) = 0.5;
  s->insert(2, 3) = -1.5;
  s->insert(1, 0) = 2.0;
  s->makeCompressed();
  expect_ok({&a}, [&](ag::Tape &t) { return probe(t, ag::spmm(s, t.param(a))); });
}

TEST_F(OpGradient, SoftmaxWithMask) {
  expect_ok({&a}, [&](ag::Tape &t) {
    return probe(t, ag::softmax_rows(t.param(a), {true, false, true}));
  });
}

TEST_F(OpGradient, LayerNorm) {
  ag::Parameter g = make_param("g", random_matrix(1, 3, rng));
  expect_ok({&a, &g, &row}, [&](ag::Tape &t) {
    return probe(t, ag::layer_norm(t.param(a), t.param(g), t.param(row)));
  });
}

TEST_F(OpGradient, RowNormalize) {
  expect_ok({&a},
            [&](ag::Tape &t) { return probe(t, ag::row_normalize(t.param(a))); });
}

TEST_F(OpGradient, VectorOps) {
  ag::Parameter v = make_param("v", random_matrix(6, 3, rng));  // 2 nodes
  ag::Parameter gate = make_param("gate", random_matrix(2, 3, rng));
  expect_ok({&v, &gate}, [&](ag::Tape &t) {
    ag::Var x = t.param(v);
    ag::Var n = ag::vector_norms(x);
    ag::Var y = ag::vector_gate(x, ag::sigmoid(t.param(gate)));
    return ag::add(probe(t, n), probe(t, ag::vector_layer_norm(y), 4));
  });
}

TEST_F(OpGradient, MaskedNceAndBce) {
  std::vector<bool> valid{true, true, false, true, true, true, true, false,
                          true, true, true, true};
  expect_ok({&a}, [&](ag::Tape &t) {
    return ag::masked_nce(t.param(a), {0, 2, 2, 1}, valid, 0.25);
  });
  const std::vector<double> y{1, 0, 1, 0};
  expect_ok({&col}, [&](ag::Tape &t) {
    return ag::bce(ag::sigmoid(t.param(col)), y);
  });
}

TEST(Autograd, MaskedSoftmaxColumnsAreExactlyZero) {
  ag::Tape t;
  Matrix x(2, 3);
  x << 1, 2, 3, -1, 0, 4;
  const Matrix y = ag::softmax_rows(t.constant(x), {true, false, true}).value();
  EXPECT_EQ(y(0, 1), 0.0);
  EXPECT_EQ(y(1, 1), 0.0);
  EXPECT_NEAR(y.row(0).sum(), 1.0, 1e-12);
  EXPECT_NEAR(y(0, 0), std::exp(1.0) / (std::exp(1.0) + std::exp(3.0)), 1e-12);
}

TEST(Autograd, VectorLayerNormPreservesDirection) {
  ag::Tape t;
  Matrix v(3, 2);  // one node, two channels
  v << 1, 0, 2, 0, 2, 3;
  const Matrix y = ag::vector_layer_norm(t.constant(v)).value();
  const double n0 = 3.0, n1 = 3.0;
  const double rms = std::sqrt((n0 * n0 + n1 * n1) / 2);
  EXPECT_NEAR(y(0, 0), 1 / rms, 1e-12);
  EXPECT_NEAR(y(2, 1), 3 / rms, 1e-12);
  ag::Tape t2;
  EXPECT_TRUE(ag::vector_layer_norm(t2.constant(Matrix::Zero(3, 2)))
                  .value()
                  .isZero());
}

TEST(Autograd, DropoutIsIdentityOutsideTraining) {
  Rng rng(1);
  const Matrix x = test::random_matrix(5, 4, rng);
  ag::Tape t;
  EXPECT_EQ(ag::dropout(t.constant(x), 0.5).value(), x);
  t.set_training(true, &rng);
  const Matrix y = ag::dropout(t.constant(x), 0.5).value();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    EXPECT_TRUE(y.data()[i] == 0.0 || std::abs(y.data()[i] - 2 * x.data()[i]) < 1e-12);
}

TEST(Autograd, AdamStepMovesAgainstGradient) {
  Rng rng(3);
  ParamStore store;
  ag::Parameter &p = store.create("p", 2, 2, Init::kOnes, rng);
  Adam adam(store, {});
  store.zero_grad();
  p.grad.setConstant(1.0);
  adam.step();
  EXPECT_NEAR(p.value(0, 0), 1.0 - 1e-3, 1e-9);
  EXPECT_EQ(adam.steps(), 1);
}

} // namespace
} // namespace tridti
