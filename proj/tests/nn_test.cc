// Copyright 2026 The XREF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xref/nn.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "xref/error.h"
#include "xref/rng.h"

namespace xref {
namespace {

std::vector<Vec> RandomSeq(int n, int dim, Rng& rng) {
  std::vector<Vec> out(n, Vec(dim));
  for (auto& v : out)
    for (double& x : v) x = rng.Uniform(-1, 1);
  return out;
}

TEST(SoftmaxTest, UniformAndShiftInvariant) {
  const Vec p = Softmax(Vec{0, 0, 0});
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
  const Vec a = Softmax(Vec{0.3, -1.2, 2.0});
  const Vec b = Softmax(Vec{50.3, 48.8, 52.0});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
}

TEST(SoftmaxTest, LargeLogitsStayFinite) {
  // Oracle in extended precision.
  for (double big : {100.0, 1000.0}) {
    const Vec p = Softmax(Vec{big, 0});
    const long double e = std::exp(-static_cast<long double>(big));
    const double tail = static_cast<double>(e / (1 + e));
    ASSERT_TRUE(std::isfinite(p[0]) && std::isfinite(p[1]));
    EXPECT_DOUBLE_EQ(p[0], 1.0);
    EXPECT_NEAR(p[1], tail, std::abs(tail) * 1e-12);
  }
  EXPECT_NEAR(Softmax(Vec{100, 0})[1], 3.72007597602e-44, 1e-54);
}

TEST(SoftmaxTest, EmptyThrows) { EXPECT_THROW(Softmax(Vec{}), InvalidArgument); }

TEST(SoftmaxTest, IsDistribution) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Vec z(1 + rng.UniformInt(20));
    for (double& x : z) x = rng.Uniform(-30, 30);
    const Vec p = Softmax(z);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    for (double x : p) EXPECT_GE(x, 0.0);
  }
}

TEST(CrossEntropyTest, Examples) {
  EXPECT_LE(CrossEntropy(Vec{1, 0}, Vec{1, 0}).loss, 1e-9);
  EXPECT_NEAR(CrossEntropy(Vec{.25, .25, .25, .25}, Vec{0, 1, 0, 0}).loss, std::log(4.0), 1e-10);
  EXPECT_NEAR(CrossEntropy(Vec{.5, .5}, Vec{1, 1}).loss, 2 * std::log(2.0), 1e-10);
  EXPECT_THROW(CrossEntropy(Vec{.5, .5}, Vec{1}), ShapeError);
}

TEST(CrossEntropyTest, OneHotGradientIsPredMinusTarget) {
  const Vec p = Softmax(Vec{0.1, 0.7, -0.4});
  const auto r = CrossEntropy(p, Vec{0, 0, 1});
  EXPECT_NEAR(r.grad_logits[0], p[0], 1e-15);
  EXPECT_NEAR(r.grad_logits[2], p[2] - 1, 1e-15);
}

TEST(CrossEntropyTest, GradientMatchesFiniteDifferences) {
  const Vec z = {0.2, -0.3, 1.1};
  const Vec t = {1, 0, 1};
  const auto r = CrossEntropy(Softmax(z), t);
  for (int i = 0; i < 3; ++i) {
    Vec zp = z, zm = z;
    zp[i] += 1e-6;
    zm[i] -= 1e-6;
    const double fd = (CrossEntropy(Softmax(zp), t).loss - CrossEntropy(Softmax(zm), t).loss) / 2e-6;
    EXPECT_NEAR(r.grad_logits[i], fd, 1e-7);
  }
}

TEST(LstmTest, ZeroWeightsGiveZeroStates) {
  BiLstm net(4, 3);
  Rng rng(1);
  const auto h = BiLstmForward(net, RandomSeq(6, 4, rng), nullptr);
  ASSERT_EQ(h.size(), 6u);
  for (const Vec& v : h) {
    ASSERT_EQ(v.size(), 6u);
    for (double x : v) EXPECT_EQ(x, 0.0);
  }
}

TEST(LstmTest, LengthOneAndShapeErrors) {
  BiLstm net(4, 3);
  Rng rng(2);
  net.Init(rng);
  EXPECT_EQ(BiLstmForward(net, RandomSeq(1, 4, rng), nullptr).size(), 1u);
  EXPECT_THROW(BiLstmForward(net, {}, nullptr), ShapeError);
  EXPECT_THROW(BiLstmForward(net, RandomSeq(2, 5, rng), nullptr), ShapeError);
}

TEST(LstmTest, DirectionsReadOppositeWays) {
  BiLstm net(2, 2);
  Rng rng(4);
  net.Init(rng);
  auto xs = RandomSeq(4, 2, rng);
  const auto h = BiLstmForward(net, xs, nullptr);
  xs[3][0] += 1.0;  // last input: forward state at 0 unchanged, backward changes
  const auto h2 = BiLstmForward(net, xs, nullptr);
  EXPECT_EQ(h[0][0], h2[0][0]);
  EXPECT_EQ(h[0][1], h2[0][1]);
  EXPECT_NE(h[0][2], h2[0][2]);
}

// Scalar loss: sum_i r_i . h_i for fixed random r.
TEST(LstmTest, GradientsMatchFiniteDifferences) {
  Rng rng(5);
  BiLstm net(4, 3);
  net.Init(rng);
  const auto r = RandomSeq(5, 6, rng);
  Parameter x("x", 5, 4);
  InitUniform(x.value, 1.0, rng);
  auto inputs = [&] {
    std::vector<Vec> xs;
    for (int i = 0; i < 5; ++i) xs.emplace_back(x.value.row(i).begin(), x.value.row(i).end());
    return xs;
  };
  auto loss = [&] {
    const auto h = BiLstmForward(net, inputs(), nullptr);
    double s = 0;
    for (int i = 0; i < 5; ++i) s += Dot(h[i], r[i]);
    return s;
  };
  std::vector<Parameter*> params = net.params();
  params.push_back(&x);
  ZeroGrads(params);
  BiLstmCache cache;
  BiLstmForward(net, inputs(), &cache);
  const auto dx = BiLstmBackward(net, cache, r);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) x.grad(i, j) = dx[i][j];
  const GradCheckReport rep = GradCheck(loss, params);
  EXPECT_LT(rep.max_rel_error, 1e-4) << rep.worst_param << "[" << rep.worst_index << "]";
  EXPECT_GT(rep.checked, 100);
}

TEST(AttentionTest, SingleKeyAndZeroW) {
  const Matrix w0(3, 2);
  const std::vector<Vec> one = {{1, 2, 3}};
  const auto r = BilinearAttention(w0, Vec{1, 1}, one);
  EXPECT_EQ(r.weights, Vec({1.0}));
  EXPECT_EQ(r.context, one[0]);
  const std::vector<Vec> keys = {{1, 0, 0}, {0, 3, 0}, {2, 0, 6}};
  const auto u = BilinearAttention(w0, Vec{1, 1}, keys);
  for (double x : u.weights) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
  EXPECT_NEAR(u.context[0], 1.0, 1e-15);
  EXPECT_NEAR(u.context[1], 1.0, 1e-15);
  EXPECT_NEAR(u.context[2], 2.0, 1e-15);
  EXPECT_THROW(BilinearAttention(w0, Vec{1, 1}, {}), InvalidArgument);
}

TEST(AttentionTest, GradientsMatchFiniteDifferences) {
  Rng rng(6);
  Parameter w("W", 4, 3), q("q", 1, 3), k("k", 5, 4);
  InitUniform(w.value, 1, rng);
  InitUniform(q.value, 1, rng);
  InitUniform(k.value, 1, rng);
  const Vec r = {0.3, -0.7, 0.2, 0.9};
  const Vec s = {0.5, -0.1, 0.4, 0.2, -0.6};
  auto keys = [&] {
    std::vector<Vec> ks;
    for (int i = 0; i < 5; ++i) ks.emplace_back(k.value.row(i).begin(), k.value.row(i).end());
    return ks;
  };
  // Context term plus a log-weight term that exercises d_scores_extra.
  auto loss = [&] {
    const auto a = BilinearAttention(w.value, q.value.row(0), keys());
    double l = Dot(a.context, r);
    for (int i = 0; i < 5; ++i) l -= s[i] * std::log(a.weights[i]);
    return l;
  };
  std::vector<Parameter*> params = {&w, &q, &k};
  ZeroGrads(params);
  const auto fwd = BilinearAttention(w.value, q.value.row(0), keys());
  const double ssum = std::accumulate(s.begin(), s.end(), 0.0);
  Vec extra(5);
  for (int i = 0; i < 5; ++i) extra[i] = ssum * fwd.weights[i] - s[i];
  const auto g = BilinearAttentionBackward(w.value, w.grad, q.value.row(0), keys(), fwd, r, extra);
  for (int j = 0; j < 3; ++j) q.grad(0, j) = g.d_query[j];
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) k.grad(i, j) = g.d_keys[i][j];
  const auto rep = GradCheck(loss, params);
  EXPECT_LT(rep.max_rel_error, 1e-4) << rep.worst_param;
}

TEST(DenseTanhTest, ZeroAndBoundedAndGradient) {
  Rng rng(7);
  Parameter w("W", 5, 8), b("b", 5, 1);
  for (double y : DenseTanh(w, b, Vec(8, 0.0))) EXPECT_EQ(y, 0.0);
  InitUniform(w.value, 3, rng);
  InitUniform(b.value, 3, rng);
  Parameter x("x", 1, 8);
  InitUniform(x.value, 2, rng);
  for (double y : DenseTanh(w, b, x.value.row(0))) EXPECT_TRUE(y > -1 && y < 1);
  const Vec r = {1, -2, 0.5, 0.3, -0.1};
  auto loss = [&] { return Dot(DenseTanh(w, b, x.value.row(0)), r); };
  std::vector<Parameter*> params = {&w, &b, &x};
  ZeroGrads(params);
  const Vec y = DenseTanh(w, b, x.value.row(0));
  const Vec dx = DenseTanhBackward(w, b, x.value.row(0), y, r);
  for (int j = 0; j < 8; ++j) x.grad(0, j) = dx[j];
  EXPECT_LT(GradCheck(loss, params).max_rel_error, 1e-4);
  EXPECT_THROW(DenseTanh(w, b, Vec(7, 0.0)), ShapeError);
}

TEST(AdamTest, ZeroGradientLeavesParamsAndCountsStep) {
  Parameter p("p", 2, 2);
  p.value(0, 1) = 0.7;
  const Matrix before = p.value;
  Adam adam({&p}, AdamOptions{});
  adam.Step();
  EXPECT_EQ(adam.t(), 1);
  EXPECT_EQ(p.value, before);
}

TEST(AdamTest, FirstStepIsSignedLearningRate) {
  for (double g : {3.0, -0.02, 1e-3}) {
    Parameter p("p", 1, 1);
    p.value(0, 0) = 1.0;
    p.grad(0, 0) = g;
    AdamOptions o;
    Adam adam({&p}, o);
    adam.Step();
    const double update = p.value(0, 0) - 1.0;
    EXPECT_NEAR(update, -o.lr * g / (std::abs(g) + o.eps), 1e-15);
    if (std::abs(g) >= 1e-2) EXPECT_NEAR(update, -o.lr * (g > 0 ? 1 : -1), 1e-6 * o.lr);
    EXPECT_EQ(p.grad(0, 0), 0.0);
  }
}

TEST(AdamTest, MatchesReferenceRecurrence) {
  Parameter p("p", 1, 1);
  const AdamOptions o{0.01, 0.9, 0.999, 1e-8};
  Adam adam({&p}, o);
  double m = 0, v = 0, x = 0;
  const double grads[] = {1.0, -0.5, 2.0, 0.1};
  for (int t = 1; t <= 4; ++t) {
    const double g = grads[t - 1];
    p.grad(0, 0) = g;
    adam.Step();
    m = o.beta1 * m + (1 - o.beta1) * g;
    v = o.beta2 * v + (1 - o.beta2) * g * g;
    x -= o.lr * (m / (1 - std::pow(o.beta1, t))) /
         (std::sqrt(v / (1 - std::pow(o.beta2, t))) + o.eps);
    EXPECT_NEAR(p.value(0, 0), x, 1e-15);
  }
}

TEST(AdamTest, IdenticalRunsAreBitIdentical) {
  auto run = [] {
    Rng rng(42);
    Parameter p("p", 3, 3);
    InitUniform(p.value, 1, rng);
    Adam adam({&p}, AdamOptions{});
    for (int i = 0; i < 10; ++i) {
      for (double& g : p.grad.data()) g = rng.Uniform(-1, 1);
      adam.Step();
    }
    return p.value;
  };
  EXPECT_EQ(run(), run());
}

TEST(ClipTest, Examples) {
  Parameter a("a", 1, 2), b("b", 1, 1);
  std::vector<Parameter*> ps = {&a, &b};
  a.grad(0, 0) = 3;
  EXPECT_EQ(ClipGradients(ps, 5), 1.0);
  EXPECT_EQ(a.grad(0, 0), 3.0);
  a.grad(0, 0) = 6;
  a.grad(0, 1) = 0;
  b.grad(0, 0) = 8;
  EXPECT_DOUBLE_EQ(ClipGradients(ps, 5), 0.5);
  EXPECT_NEAR(GlobalGradNorm(ps), 5.0, 1e-9);
  ZeroGrads(ps);
  EXPECT_EQ(ClipGradients(ps, 5), 1.0);
  EXPECT_TRUE(a.grad.AllFinite());
}

TEST(GradCheckTest, QuadraticIsExact) {
  Rng rng(8);
  Parameter w("w", 3, 4);
  InitUniform(w.value, 2, rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) w.grad(i, j) = 2 * w.value(i, j);
  std::vector<Parameter*> ps = {&w};
  auto f = [&] { return Dot(w.value.data(), w.value.data()); };
  const auto rep = GradCheck(f, ps);
  EXPECT_LT(rep.max_rel_error, 1e-8);
  EXPECT_EQ(rep.checked, 12);
}

TEST(GradCheckTest, DetectsWrongGradient) {
  Parameter w("w", 1, 2);
  w.value(0, 0) = 1;
  w.value(0, 1) = 2;
  w.grad(0, 0) = 2;
  w.grad(0, 1) = 0;  // should be 4
  std::vector<Parameter*> ps = {&w};
  const auto rep = GradCheck([&] { return Dot(w.value.data(), w.value.data()); }, ps);
  EXPECT_GT(rep.max_rel_error, 0.5);
  EXPECT_EQ(rep.worst_index, 1);
}

TEST(GradCheckTest, SamplesCoordinates) {
  Parameter w("w", 10, 10);
  std::vector<Parameter*> ps = {&w};
  GradCheckOptions o;
  o.max_coords_per_param = 7;
  EXPECT_EQ(GradCheck([&] { return 0.0; }, ps, o).checked, 7);
}

}  // namespace
}  // namespace xref
