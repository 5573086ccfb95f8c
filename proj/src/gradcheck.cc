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

#include "xref/gradcheck.h"

#include "xref/baselines.h"
#include "xref/config.h"
#include "xref/error.h"
#include "xref/examples.h"
#include "xref/rng.h"
#include "xref/synthetic.h"

namespace xref {
namespace {

Vec RandomVec(int n, Rng& rng) {
  Vec v(n);
  for (double& x : v) x = rng.Uniform(-1.0, 1.0);
  return v;
}

GradCheckReport CheckBiLstm(Rng& rng) {
  constexpr int kIn = 4, kHidden = 3, kLen = 5;
  BiLstm net(kIn, kHidden);
  net.Init(rng);
  Parameter inputs("inputs", kLen, kIn);
  InitUniform(inputs.value, 1.0, rng);
  std::vector<Vec> weights;
  for (int i = 0; i < kLen; ++i) weights.push_back(RandomVec(2 * kHidden, rng));
  auto rows = [&] {
    std::vector<Vec> xs;
    for (int i = 0; i < kLen; ++i) xs.emplace_back(inputs.value.row(i).begin(), inputs.value.row(i).end());
    return xs;
  };
  auto loss = [&] {
    const auto h = BiLstmForward(net, rows(), nullptr);
    double l = 0;
    for (int i = 0; i < kLen; ++i) l += Dot(h[i], weights[i]);
    return l;
  };
  std::vector<Parameter*> params = net.params();
  params.push_back(&inputs);
  ZeroGrads(params);
  BiLstmCache cache;
  BiLstmForward(net, rows(), &cache);
  const auto dx = BiLstmBackward(net, cache, weights);
  for (int i = 0; i < kLen; ++i) Axpy(1.0, dx[i], inputs.grad.row(i));
  return GradCheck(loss, params);
}

GradCheckReport CheckAttention(Rng& rng) {
  constexpr int kKey = 4, kQuery = 3, kKeys = 5;
  Parameter w("W", kKey, kQuery), query("query", kQuery, 1), keys("keys", kKeys, kKey);
  InitUniform(w.value, 1.0, rng);
  InitUniform(query.value, 1.0, rng);
  InitUniform(keys.value, 1.0, rng);
  const Vec r = RandomVec(kKey, rng);
  const Vec g = RandomVec(kKeys, rng);
  auto key_rows = [&] {
    std::vector<Vec> ks;
    for (int i = 0; i < kKeys; ++i) ks.emplace_back(keys.value.row(i).begin(), keys.value.row(i).end());
    return ks;
  };
  auto loss = [&] {
    const auto a = BilinearAttention(w.value, query.value.data(), key_rows());
    return Dot(r, a.context) + Dot(g, a.scores);
  };
  std::vector<Parameter*> params = {&w, &query, &keys};
  ZeroGrads(params);
  const auto ks = key_rows();
  const auto a = BilinearAttention(w.value, query.value.data(), ks);
  const auto grads = BilinearAttentionBackward(w.value, w.grad, query.value.data(), ks, a, r, g);
  Axpy(1.0, grads.d_query, query.grad.data());
  for (int i = 0; i < kKeys; ++i) Axpy(1.0, grads.d_keys[i], keys.grad.row(i));
  return GradCheck(loss, params);
}

GradCheckReport CheckDense(int in, int out, Rng& rng) {
  Parameter w("W", out, in), b("b", out, 1), x("x", in, 1);
  InitUniform(w.value, 1.0, rng);
  InitUniform(b.value, 0.5, rng);
  InitUniform(x.value, 1.0, rng);
  const Vec r = RandomVec(out, rng);
  auto loss = [&] { return Dot(r, DenseTanh(w, b, x.value.data())); };
  std::vector<Parameter*> params = {&w, &b, &x};
  ZeroGrads(params);
  const Vec y = DenseTanh(w, b, x.value.data());
  const Vec dx = DenseTanhBackward(w, b, x.value.data(), y, r);
  Axpy(1.0, dx, x.grad.data());
  return GradCheck(loss, params);
}

GradCheckReport CheckLogistic(Rng& rng) {
  std::vector<FeatureVector> x(12);
  std::vector<double> y(12);
  for (size_t i = 0; i < x.size(); ++i) {
    for (double& v : x[i]) v = rng.Uniform(-2.0, 2.0);
    y[i] = i % 3 == 0 ? 1.0 : 0.0;
  }
  LogReg model;
  FeatureVector mean, scale;
  for (int k = 0; k < kNumFeatures; ++k) {
    mean[k] = rng.Uniform(-0.5, 0.5);
    scale[k] = rng.Uniform(0.5, 2.0);
  }
  model.SetStandardization(mean, scale);
  InitUniform(model.weights().value, 0.5, rng);
  std::vector<Parameter*> params = {&model.weights()};
  ZeroGrads(params);
  model.Loss(x, y, true);
  return GradCheck([&] { return model.Loss(x, y, false); }, params);
}

// Two mentions with several candidates and a non-empty E_a each.
std::vector<LinkingExample> PickBatch(const std::vector<LinkingExample>& all) {
  std::vector<LinkingExample> out;
  for (const auto& ex : all) {
    if (ex.candidate_ids.size() >= 3 && !ex.article_entities.empty() && ex.text.size() <= 80) {
      out.push_back(ex);
      if (out.size() == 2) break;
    }
  }
  if (out.size() < 2) throw Error("gradient check corpus lacks suitable mentions");
  return out;
}

GradCheckReport CheckModel(const Pipeline& pipeline, bool features, uint64_t seed) {
  XrefConfig config = pipeline.config();
  config.ablations.features = features;
  XrefModel model(config.ToModelConfig(), pipeline.embeddings().chars.labels());
  Rng rng(seed);
  model.Init(rng, &pipeline.embeddings().chars);
  // Move away from the initial feature weights so every path carries signal.
  InitUniform(model.FindParam("w")->value, 0.05, rng);
  InitUniform(model.FindParam("b_e")->value, 0.1, rng);
  InitUniform(model.FindParam("b_m")->value, 0.1, rng);

  std::vector<LinkingExample> all = pipeline.Examples(pipeline.data().split.train);
  if (!features) {
    for (auto& ex : all) ex.features.clear();
  }
  const std::vector<LinkingExample> batch = PickBatch(all);
  std::vector<Parameter*> params = model.params();
  ZeroGrads(params);
  model.Loss(batch, true);
  return GradCheck([&] { return model.Loss(batch, false).total; }, params);
}

}  // namespace

std::vector<GradCheckCase> RunGradChecks(uint64_t seed) {
  std::vector<GradCheckCase> out;
  Rng rng(seed);
  out.push_back({"bilstm", CheckBiLstm(rng)});
  out.push_back({"bilinear_attention", CheckAttention(rng)});
  out.push_back({"entity_projection", CheckDense(8, 5, rng)});
  out.push_back({"mention_fusion", CheckDense(12, 5, rng)});
  out.push_back({"logistic_loss", CheckLogistic(rng)});

  SyntheticConfig sc;
  sc.num_entities = 12;
  sc.num_clusters = 2;
  sc.num_articles = 10;
  sc.comments_per_article = 3;
  sc.num_titles = 200;
  XrefConfig config;
  config.dims = {5, 3, 4, 3, 3};
  config.data.synthetic = sc;
  config.training.node2vec.walks_per_node = 2;
  config.training.char_embeddings.epochs = 1;
  const Pipeline pipeline(DatasetFromSynthetic(GenSynthetic(sc, seed)), config, seed);
  out.push_back({"xref_objective_features_on", CheckModel(pipeline, true, seed)});
  out.push_back({"xref_objective_features_off", CheckModel(pipeline, false, seed)});
  return out;
}

}  // namespace xref
