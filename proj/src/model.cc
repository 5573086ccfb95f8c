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

#include "xref/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xref/candidates.h"
#include "xref/error.h"
#include "xref/log.h"
#include "xref/text.h"

namespace xref {
namespace {

constexpr int kCheckpointVersion = 1;

double GlorotRange(const Matrix& m) { return std::sqrt(6.0 / (m.rows() + m.cols())); }

int ArgMax(const Vec& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

bool IsGold(const LinkingExample& ex, const std::string& id) {
  if (ex.gold.empty()) return id == kNilId;
  return std::find(ex.gold.begin(), ex.gold.end(), id) != ex.gold.end();
}

Json MatrixToJson(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

void MatrixFromJson(const Json& j, Matrix& m, const std::string& name) {
  if (!j.is_array() || static_cast<int>(j.size()) != m.rows()) {
    throw ShapeError("checkpoint parameter " + name + " should have " +
                     std::to_string(m.rows()) + " rows");
  }
  for (int r = 0; r < m.rows(); ++r) {
    const auto row = j[r].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != m.cols()) {
      throw ShapeError("checkpoint parameter " + name + " should have " +
                       std::to_string(m.cols()) + " columns");
    }
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
}

std::string_view BaseStateName(BaseStateMode m) {
  return m == BaseStateMode::kFinalStates ? "final_states" : "last_position";
}

std::string_view NilModeName(NilMode m) {
  return m == NilMode::kTrainableVector ? "trainable_vector" : "fixed_bias";
}

}  // namespace

Vec LinkingExample::Targets() const {
  Vec t(candidate_ids.size(), 0.0);
  for (size_t i = 0; i < candidate_ids.size(); ++i) {
    if (IsGold(*this, candidate_ids[i])) t[i] = 1.0;
  }
  return t;
}

Vec LinkingExample::AttentionTargets() const {
  Vec t(article_entities.size() + 1, 0.0);
  bool any = false;
  for (size_t j = 0; j < article_entities.size(); ++j) {
    if (std::find(gold.begin(), gold.end(), article_entities[j]) != gold.end()) {
      t[j] = 1.0;
      any = true;
    }
  }
  if (!any) t.back() = 1.0;
  return t;
}

void ModelConfig::Validate() const {
  if (char_dim < 1 || hidden < 1 || joint_dim < 1 || entity_dim < 1) {
    throw InvalidArgument("model dimensions must be positive");
  }
  if (lambda < 0) throw InvalidArgument("lambda must be >= 0");
}

Json ModelConfig::ToJson() const {
  return Json{{"char_dim", char_dim},
              {"hidden", hidden},
              {"joint_dim", joint_dim},
              {"entity_dim", entity_dim},
              {"comment_attention", comment_attention},
              {"article_attention", article_attention},
              {"features", features},
              {"lambda", lambda},
              {"normalize_att_targets", normalize_att_targets},
              {"freeze_char_emb", freeze_char_emb},
              {"base_state", BaseStateName(base_state)},
              {"nil_mode", NilModeName(nil_mode)},
              {"nil_bias", nil_bias}};
}

ModelConfig ModelConfig::FromJson(const Json& j) {
  ModelConfig c;
  c.char_dim = j.value("char_dim", c.char_dim);
  c.hidden = j.value("hidden", c.hidden);
  c.joint_dim = j.value("joint_dim", c.joint_dim);
  c.entity_dim = j.value("entity_dim", c.entity_dim);
  c.comment_attention = j.value("comment_attention", c.comment_attention);
  c.article_attention = j.value("article_attention", c.article_attention);
  c.features = j.value("features", c.features);
  c.lambda = j.value("lambda", c.lambda);
  c.normalize_att_targets = j.value("normalize_att_targets", c.normalize_att_targets);
  c.freeze_char_emb = j.value("freeze_char_emb", c.freeze_char_emb);
  const std::string base = j.value("base_state", std::string(BaseStateName(c.base_state)));
  if (base == "final_states") {
    c.base_state = BaseStateMode::kFinalStates;
  } else if (base == "last_position") {
    c.base_state = BaseStateMode::kLastPosition;
  } else {
    throw InvalidArgument("unknown base_state: " + base);
  }
  const std::string nil = j.value("nil_mode", std::string(NilModeName(c.nil_mode)));
  if (nil == "trainable_vector") {
    c.nil_mode = NilMode::kTrainableVector;
  } else if (nil == "fixed_bias") {
    c.nil_mode = NilMode::kFixedBias;
  } else {
    throw InvalidArgument("unknown nil_mode: " + nil);
  }
  c.nil_bias = j.value("nil_bias", c.nil_bias);
  c.Validate();
  return c;
}

XrefModel::XrefModel(ModelConfig config, std::vector<std::string> char_vocab)
    : config_(std::move(config)), char_vocab_(std::move(char_vocab)) {
  config_.Validate();
  if (char_vocab_.empty()) throw InvalidArgument("character vocabulary needs the UNK entry");
  for (size_t i = 1; i < char_vocab_.size(); ++i) {
    const std::u32string c = Utf8ToU32(char_vocab_[i]);
    if (c.size() != 1) {
      throw InvalidArgument("character vocabulary entry is not one character: " +
                            char_vocab_[i]);
    }
    char_ids_.emplace(c[0], static_cast<int>(i));
  }
  const int v = static_cast<int>(char_vocab_.size());
  const int h2 = 2 * config_.hidden;
  char_emb_ = Parameter("char_emb", v, config_.char_dim);
  lstm_ = BiLstm(config_.char_dim + 1, config_.hidden);
  w_c_ = Parameter("W_c", h2, config_.char_dim);
  w_a_ = Parameter("W_a", config_.entity_dim, config_.char_dim);
  w_e_ = Parameter("W_e", config_.joint_dim, config_.entity_dim);
  b_e_ = Parameter("b_e", config_.joint_dim, 1);
  w_m_ = Parameter("W_m", config_.joint_dim, config_.fusion_input_dim());
  b_m_ = Parameter("b_m", config_.joint_dim, 1);
  w_ = Parameter("w", 1, 1 + kNumFeatures);
  v_nil_ = Parameter("v_nil", config_.joint_dim, 1);
}

void XrefModel::Init(Rng& rng, const EmbeddingTable* char_init) {
  if (char_init && char_init->dim() != config_.char_dim) {
    throw ShapeError("character embeddings have dim " + std::to_string(char_init->dim()) +
                     ", model expects " + std::to_string(config_.char_dim));
  }
  InitUniform(char_emb_.value, 0.1, rng);
  if (char_init) {
    for (size_t i = 0; i < char_vocab_.size(); ++i) {
      const int k = char_init->IndexOf(char_vocab_[i]);
      if (k < 0) continue;
      auto src = char_init->row(k);
      std::copy(src.begin(), src.end(), char_emb_.value.row(static_cast<int>(i)).begin());
    }
  }
  lstm_.Init(rng);
  for (Parameter* p : {&w_c_, &w_a_, &w_e_, &w_m_}) InitUniform(p->value, GlorotRange(p->value), rng);
  b_e_.value.SetZero();
  b_m_.value.SetZero();
  w_.value.SetZero();
  w_.value(0, 0) = 1.0;
  InitUniform(v_nil_.value, GlorotRange(v_nil_.value), rng);
}

int XrefModel::CharId(char32_t c) const {
  auto it = char_ids_.find(c);
  return it == char_ids_.end() ? 0 : it->second;
}

std::vector<Parameter*> XrefModel::params() {
  std::vector<Parameter*> out;
  if (!config_.freeze_char_emb) out.push_back(&char_emb_);
  for (Parameter* p : lstm_.params()) out.push_back(p);
  if (config_.comment_attention) out.push_back(&w_c_);
  if (config_.article_attention) out.push_back(&w_a_);
  out.insert(out.end(), {&w_e_, &b_e_, &w_m_, &b_m_});
  if (config_.features) out.push_back(&w_);
  if (config_.nil_mode == NilMode::kTrainableVector) out.push_back(&v_nil_);
  return out;
}

std::vector<Parameter*> XrefModel::all_params() {
  std::vector<Parameter*> out = {&char_emb_};
  for (Parameter* p : lstm_.params()) out.push_back(p);
  out.insert(out.end(), {&w_c_, &w_a_, &w_e_, &b_e_, &w_m_, &b_m_, &w_, &v_nil_});
  return out;
}

Parameter* XrefModel::FindParam(std::string_view name) {
  for (Parameter* p : all_params()) {
    if (p->name == name) return p;
  }
  throw NotFoundError("no parameter named " + std::string(name));
}

Vec XrefModel::MentionQuery(std::u32string_view text, int start, int end) const {
  if (start < 0 || end > static_cast<int>(text.size()) || start >= end) {
    throw InvalidArgument("mention span [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") is empty or out of range");
  }
  Vec q(config_.char_dim, 0.0);
  for (int i = start; i < end; ++i) Axpy(1.0, char_emb_.value.row(CharId(text[i])), q);
  for (double& x : q) x /= (end - start);
  return q;
}

struct XrefModel::Cache {
  std::vector<int> char_ids;
  BiLstmCache lstm;
  std::vector<Vec> h;
  Vec query;
  AttentionResult cmt;
  std::vector<Vec> art_keys;
  AttentionResult art;
  Vec fused_in;
  Vec v_m;
  std::vector<Vec> v_e;
  Vec dots;
  Vec logits;
  Vec probs;
  Vec el_grad;
  Vec att_grad;
  double el = 0;
  double att = 0;
};

double XrefModel::Forward(const LinkingExample& ex, Cache* cache) const {
  Cache& c = *cache;
  const int T = static_cast<int>(ex.text.size());
  if (T == 0) throw InvalidArgument("comment " + ex.comment_id + " is empty");
  const int n = static_cast<int>(ex.candidate_ids.size());
  if (n == 0) throw InvalidArgument("mention in " + ex.comment_id + " has no candidates");
  if (static_cast<int>(ex.candidate_inputs.size()) != n) {
    throw ShapeError("candidate inputs do not match the candidate list");
  }
  if (config_.features && static_cast<int>(ex.features.size()) != n) {
    throw InvalidArgument("features are enabled but the mention in " + ex.comment_id +
                          " lacks a feature vector per candidate");
  }
  const int H = config_.hidden;

  c.query = MentionQuery(ex.text, ex.start, ex.end);
  c.char_ids.resize(T);
  std::vector<Vec> xs(T);
  for (int i = 0; i < T; ++i) {
    c.char_ids[i] = CharId(ex.text[i]);
    auto e = char_emb_.value.row(c.char_ids[i]);
    xs[i].assign(e.begin(), e.end());
    xs[i].push_back(i >= ex.start && i < ex.end ? 1.0 : 0.0);
  }
  c.h = BiLstmForward(lstm_, xs, &c.lstm);

  Vec base(2 * H);
  if (config_.base_state == BaseStateMode::kFinalStates) {
    std::copy(c.h[T - 1].begin(), c.h[T - 1].begin() + H, base.begin());
    std::copy(c.h[0].begin() + H, c.h[0].end(), base.begin() + H);
  } else {
    base = c.h[T - 1];
  }

  Vec v_cmt(2 * H, 0.0);
  if (config_.comment_attention) {
    c.cmt = BilinearAttention(w_c_.value, c.query, c.h);
    v_cmt = c.cmt.context;
  }
  Vec v_art(config_.entity_dim, 0.0);
  if (config_.article_attention) {
    c.art_keys = ex.article_inputs;
    for (const Vec& k : c.art_keys) {
      if (static_cast<int>(k.size()) != config_.entity_dim) {
        throw ShapeError("article entity input has the wrong dimension");
      }
    }
    c.art_keys.emplace_back(config_.entity_dim, 0.0);  // ABS
    c.art = BilinearAttention(w_a_.value, c.query, c.art_keys);
    v_art = c.art.context;
  }

  c.fused_in = Concat({base, v_cmt, v_art});
  c.v_m = DenseTanh(w_m_, b_m_, c.fused_in);

  c.v_e.assign(n, Vec());
  c.dots.assign(n, 0.0);
  c.logits.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (ex.candidate_ids[k] == kNilId) {
      if (config_.nil_mode == NilMode::kTrainableVector) {
        c.v_e[k].assign(v_nil_.value.data().begin(), v_nil_.value.data().end());
        c.dots[k] = Dot(c.v_e[k], c.v_m);
      } else {
        c.dots[k] = config_.nil_bias;
      }
    } else {
      const Vec& u = ex.candidate_inputs[k];
      if (static_cast<int>(u.size()) != config_.entity_dim) {
        throw ShapeError("candidate " + ex.candidate_ids[k] + " input has dimension " +
                         std::to_string(u.size()) + ", expected " +
                         std::to_string(config_.entity_dim));
      }
      c.v_e[k] = DenseTanh(w_e_, b_e_, u);
      c.dots[k] = Dot(c.v_e[k], c.v_m);
    }
    if (config_.features) {
      double z = w_.value(0, 0) * c.dots[k];
      for (int f = 0; f < kNumFeatures; ++f) z += w_.value(0, 1 + f) * ex.features[k][f];
      c.logits[k] = z;
    } else {
      c.logits[k] = c.dots[k];
    }
  }
  c.probs = Softmax(c.logits);
  CrossEntropyResult el = CrossEntropy(c.probs, ex.Targets());
  c.el = el.loss;
  c.el_grad = std::move(el.grad_logits);
  c.att = 0;
  c.att_grad.clear();
  if (config_.article_attention) {
    Vec t = ex.AttentionTargets();
    if (config_.normalize_att_targets) {
      const double s = std::accumulate(t.begin(), t.end(), 0.0);
      for (double& x : t) x /= s;
    }
    CrossEntropyResult att = CrossEntropy(c.art.weights, t);
    c.att = att.loss;
    c.att_grad = std::move(att.grad_logits);
  }
  return c.el + config_.lambda * c.att;
}

void XrefModel::Backward(const LinkingExample& ex, const Cache& c, double scale) {
  const int T = static_cast<int>(ex.text.size());
  const int H = config_.hidden;
  const int J = config_.joint_dim;
  const int n = static_cast<int>(ex.candidate_ids.size());

  Vec dv_m(J, 0.0);
  for (int k = 0; k < n; ++k) {
    const double dl = scale * c.el_grad[k];
    double ddot = dl;
    if (config_.features) {
      w_.grad(0, 0) += dl * c.dots[k];
      for (int f = 0; f < kNumFeatures; ++f) w_.grad(0, 1 + f) += dl * ex.features[k][f];
      ddot = dl * w_.value(0, 0);
    }
    if (ex.candidate_ids[k] == kNilId) {
      if (config_.nil_mode == NilMode::kTrainableVector) {
        Axpy(ddot, c.v_m, v_nil_.grad.data());
        Axpy(ddot, c.v_e[k], dv_m);
      }
      continue;
    }
    Axpy(ddot, c.v_e[k], dv_m);
    Vec dv_e(c.v_m);
    for (double& x : dv_e) x *= ddot;
    DenseTanhBackward(w_e_, b_e_, ex.candidate_inputs[k], c.v_e[k], dv_e);
  }

  const Vec dfused = DenseTanhBackward(w_m_, b_m_, c.fused_in, c.v_m, dv_m);
  std::span<const double> dbase(dfused.data(), 2 * H);
  std::span<const double> dcmt(dfused.data() + 2 * H, 2 * H);
  std::span<const double> dart(dfused.data() + 4 * H, config_.entity_dim);

  Vec dquery(config_.char_dim, 0.0);
  std::vector<Vec> dh(T, Vec(2 * H, 0.0));
  if (config_.article_attention) {
    Vec extra = c.att_grad;
    for (double& x : extra) x *= scale * config_.lambda;
    const AttentionGrads g =
        BilinearAttentionBackward(w_a_.value, w_a_.grad, c.query, c.art_keys, c.art, dart, extra);
    Axpy(1.0, g.d_query, dquery);
  }
  if (config_.comment_attention) {
    const AttentionGrads g =
        BilinearAttentionBackward(w_c_.value, w_c_.grad, c.query, c.h, c.cmt, dcmt, {});
    Axpy(1.0, g.d_query, dquery);
    for (int i = 0; i < T; ++i) Axpy(1.0, g.d_keys[i], dh[i]);
  }
  if (config_.base_state == BaseStateMode::kFinalStates) {
    for (int i = 0; i < H; ++i) {
      dh[T - 1][i] += dbase[i];
      dh[0][H + i] += dbase[H + i];
    }
  } else {
    Axpy(1.0, dbase, dh[T - 1]);
  }
  const std::vector<Vec> dx = BiLstmBackward(lstm_, c.lstm, dh);

  if (config_.freeze_char_emb) return;
  const int D = config_.char_dim;
  for (int i = 0; i < T; ++i) {
    auto g = char_emb_.grad.row(c.char_ids[i]);
    for (int d = 0; d < D; ++d) g[d] += dx[i][d];
  }
  const double inv_len = 1.0 / (ex.end - ex.start);
  for (int i = ex.start; i < ex.end; ++i) Axpy(inv_len, dquery, char_emb_.grad.row(c.char_ids[i]));
}

ScoredCandidates XrefModel::Score(const LinkingExample& ex) const {
  Cache c;
  Forward(ex, &c);
  ScoredCandidates out;
  out.candidate_ids = ex.candidate_ids;
  out.logits = std::move(c.logits);
  out.probs = std::move(c.probs);
  if (config_.comment_attention) out.alpha = std::move(c.cmt.weights);
  if (config_.article_attention) out.beta = std::move(c.art.weights);
  return out;
}

std::vector<RankedCandidate> XrefModel::PredictTopK(const LinkingExample& ex, int k) const {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const ScoredCandidates s = Score(ex);
  std::vector<int> order(s.probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return s.probs[a] > s.probs[b]; });
  order.resize(std::min<size_t>(order.size(), k));
  std::vector<RankedCandidate> out;
  for (int i : order) out.push_back({s.candidate_ids[i], s.probs[i]});
  return out;
}

XrefModel::LossParts XrefModel::Loss(std::span<const LinkingExample* const> batch,
                                     bool backward) {
  LossParts parts;
  if (batch.empty()) return parts;
  const double scale = 1.0 / static_cast<double>(batch.size());
  Cache cache;
  for (const LinkingExample* ex : batch) {
    parts.total += Forward(*ex, &cache) * scale;
    parts.el += cache.el * scale;
    parts.att += cache.att * scale;
    if (IsGold(*ex, ex->candidate_ids[ArgMax(cache.probs)])) ++parts.correct;
    if (backward) Backward(*ex, cache, scale);
  }
  return parts;
}

XrefModel::LossParts XrefModel::Loss(std::span<const LinkingExample> batch, bool backward) {
  std::vector<const LinkingExample*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& ex : batch) ptrs.push_back(&ex);
  return Loss(std::span<const LinkingExample* const>(ptrs), backward);
}

Json XrefModel::ToJson() const {
  Json params = Json::object();
  for (Parameter* p : const_cast<XrefModel*>(this)->all_params()) {
    params[p->name] = MatrixToJson(p->value);
  }
  return Json{{"format_version", kCheckpointVersion},
              {"config", config_.ToJson()},
              {"char_vocab", char_vocab_},
              {"params", params}};
}

XrefModel XrefModel::FromJson(const Json& j) {
  if (j.value("format_version", 0) != kCheckpointVersion) {
    throw LoadError("unsupported checkpoint format_version");
  }
  if (!j.contains("config") || !j.contains("char_vocab") || !j.contains("params")) {
    throw LoadError("checkpoint needs config, char_vocab and params");
  }
  XrefModel model(ModelConfig::FromJson(j["config"]),
                  j["char_vocab"].get<std::vector<std::string>>());
  const Json& params = j["params"];
  for (Parameter* p : model.all_params()) {
    if (!params.contains(p->name)) throw LoadError("checkpoint lacks parameter " + p->name);
    MatrixFromJson(params[p->name], p->value, p->name);
  }
  return model;
}

double LinkingAccuracy(const XrefModel& model, std::span<const LinkingExample> examples) {
  if (examples.empty()) return 0.0;
  int correct = 0;
  for (const auto& ex : examples) {
    const ScoredCandidates s = model.Score(ex);
    if (IsGold(ex, s.candidate_ids[ArgMax(s.probs)])) ++correct;
  }
  return static_cast<double>(correct) / examples.size();
}

TrainResult Train(XrefModel& model, std::span<const LinkingExample> train,
                  std::span<const LinkingExample> valid, const TrainOptions& options) {
  if (train.empty()) throw InvalidArgument("training set is empty");
  if (options.batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  std::vector<Parameter*> params = model.params();
  ZeroGrads(params);
  Adam adam(params, options.adam);
  Rng rng(options.seed);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Parameter*> all = model.all_params();
  auto snapshot = [&] {
    std::vector<Matrix> s;
    for (Parameter* p : all) s.push_back(p->value);
    return s;
  };
  std::vector<Matrix> best = snapshot();
  TrainResult result;
  result.best_valid_acc = -1;
  int since_best = 0;
  std::vector<const LinkingExample*> batch;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    rng.Shuffle(std::span<int>(order));
    EpochStats stats;
    stats.epoch = epoch;
    int correct = 0;
    for (size_t s = 0; s < order.size(); s += options.batch_size) {
      batch.clear();
      for (size_t i = s; i < std::min(order.size(), s + options.batch_size); ++i) {
        batch.push_back(&train[order[i]]);
      }
      const auto parts = model.Loss(std::span<const LinkingExample* const>(batch), true);
      stats.loss += parts.total * batch.size();
      correct += parts.correct;
      ClipGradients(params, options.clip_norm);
      adam.Step();
    }
    stats.loss /= train.size();
    stats.train_acc = static_cast<double>(correct) / train.size();
    stats.valid_acc = valid.empty() ? stats.train_acc : LinkingAccuracy(model, valid);
    result.trace.push_back(stats);
    if (options.log_progress) {
      Log("epoch " + std::to_string(epoch) + " loss " + std::to_string(stats.loss) +
          " train_acc " + std::to_string(stats.train_acc) + " valid_acc " +
          std::to_string(stats.valid_acc));
    }
    if (stats.valid_acc > result.best_valid_acc) {
      result.best_valid_acc = stats.valid_acc;
      result.best_epoch = epoch;
      best = snapshot();
      since_best = 0;
    } else if (options.patience > 0 && ++since_best >= options.patience) {
      break;
    }
  }
  for (size_t i = 0; i < all.size(); ++i) all[i]->value = best[i];
  if (result.best_valid_acc < 0) result.best_valid_acc = 0;
  return result;
}

Json TrainResultToJson(const TrainResult& r) {
  Json trace = Json::array();
  for (const auto& e : r.trace) {
    trace.push_back({{"epoch", e.epoch},
                     {"loss", e.loss},
                     {"train_acc", e.train_acc},
                     {"valid_acc", e.valid_acc}});
  }
  return Json{{"best_epoch", r.best_epoch},
              {"best_valid_acc", r.best_valid_acc},
              {"trace", trace}};
}

}  // namespace xref
