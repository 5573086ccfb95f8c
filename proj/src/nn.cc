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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xref/error.h"

namespace xref {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void CheckDim(size_t got, size_t want, const char* what) {
  if (got != want) {
    throw ShapeError(std::string(what) + ": expected dimension " +
                     std::to_string(want) + ", got " + std::to_string(got));
  }
}

}  // namespace

bool Matrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Vec MatVec(const Matrix& a, std::span<const double> x) {
  CheckDim(x.size(), a.cols(), "MatVec");
  Vec y(a.rows(), 0.0);
  for (int r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double s = 0;
    for (int c = 0; c < a.cols(); ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

Vec MatTVec(const Matrix& a, std::span<const double> x) {
  CheckDim(x.size(), a.rows(), "MatTVec");
  Vec y(a.cols(), 0.0);
  for (int r = 0; r < a.rows(); ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const auto row = a.row(r);
    for (int c = 0; c < a.cols(); ++c) y[c] += row[c] * xr;
  }
  return y;
}

void AddOuter(Matrix& a, std::span<const double> u, std::span<const double> v,
              double alpha) {
  CheckDim(u.size(), a.rows(), "AddOuter rows");
  CheckDim(v.size(), a.cols(), "AddOuter cols");
  for (int r = 0; r < a.rows(); ++r) {
    const double ur = alpha * u[r];
    if (ur == 0.0) continue;
    auto row = a.row(r);
    for (int c = 0; c < a.cols(); ++c) row[c] += ur * v[c];
  }
}

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckDim(b.size(), a.size(), "Dot");
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  CheckDim(y.size(), x.size(), "Axpy");
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double Norm2(std::span<const double> x) { return std::sqrt(Dot(x, x)); }

Vec Concat(std::initializer_list<std::span<const double>> parts) {
  Vec out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void ZeroGrads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->grad.SetZero();
}

double GlobalGradNorm(std::span<Parameter* const> params) {
  double s = 0;
  for (const Parameter* p : params) {
    for (double g : p->grad.data()) s += g * g;
  }
  return std::sqrt(s);
}

void InitUniform(Matrix& m, double r, Rng& rng) {
  for (double& v : m.data()) v = rng.Uniform(-r, r);
}

Vec Softmax(std::span<const double> logits) {
  if (logits.empty()) throw InvalidArgument("softmax of an empty vector");
  const double mx = *std::max_element(logits.begin(), logits.end());
  Vec p(logits.size());
  double z = 0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

Vec SoftmaxBackward(std::span<const double> p, std::span<const double> dp) {
  CheckDim(dp.size(), p.size(), "SoftmaxBackward");
  const double inner = Dot(p, dp);
  Vec dz(p.size());
  for (size_t i = 0; i < p.size(); ++i) dz[i] = p[i] * (dp[i] - inner);
  return dz;
}

CrossEntropyResult CrossEntropy(std::span<const double> pred,
                                std::span<const double> target) {
  CheckDim(target.size(), pred.size(), "CrossEntropy");
  CrossEntropyResult out;
  out.grad_logits.resize(pred.size());
  double mass = 0;
  for (size_t j = 0; j < pred.size(); ++j) {
    if (target[j] != 0.0) out.loss -= target[j] * std::log(pred[j] + kLogEpsilon);
    mass += target[j];
  }
  for (size_t j = 0; j < pred.size(); ++j) {
    out.grad_logits[j] = mass * pred[j] - target[j];
  }
  return out;
}

Vec DenseTanh(const Parameter& w, const Parameter& b, std::span<const double> x) {
  if (static_cast<int>(x.size()) != w.value.cols() || b.value.rows() != w.value.rows()) {
    throw ShapeError("dense layer " + w.name + " expects input " +
                     std::to_string(w.value.cols()) + ", got " + std::to_string(x.size()));
  }
  Vec y = MatVec(w.value, x);
  for (size_t i = 0; i < y.size(); ++i) y[i] = std::tanh(y[i] + b.value(static_cast<int>(i), 0));
  return y;
}

Vec DenseTanhBackward(Parameter& w, Parameter& b, std::span<const double> x,
                      std::span<const double> y, std::span<const double> dy) {
  Vec dz(y.size());
  for (size_t i = 0; i < y.size(); ++i) dz[i] = dy[i] * (1.0 - y[i] * y[i]);
  AddOuter(w.grad, dz, x);
  Axpy(1.0, dz, b.grad.data());
  return MatTVec(w.value, dz);
}

LstmLayer::LstmLayer(const std::string& name, int input_dim, int hidden)
    : input_dim(input_dim),
      hidden(hidden),
      w_x(name + ".w_x", 4 * hidden, input_dim),
      w_h(name + ".w_h", 4 * hidden, hidden),
      b(name + ".b", 4 * hidden, 1) {}

void LstmLayer::Init(Rng& rng) {
  const double r = 1.0 / std::sqrt(static_cast<double>(hidden));
  InitUniform(w_x.value, r, rng);
  InitUniform(w_h.value, r, rng);
  b.value.SetZero();
  for (int k = hidden; k < 2 * hidden; ++k) b.value(k, 0) = 1.0;
}

std::vector<Vec> LstmForward(const LstmLayer& layer, const std::vector<Vec>& xs,
                             bool reverse, LstmCache* cache) {
  if (xs.empty()) throw ShapeError("LSTM over an empty sequence");
  const int H = layer.hidden;
  const int T = static_cast<int>(xs.size());
  std::vector<Vec> out(T);
  Vec h(H, 0.0), c(H, 0.0);
  if (cache) {
    *cache = LstmCache{};
    cache->reverse = reverse;
  }
  for (int step = 0; step < T; ++step) {
    const int pos = reverse ? T - 1 - step : step;
    const Vec& x = xs[pos];
    CheckDim(x.size(), layer.input_dim, "LSTM input");
    Vec a = MatVec(layer.w_x.value, x);
    const Vec ah = MatVec(layer.w_h.value, h);
    for (int k = 0; k < 4 * H; ++k) a[k] += ah[k] + layer.b.value(k, 0);
    Vec gates(4 * H);
    for (int k = 0; k < 3 * H; ++k) gates[k] = Sigmoid(a[k]);
    for (int k = 3 * H; k < 4 * H; ++k) gates[k] = std::tanh(a[k]);
    Vec c_new(H), h_new(H);
    for (int k = 0; k < H; ++k) {
      c_new[k] = gates[H + k] * c[k] + gates[k] * gates[3 * H + k];
      h_new[k] = gates[2 * H + k] * std::tanh(c_new[k]);
    }
    if (cache) {
      cache->x.push_back(x);
      cache->h_prev.push_back(h);
      cache->c_prev.push_back(c);
      cache->gates.push_back(std::move(gates));
      cache->c.push_back(c_new);
      cache->h.push_back(h_new);
    }
    out[pos] = h_new;
    h = std::move(h_new);
    c = std::move(c_new);
  }
  return out;
}

std::vector<Vec> LstmBackward(LstmLayer& layer, const LstmCache& cache,
                              const std::vector<Vec>& dh) {
  const int H = layer.hidden;
  const int T = static_cast<int>(cache.x.size());
  CheckDim(dh.size(), T, "LSTM backward sequence");
  std::vector<Vec> dx(T);
  Vec dh_rec(H, 0.0), dc_rec(H, 0.0);
  for (int step = T - 1; step >= 0; --step) {
    const int pos = cache.reverse ? T - 1 - step : step;
    const Vec& g = cache.gates[step];
    const Vec& c = cache.c[step];
    const Vec& c_prev = cache.c_prev[step];
    Vec da(4 * H);
    Vec dc_prev(H);
    for (int k = 0; k < H; ++k) {
      const double dhk = dh[pos][k] + dh_rec[k];
      const double i = g[k], f = g[H + k], o = g[2 * H + k], cand = g[3 * H + k];
      const double tc = std::tanh(c[k]);
      const double d_o = dhk * tc;
      const double dc = dhk * o * (1.0 - tc * tc) + dc_rec[k];
      da[k] = dc * cand * i * (1.0 - i);
      da[H + k] = dc * c_prev[k] * f * (1.0 - f);
      da[2 * H + k] = d_o * o * (1.0 - o);
      da[3 * H + k] = dc * i * (1.0 - cand * cand);
      dc_prev[k] = dc * f;
    }
    AddOuter(layer.w_x.grad, da, cache.x[step]);
    AddOuter(layer.w_h.grad, da, cache.h_prev[step]);
    for (int k = 0; k < 4 * H; ++k) layer.b.grad(k, 0) += da[k];
    dx[pos] = MatTVec(layer.w_x.value, da);
    dh_rec = MatTVec(layer.w_h.value, da);
    dc_rec = std::move(dc_prev);
  }
  return dx;
}

std::vector<Vec> BiLstmForward(const BiLstm& net, const std::vector<Vec>& xs,
                               BiLstmCache* cache) {
  const auto f = LstmForward(net.fwd, xs, false, cache ? &cache->fwd : nullptr);
  const auto b = LstmForward(net.bwd, xs, true, cache ? &cache->bwd : nullptr);
  std::vector<Vec> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[i] = Concat({f[i], b[i]});
  return out;
}

std::vector<Vec> BiLstmBackward(BiLstm& net, const BiLstmCache& cache,
                                const std::vector<Vec>& dh) {
  const int Hf = net.fwd.hidden;
  std::vector<Vec> dhf(dh.size()), dhb(dh.size());
  for (size_t i = 0; i < dh.size(); ++i) {
    CheckDim(dh[i].size(), net.output_dim(), "biLSTM hidden gradient");
    dhf[i].assign(dh[i].begin(), dh[i].begin() + Hf);
    dhb[i].assign(dh[i].begin() + Hf, dh[i].end());
  }
  auto dx = LstmBackward(net.fwd, cache.fwd, dhf);
  const auto dxb = LstmBackward(net.bwd, cache.bwd, dhb);
  for (size_t i = 0; i < dx.size(); ++i) Axpy(1.0, dxb[i], dx[i]);
  return dx;
}

AttentionResult BilinearAttention(const Matrix& w, std::span<const double> query,
                                  const std::vector<Vec>& keys) {
  if (keys.empty()) throw InvalidArgument("attention over an empty key list");
  AttentionResult r;
  r.wq = MatVec(w, query);
  r.scores.resize(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) r.scores[i] = Dot(keys[i], r.wq);
  r.weights = Softmax(r.scores);
  r.context.assign(w.rows(), 0.0);
  for (size_t i = 0; i < keys.size(); ++i) Axpy(r.weights[i], keys[i], r.context);
  return r;
}

AttentionGrads BilinearAttentionBackward(const Matrix& w, Matrix& dw,
                                         std::span<const double> query,
                                         const std::vector<Vec>& keys,
                                         const AttentionResult& fwd,
                                         std::span<const double> d_context,
                                         std::span<const double> d_scores_extra) {
  const size_t n = keys.size();
  Vec d_weights(n);
  for (size_t i = 0; i < n; ++i) d_weights[i] = Dot(keys[i], d_context);
  Vec d_scores = SoftmaxBackward(fwd.weights, d_weights);
  if (!d_scores_extra.empty()) Axpy(1.0, d_scores_extra, d_scores);
  Vec d_wq(w.rows(), 0.0);
  for (size_t i = 0; i < n; ++i) Axpy(d_scores[i], keys[i], d_wq);
  AddOuter(dw, d_wq, query);
  AttentionGrads g;
  g.d_query = MatTVec(w, d_wq);
  g.d_keys.resize(n);
  for (size_t i = 0; i < n; ++i) {
    g.d_keys[i] = Vec(d_context.begin(), d_context.end());
    for (double& v : g.d_keys[i]) v *= fwd.weights[i];
    Axpy(d_scores[i], fwd.wq, g.d_keys[i]);
  }
  return g;
}

Adam::Adam(std::vector<Parameter*> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const Parameter* p : params_) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
  }
}

void Adam::Step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (size_t k = 0; k < params_.size(); ++k) {
    auto value = params_[k]->value.data();
    auto grad = params_[k]->grad.data();
    auto m = m_[k].data();
    auto v = v_[k].data();
    for (size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = options_.beta1 * m[i] + (1.0 - options_.beta1) * g;
      v[i] = options_.beta2 * v[i] + (1.0 - options_.beta2) * g * g;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      value[i] -= options_.lr * m_hat / (std::sqrt(v_hat) + options_.eps);
    }
    params_[k]->grad.SetZero();
  }
}

double ClipGradients(std::span<Parameter* const> params, double max_norm) {
  const double norm = GlobalGradNorm(params);
  if (!(norm > max_norm)) return 1.0;
  const double factor = max_norm / norm;
  for (Parameter* p : params) {
    for (double& g : p->grad.data()) g *= factor;
  }
  return factor;
}

GradCheckReport GradCheck(const std::function<double()>& loss,
                          std::span<Parameter* const> params,
                          const GradCheckOptions& options) {
  std::vector<Matrix> analytic;
  for (const Parameter* p : params) analytic.push_back(p->grad);
  Rng rng(options.seed);
  GradCheckReport report;
  for (size_t k = 0; k < params.size(); ++k) {
    Parameter* p = params[k];
    const int n = static_cast<int>(p->value.size());
    std::vector<int> coords(n);
    std::iota(coords.begin(), coords.end(), 0);
    if (options.max_coords_per_param > 0 && options.max_coords_per_param < n) {
      rng.Shuffle(std::span<int>(coords));
      coords.resize(options.max_coords_per_param);
    }
    for (int idx : coords) {
      double& v = p->value.data()[idx];
      const double saved = v;
      v = saved + options.step;
      const double up = loss();
      v = saved - options.step;
      const double down = loss();
      v = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[k].data()[idx];
      const double denom =
          std::max({std::abs(a), std::abs(numeric), options.floor});
      const double rel = std::abs(a - numeric) / denom;
      ++report.checked;
      if (rel > report.max_rel_error || report.worst_index < 0) {
        if (rel >= report.max_rel_error) {
          report.max_rel_error = rel;
          report.worst_param = p->name;
          report.worst_index = idx;
        }
      }
    }
  }
  for (size_t k = 0; k < params.size(); ++k) params[k]->grad = analytic[k];
  return report;
}

}  // namespace xref
