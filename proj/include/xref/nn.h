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

#ifndef XREF_NN_H_
#define XREF_NN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "xref/rng.h"

namespace xref {

using Vec = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  std::span<double> row(int r) {
    return {data_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)};
  }
  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void SetZero() { std::fill(data_.begin(), data_.end(), 0.0); }
  bool AllFinite() const;
  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// y = A x
Vec MatVec(const Matrix& a, std::span<const double> x);
// y = A^T x
Vec MatTVec(const Matrix& a, std::span<const double> x);
// A += alpha * u v^T
void AddOuter(Matrix& a, std::span<const double> u, std::span<const double> v,
              double alpha = 1.0);
double Dot(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
double Norm2(std::span<const double> x);
Vec Concat(std::initializer_list<std::span<const double>> parts);

// Trainable tensor with its gradient buffer.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, int rows, int cols)
      : name(std::move(name)), value(rows, cols), grad(rows, cols) {}

  std::string name;
  Matrix value;
  Matrix grad;
};

void ZeroGrads(std::span<Parameter* const> params);
double GlobalGradNorm(std::span<Parameter* const> params);

// Rows scaled from uniform(-r, r).
void InitUniform(Matrix& m, double r, Rng& rng);

// Max-subtracted softmax. Empty input raises InvalidArgument.
Vec Softmax(std::span<const double> logits);
// Maps dL/dp to dL/dz through p = softmax(z).
Vec SoftmaxBackward(std::span<const double> p, std::span<const double> dp);

inline constexpr double kLogEpsilon = 1e-12;

struct CrossEntropyResult {
  double loss = 0;
  Vec grad_logits;
};

// loss = -sum_j t_j log(p_j + kLogEpsilon) for p = softmax(z). Targets may be
// unnormalized; the logit gradient is (sum_j t_j) p - t.
CrossEntropyResult CrossEntropy(std::span<const double> pred,
                                std::span<const double> target);

// One LSTM direction. Gate blocks in order input, forget, output, candidate.
// y = tanh(W x + b) with b a column.
Vec DenseTanh(const Parameter& w, const Parameter& b, std::span<const double> x);
// Accumulates into w.grad and b.grad given the forward output y; returns dx.
Vec DenseTanhBackward(Parameter& w, Parameter& b, std::span<const double> x,
                      std::span<const double> y, std::span<const double> dy);

struct LstmLayer {
  LstmLayer() = default;
  LstmLayer(const std::string& name, int input_dim, int hidden);

  // uniform(-1/sqrt(hidden), 1/sqrt(hidden)), forget-gate bias +1.
  void Init(Rng& rng);
  std::vector<Parameter*> params() { return {&w_x, &w_h, &b}; }

  int input_dim = 0;
  int hidden = 0;
  Parameter w_x;  // 4H x I
  Parameter w_h;  // 4H x H
  Parameter b;    // 4H x 1
};

struct LstmCache {
  bool reverse = false;
  // Indexed by processing step.
  std::vector<Vec> x, h_prev, c_prev, gates, c, h;
};

// Hidden states indexed by input position; a reverse layer reads the input
// right to left.
std::vector<Vec> LstmForward(const LstmLayer& layer, const std::vector<Vec>& xs,
                             bool reverse, LstmCache* cache);
// dh holds dL/dh at each input position. Accumulates parameter gradients and
// returns dL/dx per input position.
std::vector<Vec> LstmBackward(LstmLayer& layer, const LstmCache& cache,
                              const std::vector<Vec>& dh);

struct BiLstm {
  BiLstm() = default;
  BiLstm(int input_dim, int hidden_per_direction)
      : fwd("lstm_fwd", input_dim, hidden_per_direction),
        bwd("lstm_bwd", input_dim, hidden_per_direction) {}

  void Init(Rng& rng) {
    fwd.Init(rng);
    bwd.Init(rng);
  }
  int output_dim() const { return fwd.hidden + bwd.hidden; }
  std::vector<Parameter*> params() {
    return {&fwd.w_x, &fwd.w_h, &fwd.b, &bwd.w_x, &bwd.w_h, &bwd.b};
  }

  LstmLayer fwd;
  LstmLayer bwd;
};

struct BiLstmCache {
  LstmCache fwd, bwd;
};

// h_i = [fwd_i; bwd_i]. Raises ShapeError on empty input or bad input dims.
std::vector<Vec> BiLstmForward(const BiLstm& net, const std::vector<Vec>& xs,
                               BiLstmCache* cache);
std::vector<Vec> BiLstmBackward(BiLstm& net, const BiLstmCache& cache,
                                const std::vector<Vec>& dh);

struct AttentionResult {
  Vec scores;   // k_i^T W q
  Vec weights;  // softmax(scores)
  Vec context;  // sum_i weights_i k_i
  Vec wq;       // W q
};

// W is (key dim x query dim). Raises InvalidArgument on an empty key list.
AttentionResult BilinearAttention(const Matrix& w, std::span<const double> query,
                                  const std::vector<Vec>& keys);

struct AttentionGrads {
  Vec d_query;
  std::vector<Vec> d_keys;
};

// d_scores_extra (may be empty) is added to the score gradient; the
// supervised attention loss enters there. dW is accumulated into dw.
AttentionGrads BilinearAttentionBackward(const Matrix& w, Matrix& dw,
                                         std::span<const double> query,
                                         const std::vector<Vec>& keys,
                                         const AttentionResult& fwd,
                                         std::span<const double> d_context,
                                         std::span<const double> d_scores_extra);

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamOptions options);

  // Bias-corrected update of every parameter, then zeroes the gradients.
  void Step();
  int64_t t() const { return t_; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }

 private:
  std::vector<Parameter*> params_;
  AdamOptions options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  int64_t t_ = 0;
};

// Scales all gradients by max_norm / N when the global L2 norm N exceeds
// max_norm. Returns the factor applied (1 when untouched).
double ClipGradients(std::span<Parameter* const> params, double max_norm = 5.0);

struct GradCheckOptions {
  double step = 1e-5;
  // Coordinates sampled per parameter; <= 0 checks all of them.
  int max_coords_per_param = 0;
  uint64_t seed = 0;
  // Denominator floor of the relative error.
  double floor = 1e-6;
};

struct GradCheckReport {
  double max_rel_error = 0;
  std::string worst_param;
  int worst_index = -1;
  int checked = 0;
};

// Compares the gradients currently stored in params against central
// differences of loss(). loss must be deterministic and must not touch the
// gradient buffers' meaning (it may overwrite them; they are snapshotted).
GradCheckReport GradCheck(const std::function<double()>& loss,
                          std::span<Parameter* const> params,
                          const GradCheckOptions& options = {});

}  // namespace xref

#endif  // XREF_NN_H_
