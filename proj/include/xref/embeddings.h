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

#ifndef XREF_EMBEDDINGS_H_
#define XREF_EMBEDDINGS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xref/io.h"
#include "xref/kb.h"
#include "xref/nn.h"
#include "xref/rng.h"

namespace xref {

enum class CooccurrenceMode { kEntityEntity, kEntityWord };

// Sparse nonnegative counts. In entity-entity mode rows and columns share
// labels, counts are symmetric and the diagonal is zero.
struct CooccurrenceMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::map<std::pair<int, int>, double> counts;

  double At(int r, int c) const;
  Matrix Dense() const;
};

// Titles are segmented with the KB canonical-name tokenizer. Only canonical
// names with a single holder count as entities; ambiguous names are dropped,
// every other token is a word. Each unordered entity pair and each
// (entity, word) pair adds at most 1 per title. Rows are the entities seen
// in at least one title, sorted by id; words are sorted.
CooccurrenceMatrix BuildCooccurrence(std::span<const std::string> titles,
                                     const KnowledgeBase& kb,
                                     CooccurrenceMode mode);

// Label -> vector map with a fixed dimension.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  void Add(const std::string& label, std::span<const double> v);
  bool Contains(std::string_view label) const;
  int IndexOf(std::string_view label) const;  // -1 when absent
  std::span<const double> Get(std::string_view label) const;  // NotFoundError
  std::span<const double> row(int i) const { return values_.row(i); }
  std::span<double> mutable_row(int i) { return values_.row(i); }
  const Matrix& values() const { return values_; }

  bool AllFinite() const { return values_.AllFinite(); }

  // First line: JSON header {"labels", "dim", ...extra}; then one line of
  // %.17g values per vector.
  std::string Serialize(const Json& extra_header = Json::object()) const;
  static EmbeddingTable Parse(std::string_view text);

 private:
  int dim_ = 0;
  std::vector<std::string> labels_;
  std::map<std::string, int, std::less<>> index_;
  Matrix values_;
};

// Samples ids proportionally to count^power.
class UnigramSampler {
 public:
  UnigramSampler(std::span<const double> counts, double power = 0.75);
  int Sample(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

// Skip-gram with negative sampling. Input vectors start uniform in
// +-0.5/dim, output vectors at zero.
class SkipGram {
 public:
  SkipGram(int vocab, int dim, Rng& rng);

  // -log s(o.v) - sum_k log s(-n_k.v) for center v, context o, negatives n.
  double Loss(int center, int context, std::span<const int> negatives) const;
  // One SGD step on that loss; returns the loss before the step.
  double Update(int center, int context, std::span<const int> negatives,
                double lr);

  const Matrix& input() const { return input_; }

 private:
  Matrix input_;
  Matrix output_;
};

struct Node2VecParams {
  int dim = 32;
  int walks_per_node = 10;
  int walk_length = 20;
  int window = 4;
  int negatives = 5;
  int epochs = 1;
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  double lr = 0.025;
  uint64_t seed = 0;
};

// Second-order biased walks over the weighted co-occurrence graph followed
// by skip-gram training over walk windows. Isolated nodes keep their
// initial vectors.
EmbeddingTable Node2VecEmbed(const CooccurrenceMatrix& matrix,
                             const Node2VecParams& params);

// Biased walks only, exposed for inspection; node indices into row_labels.
std::vector<std::vector<int>> Node2VecWalks(const CooccurrenceMatrix& matrix,
                                            const Node2VecParams& params,
                                            Rng& rng);

struct SvdResult {
  Matrix u;  // rows x d
  Vec s;     // d, nonincreasing
  Matrix v;  // cols x d
};

// Rank-d truncated SVD by power iteration on A^T A, deflating each found
// direction. d must lie in [1, min(rows, cols)].
SvdResult TruncatedSvd(const Matrix& a, int d);

// log(1 + count) scaling, rank-d SVD, row i of U_d S_d^{1/2} per entity.
EmbeddingTable SvdEmbed(const CooccurrenceMatrix& matrix, int d);

inline constexpr std::string_view kUnkLabel = "<unk>";

struct CharEmbeddingParams {
  int dim = 32;
  int window = 2;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;
  uint64_t seed = 0;
};

// Skip-gram over character windows. Labels are UTF-8 characters sorted by
// code point, preceded by kUnkLabel whose vector is zero.
EmbeddingTable TrainCharEmbeddings(std::span<const std::u32string> texts,
                                   const CharEmbeddingParams& params);

// u = [u_nod; u_wrd]; a missing half is a zero vector of its dimension.
Vec EntityInputRepr(std::optional<std::span<const double>> u_nod,
                    std::optional<std::span<const double>> u_wrd, int nod_dim,
                    int wrd_dim);

// Per-entity input vectors u for every KB entity.
class EntityInputTable {
 public:
  EntityInputTable() = default;
  static EntityInputTable Build(const KnowledgeBase& kb, const EmbeddingTable& nod,
                                const EmbeddingTable& wrd);

  int dim() const { return dim_; }
  const Vec& Get(std::string_view id) const;  // NotFoundError
  int missing_nod() const { return missing_nod_; }
  int missing_wrd() const { return missing_wrd_; }

 private:
  int dim_ = 0;
  std::map<std::string, Vec, std::less<>> vectors_;
  int missing_nod_ = 0;
  int missing_wrd_ = 0;
};

}  // namespace xref

#endif  // XREF_EMBEDDINGS_H_
