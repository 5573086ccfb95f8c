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

#include "xref/embeddings.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "xref/corpus.h"
#include "xref/error.h"
#include "xref/log.h"
#include "xref/text.h"

namespace xref {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow.
double LogSigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace

double CooccurrenceMatrix::At(int r, int c) const {
  auto it = counts.find({r, c});
  return it == counts.end() ? 0.0 : it->second;
}

Matrix CooccurrenceMatrix::Dense() const {
  Matrix m(static_cast<int>(row_labels.size()), static_cast<int>(col_labels.size()));
  for (const auto& [rc, v] : counts) m(rc.first, rc.second) = v;
  return m;
}

CooccurrenceMatrix BuildCooccurrence(std::span<const std::string> titles,
                                     const KnowledgeBase& kb,
                                     CooccurrenceMode mode) {
  auto tokenizer = MakeCanonicalTokenizer(kb);
  struct Parsed {
    std::set<std::string> entities;
    std::set<std::string> words;
  };
  std::vector<Parsed> parsed;
  parsed.reserve(titles.size());
  std::set<std::string> all_entities;
  std::set<std::string> all_words;
  for (const std::string& title : titles) {
    Parsed p;
    for (const auto& token : tokenizer->Tokenize(Utf8ToU32(title))) {
      const std::string surface = U32ToUtf8(token);
      if (surface.empty()) continue;
      const std::string key = NormalizeSurface(surface);
      if (kb.canonical_index().count(key)) {
        const IdSet holders = kb.LookupSurface(surface, /*use_nicknames=*/true);
        if (holders.size() == 1) p.entities.insert(*holders.begin());
        continue;
      }
      p.words.insert(key);
    }
    all_entities.insert(p.entities.begin(), p.entities.end());
    all_words.insert(p.words.begin(), p.words.end());
    parsed.push_back(std::move(p));
  }

  CooccurrenceMatrix out;
  out.row_labels.assign(all_entities.begin(), all_entities.end());
  if (mode == CooccurrenceMode::kEntityEntity) {
    out.col_labels = out.row_labels;
  } else {
    out.col_labels.assign(all_words.begin(), all_words.end());
  }
  auto index_of = [](const std::vector<std::string>& labels, const std::string& s) {
    return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), s) -
                            labels.begin());
  };
  for (const Parsed& p : parsed) {
    if (mode == CooccurrenceMode::kEntityEntity) {
      for (auto a = p.entities.begin(); a != p.entities.end(); ++a) {
        for (auto b = std::next(a); b != p.entities.end(); ++b) {
          const int i = index_of(out.row_labels, *a);
          const int j = index_of(out.row_labels, *b);
          out.counts[{i, j}] += 1;
          out.counts[{j, i}] += 1;
        }
      }
    } else {
      for (const auto& e : p.entities) {
        const int i = index_of(out.row_labels, e);
        for (const auto& w : p.words) out.counts[{i, index_of(out.col_labels, w)}] += 1;
      }
    }
  }
  return out;
}

void EmbeddingTable::Add(const std::string& label, std::span<const double> v) {
  if (static_cast<int>(v.size()) != dim_) {
    throw ShapeError("embedding for '" + label + "' has length " +
                     std::to_string(v.size()) + ", expected " + std::to_string(dim_));
  }
  if (index_.count(label)) throw InvalidArgument("duplicate embedding label: " + label);
  Matrix grown(size() + 1, dim_);
  std::copy(values_.data().begin(), values_.data().end(), grown.data().begin());
  std::copy(v.begin(), v.end(), grown.row(size()).begin());
  values_ = std::move(grown);
  index_.emplace(label, size());
  labels_.push_back(label);
}

bool EmbeddingTable::Contains(std::string_view label) const {
  return index_.find(label) != index_.end();
}

int EmbeddingTable::IndexOf(std::string_view label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

std::span<const double> EmbeddingTable::Get(std::string_view label) const {
  const int i = IndexOf(label);
  if (i < 0) throw NotFoundError("no embedding for '" + std::string(label) + "'");
  return row(i);
}

std::string EmbeddingTable::Serialize(const Json& extra_header) const {
  Json header = extra_header;
  header["labels"] = labels_;
  header["dim"] = dim_;
  std::string out = header.dump() + "\n";
  char buf[32];
  for (int i = 0; i < size(); ++i) {
    auto r = row(i);
    for (int j = 0; j < dim_; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", r[j]);
      if (j) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

EmbeddingTable EmbeddingTable::Parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw LoadError("embedding file is empty");
  Json header;
  try {
    header = Json::parse(line);
  } catch (const Json::exception& e) {
    throw LoadError(std::string("bad embedding header: ") + e.what());
  }
  if (!header.contains("labels") || !header.contains("dim")) {
    throw LoadError("embedding header needs 'labels' and 'dim'");
  }
  EmbeddingTable table(header["dim"].get<int>());
  const auto labels = header["labels"].get<std::vector<std::string>>();
  std::vector<double> v(table.dim_);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!std::getline(in, line)) {
      throw LoadError("embedding file ends before vector " + std::to_string(i + 1));
    }
    const char* p = line.c_str();
    for (int j = 0; j < table.dim_; ++j) {
      char* end = nullptr;
      v[j] = std::strtod(p, &end);
      if (end == p) {
        throw LoadError("embedding line " + std::to_string(i + 2) + " has too few values");
      }
      p = end;
    }
    table.Add(labels[i], v);
  }
  if (!table.AllFinite()) throw LoadError("embedding file contains non-finite values");
  return table;
}

UnigramSampler::UnigramSampler(std::span<const double> counts, double power) {
  double total = 0;
  cumulative_.reserve(counts.size());
  for (double c : counts) {
    total += c > 0 ? std::pow(c, power) : 0.0;
    cumulative_.push_back(total);
  }
  if (total <= 0) throw InvalidArgument("unigram sampler needs a positive count");
}

int UnigramSampler::Sample(Rng& rng) const {
  const double x = rng.Uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
  return std::min(static_cast<int>(it - cumulative_.begin()),
                  static_cast<int>(cumulative_.size()) - 1);
}

SkipGram::SkipGram(int vocab, int dim, Rng& rng)
    : input_(vocab, dim), output_(vocab, dim) {
  InitUniform(input_, 0.5 / dim, rng);
}

double SkipGram::Loss(int center, int context,
                      std::span<const int> negatives) const {
  auto v = input_.row(center);
  double loss = -LogSigmoid(Dot(output_.row(context), v));
  for (int n : negatives) loss -= LogSigmoid(-Dot(output_.row(n), v));
  return loss;
}

double SkipGram::Update(int center, int context, std::span<const int> negatives,
                        double lr) {
  auto v = input_.row(center);
  Vec dv(v.size(), 0.0);
  double loss = 0;
  auto step = [&](int target, double label) {
    auto o = output_.row(target);
    const double s = Dot(o, v);
    loss -= label > 0 ? LogSigmoid(s) : LogSigmoid(-s);
    const double g = Sigmoid(s) - label;
    Axpy(g, o, dv);
    Axpy(-lr * g, v, o);
  };
  step(context, 1.0);
  for (int n : negatives) step(n, 0.0);
  Axpy(-lr, dv, v);
  return loss;
}

namespace {

struct Graph {
  // Sorted neighbor lists with matching weights.
  std::vector<std::vector<int>> nbrs;
  std::vector<std::vector<double>> weights;

  bool Adjacent(int a, int b) const {
    return std::binary_search(nbrs[a].begin(), nbrs[a].end(), b);
  }
};

Graph MakeGraph(const CooccurrenceMatrix& m) {
  if (m.row_labels != m.col_labels) {
    throw InvalidArgument("node2vec needs an entity-entity co-occurrence matrix");
  }
  Graph g;
  g.nbrs.resize(m.row_labels.size());
  g.weights.resize(m.row_labels.size());
  for (const auto& [rc, v] : m.counts) {  // map order keeps neighbors sorted
    if (v <= 0 || rc.first == rc.second) continue;
    g.nbrs[rc.first].push_back(rc.second);
    g.weights[rc.first].push_back(v);
  }
  return g;
}

int SampleWeighted(std::span<const double> w, Rng& rng) {
  double total = 0;
  for (double x : w) total += x;
  double r = rng.Uniform() * total;
  for (size_t i = 0; i < w.size(); ++i) {
    r -= w[i];
    if (r < 0) return static_cast<int>(i);
  }
  return static_cast<int>(w.size()) - 1;
}

std::vector<std::vector<int>> Walks(const Graph& g, const Node2VecParams& params,
                                    Rng& rng) {
  std::vector<std::vector<int>> walks;
  std::vector<int> order(g.nbrs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::vector<double> biased;
  for (int round = 0; round < params.walks_per_node; ++round) {
    rng.Shuffle(std::span<int>(order));
    for (int start : order) {
      if (g.nbrs[start].empty()) continue;
      std::vector<int> walk = {start};
      while (static_cast<int>(walk.size()) < params.walk_length) {
        const int cur = walk.back();
        const auto& nb = g.nbrs[cur];
        if (nb.empty()) break;
        int next;
        if (walk.size() == 1) {
          next = nb[SampleWeighted(g.weights[cur], rng)];
        } else {
          const int prev = walk[walk.size() - 2];
          biased.assign(g.weights[cur].begin(), g.weights[cur].end());
          for (size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] == prev) {
              biased[i] /= params.p;
            } else if (!g.Adjacent(prev, nb[i])) {
              biased[i] /= params.q;
            }
          }
          next = nb[SampleWeighted(biased, rng)];
        }
        walk.push_back(next);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

// Trains skip-gram over sequences of ids in [0, vocab) with a symmetric
// window and a linearly decaying learning rate.
void TrainSequences(SkipGram& model, const std::vector<std::vector<int>>& seqs,
                    int vocab, int window, int negatives, int epochs, double lr0,
                    Rng& rng) {
  std::vector<double> freq(vocab, 0.0);
  int64_t total_pairs = 0;
  for (const auto& s : seqs) {
    for (int id : s) freq[id] += 1;
    const int n = static_cast<int>(s.size());
    for (int i = 0; i < n; ++i) {
      total_pairs += std::min(n - 1, i + window) - std::max(0, i - window);
    }
  }
  if (total_pairs == 0) return;
  const UnigramSampler sampler(freq);
  total_pairs *= epochs;
  int64_t done = 0;
  std::vector<int> neg(negatives);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& s : seqs) {
      const int n = static_cast<int>(s.size());
      for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - window); j <= std::min(n - 1, i + window); ++j) {
          if (j == i) continue;
          for (int& k : neg) k = sampler.Sample(rng);
          const double lr =
              lr0 * std::max(1e-4, 1.0 - static_cast<double>(done) / total_pairs);
          model.Update(s[i], s[j], neg, lr);
          ++done;
        }
      }
    }
  }
}

}  // namespace

std::vector<std::vector<int>> Node2VecWalks(const CooccurrenceMatrix& matrix,
                                            const Node2VecParams& params,
                                            Rng& rng) {
  return Walks(MakeGraph(matrix), params, rng);
}

EmbeddingTable Node2VecEmbed(const CooccurrenceMatrix& matrix,
                             const Node2VecParams& params) {
  if (params.dim < 1) throw InvalidArgument("node2vec dimension must be >= 1");
  if (params.p <= 0 || params.q <= 0) throw InvalidArgument("node2vec p and q must be > 0");
  EmbeddingTable table(params.dim);
  const int n = static_cast<int>(matrix.row_labels.size());
  if (n == 0) return table;
  Rng rng(params.seed);
  const Graph g = MakeGraph(matrix);
  SkipGram model(n, params.dim, rng);
  const auto walks = Walks(g, params, rng);
  TrainSequences(model, walks, n, params.window, params.negatives, params.epochs,
                 params.lr, rng);
  for (int i = 0; i < n; ++i) table.Add(matrix.row_labels[i], model.input().row(i));
  return table;
}

SvdResult TruncatedSvd(const Matrix& a, int d) {
  const int m = a.rows();
  const int n = a.cols();
  if (d < 1 || d > std::min(m, n)) {
    throw InvalidArgument("SVD rank " + std::to_string(d) + " outside [1, " +
                          std::to_string(std::min(m, n)) + "]");
  }
  constexpr int kMaxIters = 200000;
  constexpr double kTol = 1e-14;
  Rng rng(0x5eed5eedULL);
  std::vector<Vec> vs;
  std::vector<Vec> us;
  Vec sigmas;
  auto project_out = [](Vec& x, const std::vector<Vec>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& b : basis) Axpy(-Dot(b, x), b, x);
    }
  };
  for (int k = 0; k < d; ++k) {
    Vec v(n);
    for (double& x : v) x = rng.Uniform(-1.0, 1.0);
    project_out(v, vs);
    double norm = Norm2(v);
    for (double& x : v) x /= norm;
    for (int it = 0; it < kMaxIters; ++it) {
      Vec w = MatTVec(a, MatVec(a, v));
      project_out(w, vs);  // deflate directions already found
      norm = Norm2(w);
      if (norm == 0) break;
      for (double& x : w) x /= norm;
      double diff = 0;
      for (int i = 0; i < n; ++i) diff += (w[i] - v[i]) * (w[i] - v[i]);
      v = std::move(w);
      if (std::sqrt(diff) < kTol) break;
    }
    Vec u = MatVec(a, v);
    const double sigma = Norm2(u);
    if (sigma > 0) {
      for (double& x : u) x /= sigma;
      project_out(u, us);
      const double un = Norm2(u);
      for (double& x : u) x /= un;
    } else {
      // Null direction: any unit vector orthogonal to the previous ones.
      for (int i = 0; i < m && Norm2(u) == 0; ++i) {
        Vec e(m, 0.0);
        e[i] = 1;
        project_out(e, us);
        if (Norm2(e) > 1e-8) u = e;
      }
      const double un = Norm2(u);
      if (un > 0) {
        for (double& x : u) x /= un;
      }
    }
    vs.push_back(std::move(v));
    us.push_back(std::move(u));
    sigmas.push_back(sigma);
  }
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sigmas[x] > sigmas[y]; });
  SvdResult out{Matrix(m, d), Vec(d), Matrix(n, d)};
  for (int k = 0; k < d; ++k) {
    const int src = order[k];
    out.s[k] = sigmas[src];
    for (int i = 0; i < m; ++i) out.u(i, k) = us[src][i];
    for (int j = 0; j < n; ++j) out.v(j, k) = vs[src][j];
  }
  return out;
}

EmbeddingTable SvdEmbed(const CooccurrenceMatrix& matrix, int d) {
  Matrix a = matrix.Dense();
  for (double& x : a.data()) x = std::log1p(x);
  const SvdResult svd = TruncatedSvd(a, d);
  EmbeddingTable table(d);
  Vec row(d);
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < d; ++k) row[k] = svd.u(i, k) * std::sqrt(svd.s[k]);
    table.Add(matrix.row_labels[i], row);
  }
  return table;
}

EmbeddingTable TrainCharEmbeddings(std::span<const std::u32string> texts,
                                   const CharEmbeddingParams& params) {
  if (params.dim < 1) throw InvalidArgument("char embedding dimension must be >= 1");
  std::set<char32_t> chars;
  for (const auto& t : texts) chars.insert(t.begin(), t.end());
  if (chars.empty()) throw InvalidArgument("character embeddings need a non-empty corpus");
  std::map<char32_t, int> ids;
  for (char32_t c : chars) ids.emplace(c, static_cast<int>(ids.size()));
  std::vector<std::vector<int>> seqs;
  seqs.reserve(texts.size());
  for (const auto& t : texts) {
    std::vector<int> s;
    s.reserve(t.size());
    for (char32_t c : t) s.push_back(ids.at(c));
    seqs.push_back(std::move(s));
  }
  const int vocab = static_cast<int>(ids.size());
  Rng rng(params.seed);
  SkipGram model(vocab, params.dim, rng);
  TrainSequences(model, seqs, vocab, params.window, params.negatives, params.epochs,
                 params.lr, rng);
  EmbeddingTable table(params.dim);
  table.Add(std::string(kUnkLabel), Vec(params.dim, 0.0));
  for (const auto& [c, id] : ids) table.Add(U32ToUtf8(c), model.input().row(id));
  return table;
}

Vec EntityInputRepr(std::optional<std::span<const double>> u_nod,
                    std::optional<std::span<const double>> u_wrd, int nod_dim,
                    int wrd_dim) {
  Vec out(static_cast<size_t>(nod_dim + wrd_dim), 0.0);
  if (u_nod) {
    if (static_cast<int>(u_nod->size()) != nod_dim) throw ShapeError("u_nod has wrong length");
    std::copy(u_nod->begin(), u_nod->end(), out.begin());
  }
  if (u_wrd) {
    if (static_cast<int>(u_wrd->size()) != wrd_dim) throw ShapeError("u_wrd has wrong length");
    std::copy(u_wrd->begin(), u_wrd->end(), out.begin() + nod_dim);
  }
  return out;
}

EntityInputTable EntityInputTable::Build(const KnowledgeBase& kb,
                                         const EmbeddingTable& nod,
                                         const EmbeddingTable& wrd) {
  EntityInputTable t;
  t.dim_ = nod.dim() + wrd.dim();
  for (const auto& [id, e] : kb.entities()) {
    std::optional<std::span<const double>> a, b;
    if (nod.Contains(id)) {
      a = nod.Get(id);
    } else {
      ++t.missing_nod_;
    }
    if (wrd.Contains(id)) {
      b = wrd.Get(id);
    } else {
      ++t.missing_wrd_;
    }
    t.vectors_.emplace(id, EntityInputRepr(a, b, nod.dim(), wrd.dim()));
  }
  if (t.missing_nod_ || t.missing_wrd_) {
    Log("entity inputs: " + std::to_string(t.missing_nod_) +
        " entities without a graph embedding, " + std::to_string(t.missing_wrd_) +
        " without an SVD embedding; using zeros");
  }
  return t;
}

const Vec& EntityInputTable::Get(std::string_view id) const {
  auto it = vectors_.find(id);
  if (it == vectors_.end()) throw NotFoundError("no entity input for '" + std::string(id) + "'");
  return it->second;
}

}  // namespace xref
