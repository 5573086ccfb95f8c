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

#include "xref/examples.h"

#include "xref/baselines.h"

#include <map>
#include <sstream>

#include "xref/error.h"
#include "xref/log.h"
#include "xref/rng.h"
#include "xref/text.h"

namespace xref {
namespace {

enum SeedStream : uint64_t {
  kDataStream = 0,
  kNodeStream = 1,
  kCharStream = 2,
  kInitStream = 3,
  kTrainStream = 4,
  kPretrainStream = 5,
};

std::vector<std::string> ReadLines(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

ExampleBuilder::ExampleBuilder(const KnowledgeBase& kb, const EntityInputTable& inputs,
                               const CandidateBuilder& candidates,
                               const FeatureExtractor* features)
    : kb_(kb),
      inputs_(inputs),
      candidates_(candidates),
      features_(features),
      tokenizer_(MakeCanonicalTokenizer(kb)) {}

LinkingExample ExampleBuilder::Build(const Comment& comment, const Mention& mention,
                                     const Article& article) const {
  return Build(comment, mention, article, ArticleEntitySet(article, kb_, *tokenizer_));
}

LinkingExample ExampleBuilder::Build(const Comment& comment, const Mention& mention,
                                     const Article& article,
                                     const std::vector<std::string>& article_entities) const {
  LinkingExample ex;
  ex.comment_id = comment.id;
  ex.article_id = comment.article_id;
  ex.start = mention.start;
  ex.end = mention.end;
  ex.text = comment.chars;
  ex.type = mention.type;
  ex.gold = mention.gold;
  const CandidateSet cands = candidates_.Build(comment, mention, article);
  for (const Candidate& c : cands.candidates) {
    ex.candidate_ids.push_back(c.entity_id);
    ex.candidate_inputs.push_back(c.is_nil() ? Vec() : inputs_.Get(c.entity_id));
  }
  if (features_) ex.features = features_->ExtractAll(comment, mention, article, cands);
  ex.article_entities = article_entities;
  for (const auto& id : article_entities) ex.article_inputs.push_back(inputs_.Get(id));
  return ex;
}

std::vector<LinkingExample> ExampleBuilder::BuildAll(std::span<const Comment* const> comments,
                                                     const Corpus& articles) const {
  std::map<std::string, std::vector<std::string>> entity_sets;
  std::vector<LinkingExample> out;
  for (const Comment* c : comments) {
    const Article& article = articles.article(c->article_id);
    auto it = entity_sets.find(article.id);
    if (it == entity_sets.end()) {
      it = entity_sets.emplace(article.id, ArticleEntitySet(article, kb_, *tokenizer_)).first;
    }
    for (const Mention& m : c->mentions) out.push_back(Build(*c, m, article, it->second));
  }
  return out;
}

Dataset DatasetFromSynthetic(SyntheticData data) {
  Dataset d;
  d.kb = std::move(data.kb);
  d.corpus = std::move(data.corpus);
  d.split = std::move(data.split);
  d.titles = std::move(data.titles);
  d.unlabeled = std::move(data.unlabeled);
  d.pronouns = PronounLexicon::Parse(SyntheticPronounLexicon());
  return d;
}

Dataset LoadDataset(const XrefConfig& config, uint64_t seed) {
  const DataConfig& dc = config.data;
  Dataset d;
  if (dc.kb.empty()) {
    d = DatasetFromSynthetic(GenSynthetic(dc.synthetic, Rng::Derive(seed, kDataStream)));
  } else {
    if (dc.articles.empty() || dc.comments.empty() || dc.split.empty()) {
      throw InvalidArgument("data needs articles, comments and split next to kb");
    }
    d.kb = LoadKb(dc.kb);
    d.corpus = LoadCorpus(dc.articles, dc.comments);
    d.split = ParseSplit(ReadFile(dc.split));
    if (!dc.titles.empty()) d.titles = ReadLines(dc.titles);
    if (!dc.unlabeled_articles.empty() && !dc.unlabeled_comments.empty()) {
      d.unlabeled = LoadCorpus(dc.unlabeled_articles, dc.unlabeled_comments);
    }
  }
  ValidateAgainstKb(d.corpus, d.kb);
  ValidateSplit(d.split);
  if (!dc.pronouns.empty()) d.pronouns = PronounLexicon::Parse(ReadFile(dc.pronouns));
  if (!dc.transliteration.empty()) {
    d.transliterator = Transliterator::Parse(ReadFile(dc.transliteration));
  }
  if (!dc.special_surfaces.empty()) {
    for (const auto& s : ReadLines(dc.special_surfaces)) d.special_surfaces.insert(NormalizeSurface(s));
  }
  return d;
}

EmbeddingSet TrainEmbeddings(const Dataset& data, const XrefConfig& config, uint64_t seed) {
  EmbeddingSet out;
  const CooccurrenceMatrix ee =
      BuildCooccurrence(data.titles, data.kb, CooccurrenceMode::kEntityEntity);
  Node2VecParams np = config.training.node2vec;
  np.dim = config.dims.node_dim;
  np.seed = Rng::Derive(seed, kNodeStream);
  out.node = Node2VecEmbed(ee, np);

  const CooccurrenceMatrix ew =
      BuildCooccurrence(data.titles, data.kb, CooccurrenceMode::kEntityWord);
  const int rank = std::min<int>(ew.row_labels.size(), ew.col_labels.size());
  if (rank >= config.dims.word_dim) {
    out.word = SvdEmbed(ew, config.dims.word_dim);
  } else {
    Log("entity-word matrix has rank bound " + std::to_string(rank) + " < word_dim " +
        std::to_string(config.dims.word_dim) + "; SVD embeddings left empty");
    out.word = EmbeddingTable(config.dims.word_dim);
  }

  std::vector<std::u32string> texts;
  for (const Comment* c : data.corpus.CommentsIn(data.split.train)) texts.push_back(c->chars);
  for (const Comment& c : data.unlabeled.comments()) texts.push_back(c.chars);
  CharEmbeddingParams cp = config.training.char_embeddings;
  cp.dim = config.dims.char_dim;
  cp.seed = Rng::Derive(seed, kCharStream);
  out.chars = TrainCharEmbeddings(texts, cp);
  return out;
}

EmbeddingSet LoadOrTrainEmbeddings(const Dataset& data, const XrefConfig& config,
                                   uint64_t seed) {
  const DataConfig& dc = config.data;
  if (dc.node_embeddings.empty() || dc.word_embeddings.empty() || dc.char_embeddings.empty()) {
    return TrainEmbeddings(data, config, seed);
  }
  EmbeddingSet out;
  out.node = EmbeddingTable::Parse(ReadFile(dc.node_embeddings));
  out.word = EmbeddingTable::Parse(ReadFile(dc.word_embeddings));
  out.chars = EmbeddingTable::Parse(ReadFile(dc.char_embeddings));
  if (out.node.dim() != config.dims.node_dim || out.word.dim() != config.dims.word_dim ||
      out.chars.dim() != config.dims.char_dim) {
    throw ShapeError("embedding files do not match the configured dims");
  }
  return out;
}

Pipeline::Pipeline(Dataset data, XrefConfig config, uint64_t seed)
    : data_(std::move(data)), config_(std::move(config)), seed_(seed) {
  embeddings_ = TrainEmbeddings(data_, config_, seed_);
  Prepare();
}

Pipeline::Pipeline(Dataset data, XrefConfig config, uint64_t seed, EmbeddingSet embeddings)
    : data_(std::move(data)),
      config_(std::move(config)),
      seed_(seed),
      embeddings_(std::move(embeddings)) {
  Prepare();
}

void Pipeline::Prepare() {
  const auto train = Comments(data_.split.train);
  if (config_.data.harvest_aliases) {
    aliases_ = HarvestAliases(train, data_.kb, data_.pronouns.Surfaces());
    ApplyAliases(data_.kb, aliases_);
  }
  priors_ = PriorTable::Build(train);
  FeatureConfig fc;
  fc.edit_dist_max = config_.features.edit_dist_max;
  fc.comment_dist_absent = config_.features.comment_dist_absent;
  fc.special_surfaces = data_.special_surfaces;
  fc.pronouns = data_.pronouns;
  fc.transliterator = data_.transliterator;
  features_ = std::make_unique<FeatureExtractor>(data_.kb, priors_, train, std::move(fc));
  candidates_ = std::make_unique<CandidateBuilder>(data_.kb, config_.data.harvest_aliases);
  inputs_ = EntityInputTable::Build(data_.kb, embeddings_.node, embeddings_.word);
}

std::vector<const Comment*> Pipeline::Comments(const std::set<std::string>& article_ids) const {
  return data_.corpus.CommentsIn(article_ids);
}

std::vector<LinkingExample> Pipeline::Examples(const std::set<std::string>& article_ids) const {
  const ExampleBuilder builder(data_.kb, inputs_, *candidates_,
                               config_.ablations.features ? features_.get() : nullptr);
  return builder.BuildAll(Comments(article_ids), data_.corpus);
}

std::vector<LinkingExample> Pipeline::WeakExamples() const {
  const std::vector<Comment> labeled = WeakLabel(data_.unlabeled.comments(), data_.kb);
  std::vector<const Comment*> ptrs;
  for (const Comment& c : labeled) ptrs.push_back(&c);
  const ExampleBuilder builder(data_.kb, inputs_, *candidates_,
                               config_.ablations.features ? features_.get() : nullptr);
  return builder.BuildAll(ptrs, data_.unlabeled);
}

XrefModel Pipeline::NewModel(uint64_t seed) const {
  XrefModel model(config_.ToModelConfig(), embeddings_.chars.labels());
  Rng rng(Rng::Derive(seed, kInitStream));
  model.Init(rng, &embeddings_.chars);
  return model;
}

Pipeline::Trained Pipeline::Fit(XrefModel& model, std::span<const LinkingExample> train,
                                std::span<const LinkingExample> valid,
                                std::span<const LinkingExample> weak, uint64_t seed) const {
  Trained out;
  if (config_.ablations.pretrain && !weak.empty() && config_.training.pretrain_epochs > 0) {
    TrainOptions pre = config_.ToTrainOptions(Rng::Derive(seed, kPretrainStream));
    pre.epochs = config_.training.pretrain_epochs;
    out.pretrain = Train(model, weak, valid, pre);
  }
  out.finetune = Train(model, train, valid, config_.ToTrainOptions(Rng::Derive(seed, kTrainStream)));
  return out;
}

std::vector<PredictionRecord> PredictXref(const XrefModel& model,
                                          std::span<const LinkingExample> examples) {
  std::vector<PredictionRecord> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    std::vector<std::string> ranking;
    for (const auto& rc : model.PredictTopK(ex, static_cast<int>(ex.candidate_ids.size()))) {
      ranking.push_back(rc.entity_id);
    }
    out.push_back(MakeRecord(ex, std::move(ranking)));
  }
  return out;
}

const std::vector<std::string>& BaselineNames() {
  static const std::vector<std::string> kNames = {
      "match_canon", "match_canon_and_nick", "frequency_in_art", "first_in_art",
      "prior",       "vsm",                  "logreg"};
  return kNames;
}

std::vector<PredictionRecord> PredictBaseline(const Pipeline& pipeline, std::string_view system,
                                              std::span<const LinkingExample> examples,
                                              std::span<const LinkingExample> train,
                                              uint64_t seed) {
  const Dataset& data = pipeline.data();
  const auto tokenizer = MakeCanonicalTokenizer(data.kb);
  LogReg logreg;
  if (system == "logreg") {
    std::vector<FeatureVector> x;
    std::vector<double> y;
    LogRegData(train, &x, &y);
    LogRegOptions options;
    options.seed = seed;
    logreg.Train(x, y, options);
  } else if (std::find(BaselineNames().begin(), BaselineNames().end(), system) ==
             BaselineNames().end()) {
    throw InvalidArgument("unknown system: " + std::string(system));
  }
  std::vector<PredictionRecord> out;
  for (const auto& ex : examples) {
    const std::string surface = U32ToUtf8(ex.text.substr(ex.start, ex.end - ex.start));
    std::vector<std::string> ranking;
    if (system == "match_canon") {
      ranking = {MatchCanon(surface, data.kb)};
    } else if (system == "match_canon_and_nick") {
      ranking = {MatchCanonAndNick(surface, data.kb)};
    } else if (system == "frequency_in_art") {
      ranking = FrequencyInArt(data.corpus.article(ex.article_id), data.kb);
    } else if (system == "first_in_art") {
      ranking = FirstInArt(data.corpus.article(ex.article_id), data.kb);
    } else if (system == "prior") {
      ranking = PriorRanking(surface, pipeline.priors());
    } else if (system == "vsm") {
      ranking = VsmRank(ex, data.kb, pipeline.features().tfidf(), *tokenizer);
    } else {
      ranking = logreg.Rank(ex);
    }
    out.push_back(MakeRecord(ex, std::move(ranking)));
  }
  return out;
}

}  // namespace xref
