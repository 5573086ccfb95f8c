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

#include "cli.h"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xref/baselines.h"
#include "xref/candidates.h"
#include "xref/config.h"
#include "xref/error.h"
#include "xref/eval.h"
#include "xref/examples.h"
#include "xref/gradcheck.h"
#include "xref/io.h"
#include "xref/log.h"
#include "xref/model.h"
#include "xref/rng.h"
#include "xref/synthetic.h"

namespace xref::cli {
namespace {

constexpr double kGradTolerance = 1e-4;

struct Options {
  std::string config_path;
  uint64_t seed = 0;
  int threads = 1;
  bool no_comment_attn = false;
  bool no_article_attn = false;
  bool no_features = false;
  bool no_pretrain = false;
  bool quiet = false;

  std::string out;
  std::string kb;
  std::string init;
  std::string checkpoint;
  std::string report;
  std::string split = "test";
  std::string system = "xref";
  int k = 0;
  std::string pred;
  std::string baseline;
  std::string metric = "accuracy";
  int iterations = 9999;
};

XrefConfig LoadConfig(const Options& o) {
  XrefConfig c = o.config_path.empty() ? XrefConfig{} : XrefConfig::Load(o.config_path);
  if (o.no_comment_attn) c.ablations.comment_attention = false;
  if (o.no_article_attn) c.ablations.article_attention = false;
  if (o.no_features) c.ablations.features = false;
  if (o.no_pretrain) c.ablations.pretrain = false;
  return c;
}

Json Provenance(const XrefConfig& c, uint64_t seed) {
  return Json{{"config_hash", c.Hash()}, {"seed", seed}};
}

void EnsureParent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void WriteJson(const std::string& path, Json j, const Json& provenance) {
  EnsureParent(path);
  j["provenance"] = provenance;
  WriteFile(path, j.dump(2) + "\n");
}

// JSONL and plain-text outputs carry provenance in a sidecar file.
void WriteWithSidecar(const std::string& path, std::string_view contents,
                      const Json& provenance) {
  EnsureParent(path);
  WriteFile(path, contents);
  WriteFile(path + ".provenance.json", provenance.dump(2) + "\n");
}

std::string JoinPath(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

const std::set<std::string>& SplitIds(const DatasetSplit& split, const std::string& name) {
  if (name == "train") return split.train;
  if (name == "valid") return split.valid;
  return split.test;
}

int GenSynth(const Options& o) {
  const XrefConfig c = LoadConfig(o);
  const Json prov = Provenance(c, o.seed);
  SyntheticData data = GenSynthetic(c.data.synthetic, Rng::Derive(o.seed, 0));
  std::filesystem::create_directories(o.out);
  WriteWithSidecar(JoinPath(o.out, "kb.jsonl"), SerializeKb(data.kb), prov);
  WriteWithSidecar(JoinPath(o.out, "articles.jsonl"), SerializeArticles(data.corpus), prov);
  WriteWithSidecar(JoinPath(o.out, "comments.jsonl"), SerializeComments(data.corpus.comments()),
                   prov);
  WriteWithSidecar(JoinPath(o.out, "split.json"), SerializeSplit(data.split), prov);
  std::string titles;
  for (const auto& t : data.titles) titles += t + "\n";
  WriteWithSidecar(JoinPath(o.out, "titles.txt"), titles, prov);
  WriteWithSidecar(JoinPath(o.out, "unlabeled_articles.jsonl"), SerializeArticles(data.unlabeled),
                   prov);
  WriteWithSidecar(JoinPath(o.out, "unlabeled_comments.jsonl"),
                   SerializeComments(data.unlabeled.comments()), prov);
  WriteWithSidecar(JoinPath(o.out, "pronouns.jsonl"), SyntheticPronounLexicon(), prov);
  std::cout << Json{{"entities", data.kb.entities().size()},
                    {"articles", data.corpus.articles().size()},
                    {"comments", data.corpus.comments().size()},
                    {"mentions", data.corpus.num_mentions()},
                    {"titles", data.titles.size()},
                    {"unlabeled_comments", data.unlabeled.comments().size()}}
                   .dump(2)
            << "\n";
  return 0;
}

int BuildKb(const Options& o) {
  const XrefConfig c = LoadConfig(o);
  const std::string path = o.kb.empty() ? c.data.kb : o.kb;
  if (path.empty()) throw InvalidArgument("build-kb needs --kb or data.kb in the config");
  const KnowledgeBase kb = LoadKb(path);
  int ambiguous = 0;
  int relations = 0;
  std::set<std::string> surfaces;
  for (const auto& [s, ids] : kb.canonical_index()) surfaces.insert(s);
  for (const auto& [s, ids] : kb.alias_index()) surfaces.insert(s);
  for (const auto& s : surfaces) ambiguous += kb.IsAmbiguous(s) ? 1 : 0;
  for (const auto& [id, e] : kb.entities()) relations += static_cast<int>(e.relations.size());
  std::cout << Json{{"entities", kb.entities().size()},
                    {"surfaces", surfaces.size()},
                    {"ambiguous_surfaces", ambiguous},
                    {"relations", relations}}
                   .dump(2)
            << "\n";
  if (!o.out.empty()) WriteWithSidecar(o.out, SerializeKb(kb), Provenance(c, o.seed));
  return 0;
}

int Embed(const Options& o) {
  const XrefConfig c = LoadConfig(o);
  const Dataset data = LoadDataset(c, o.seed);
  const EmbeddingSet e = TrainEmbeddings(data, c, o.seed);
  const Json header = {{"provenance", Provenance(c, o.seed)}};
  std::filesystem::create_directories(o.out);
  WriteFile(JoinPath(o.out, "node.emb"), e.node.Serialize(header));
  WriteFile(JoinPath(o.out, "word.emb"), e.word.Serialize(header));
  WriteFile(JoinPath(o.out, "char.emb"), e.chars.Serialize(header));
  std::cout << Json{{"node", e.node.size()}, {"word", e.word.size()}, {"char", e.chars.size()}}
                   .dump(2)
            << "\n";
  return 0;
}

int Candidates(const Options& o) {
  const XrefConfig c = LoadConfig(o);
  Dataset data = LoadDataset(c, o.seed);
  const auto train = data.corpus.CommentsIn(data.split.train);
  Json coverage = Json::object();
  auto measure = [&](const char* key, bool use_aliases) {
    for (const char* split : {"train", "valid", "test"}) {
      const auto cs = data.corpus.CommentsIn(SplitIds(data.split, split));
      const CoverageCounts cc = CountCoverage(cs, data.corpus, data.kb, use_aliases);
      coverage[key][split] = {{"reachable", cc.reachable},
                              {"total", cc.total},
                              {"coverage", cc.fraction()}};
    }
  };
  measure("without_aliases", false);
  std::vector<AliasAddition> aliases;
  if (c.data.harvest_aliases) {
    aliases = HarvestAliases(train, data.kb, data.pronouns.Surfaces());
    ApplyAliases(data.kb, aliases);
    measure("with_aliases", true);
  }
  coverage["harvested_aliases"] = aliases.size();
  const CandidateBuilder builder(data.kb, c.data.harvest_aliases);
  std::vector<CandidateSet> sets;
  for (const Comment& cm : data.corpus.comments()) {
    const Article& a = data.corpus.article(cm.article_id);
    for (const Mention& m : cm.mentions) sets.push_back(builder.Build(cm, m, a));
  }
  if (!o.out.empty()) WriteWithSidecar(o.out, SerializeCandidateSets(sets), Provenance(c, o.seed));
  std::cout << coverage.dump(2) << "\n";
  return 0;
}

int WeakLabelCmd(const Options& o) {
  const XrefConfig c = LoadConfig(o);
  const Dataset data = LoadDataset(c, o.seed);
  const std::vector<Comment> labeled = WeakLabel(data.unlabeled.comments(), data.kb);
  int mentions = 0;
  for (const auto& cm : labeled) mentions += static_cast<int>(cm.mentions.size());
  if (!o.out.empty()) WriteWithSidecar(o.out, SerializeComments(labeled), Provenance(c, o.seed));
  std::cout << Json{{"comments", labeled.size()}, {"mentions", mentions}}.dump(2) << "\n";
  return 0;
}

Json Checkpoint(const XrefModel& model, const XrefConfig& c, uint64_t seed) {
  Json j = model.ToJson();
  j["config_echo"] = c.ToJson();
  j["provenance"] = Provenance(c, seed);
  return j;
}

void SaveCheckpoint(const std::string& path, const XrefModel& model, const XrefConfig& c,
                    uint64_t seed) {
  EnsureParent(path);
  WriteFile(path, Checkpoint(model, c, seed).dump() + "\n");
}

XrefModel LoadCheckpoint(const std::string& path, uint64_t* seed) {
  Json j;
  try {
    j = Json::parse(ReadFile(path));
  } catch (const Json::parse_error& e) {
    throw LoadError("checkpoint " + path + " is not valid JSON: " + e.what());
  }
  if (seed && j.contains("provenance")) *seed = j["provenance"].value("seed", *seed);
  return XrefModel::FromJson(j);
}

int Pretrain(const Options& o) {
  const XrefConfig c = LoadConfig(o);
  Dataset data = LoadDataset(c, o.seed);
  const EmbeddingSet emb = LoadOrTrainEmbeddings(data, c, o.seed);
  const Pipeline p(std::move(data), c, o.seed, emb);
  const auto weak = p.WeakExamples();
  if (weak.empty()) throw InvalidArgument("no weak-labeled comments to pre-train on");
  const auto valid = p.Examples(p.data().split.valid);
  XrefModel model = p.NewModel(o.seed);
  TrainOptions t = c.ToTrainOptions(Rng::Derive(o.seed, 5));
  t.epochs = c.training.pretrain_epochs;
  t.log_progress = !o.quiet;
  const TrainResult r = Train(model, weak, valid, t);
  SaveCheckpoint(o.out, model, c, o.seed);
  if (!o.report.empty()) {
    WriteJson(o.report, Json{{"pretrain", TrainResultToJson(r)}, {"weak_examples", weak.size()}},
              Provenance(c, o.seed));
  }
  return 0;
}

int TrainCmd(const Options& o) {
  const XrefConfig c = LoadConfig(o);
  Dataset data = LoadDataset(c, o.seed);
  const EmbeddingSet emb = LoadOrTrainEmbeddings(data, c, o.seed);
  const Pipeline p(std::move(data), c, o.seed, emb);
  const auto train = p.Examples(p.data().split.train);
  const auto valid = p.Examples(p.data().split.valid);
  const auto test = p.Examples(p.data().split.test);
  std::optional<XrefModel> model;
  std::vector<LinkingExample> weak;
  if (!o.init.empty()) {
    model.emplace(LoadCheckpoint(o.init, nullptr));
    const ModelConfig want = c.ToModelConfig();
    const ModelConfig& have = model->config();
    if (want.char_dim != have.char_dim || want.hidden != have.hidden ||
        want.joint_dim != have.joint_dim || want.entity_dim != have.entity_dim) {
      throw ShapeError("warm-start checkpoint dims differ from the config");
    }
    model->mutable_config() = want;
  } else {
    model.emplace(p.NewModel(o.seed));
    if (c.ablations.pretrain) weak = p.WeakExamples();
  }
  if (!o.quiet) {
    Log("train " + std::to_string(train.size()) + " valid " + std::to_string(valid.size()) +
        " test " + std::to_string(test.size()) + " weak " + std::to_string(weak.size()) +
        " mentions");
  }
  const Pipeline::Trained r = p.Fit(*model, train, valid, weak, o.seed);
  SaveCheckpoint(o.out, *model, c, o.seed);
  Json report = {{"finetune", TrainResultToJson(r.finetune)},
                 {"mentions", {{"train", train.size()},
                               {"valid", valid.size()},
                               {"test", test.size()},
                               {"weak", weak.size()}}}};
  if (!weak.empty()) report["pretrain"] = TrainResultToJson(r.pretrain);
  if (!valid.empty()) report["valid"] = MetricReport(PredictXref(*model, valid));
  if (!test.empty()) report["test"] = MetricReport(PredictXref(*model, test));
  if (!o.report.empty()) WriteJson(o.report, report, Provenance(c, o.seed));
  if (report.contains("test")) std::cout << MetricTable(report["test"]);
  return 0;
}

int Predict(const Options& o, bool seed_given) {
  XrefConfig c = LoadConfig(o);
  uint64_t seed = o.seed;
  std::optional<XrefModel> model;
  if (o.system == "xref") {
    if (o.checkpoint.empty()) throw InvalidArgument("predict --system xref needs --checkpoint");
    uint64_t ckpt_seed = seed;
    model.emplace(LoadCheckpoint(o.checkpoint, &ckpt_seed));
    if (!seed_given) seed = ckpt_seed;
    const ModelConfig& mc = model->config();
    c.ablations.comment_attention = mc.comment_attention;
    c.ablations.article_attention = mc.article_attention;
    c.ablations.features = mc.features;
  } else if (o.system == "logreg") {
    c.ablations.features = true;
  }
  Dataset data = LoadDataset(c, seed);
  const EmbeddingSet emb = LoadOrTrainEmbeddings(data, c, seed);
  const Pipeline p(std::move(data), c, seed, emb);
  const auto examples = p.Examples(SplitIds(p.data().split, o.split));
  std::vector<PredictionRecord> records;
  if (model) {
    records = PredictXref(*model, examples);
  } else {
    const auto train = o.system == "logreg" ? p.Examples(p.data().split.train)
                                            : std::vector<LinkingExample>{};
    records = PredictBaseline(p, o.system, examples, train, seed);
  }
  if (o.k > 0) {
    for (auto& r : records) {
      if (static_cast<int>(r.ranking.size()) > o.k) r.ranking.resize(o.k);
    }
  }
  WriteWithSidecar(o.out, SerializePredictions(records), Provenance(c, seed));
  std::cout << MetricTable(MetricReport(records));
  return 0;
}

int Eval(const Options& o) {
  const std::vector<PredictionRecord> a = ParsePredictions(ReadFile(o.pred));
  Json report = {{"metrics", MetricReport(a)}};
  std::cout << MetricTable(report["metrics"]);
  const bool typed = std::all_of(a.begin(), a.end(), [](const auto& r) { return r.type.has_value(); });
  if (typed) {
    const auto breakdown = ErrorBreakdown(a);
    report["error_breakdown"] = ErrorBreakdownToJson(breakdown);
    std::cout << ErrorBreakdownTable(breakdown);
  }
  if (!o.baseline.empty()) {
    const std::vector<PredictionRecord> b = ParsePredictions(ReadFile(o.baseline));
    std::vector<PredictionRecord> sa, sb;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (!a[i].is_plural()) {
        sa.push_back(a[i]);
        sb.push_back(b[i]);
      }
    }
    if (a.size() != b.size()) throw InvalidArgument("prediction files differ in length");
    const bool mrr = o.metric == "mrr";
    const Metric metric = [mrr](std::span<const PredictionRecord> r) {
      return mrr ? Mrr(r, true) : Accuracy(r, true);
    };
    const double pvalue = ApproxRandomization(sa, sb, metric, o.iterations, o.seed);
    report["significance"] = {{"metric", o.metric},
                              {"iterations", o.iterations},
                              {"system", metric(sa)},
                              {"baseline", metric(sb)},
                              {"p_value", pvalue}};
    std::cout << "p_value (" << o.metric << ", R=" << o.iterations << "): " << pvalue << "\n";
  }
  if (!o.out.empty()) {
    XrefConfig c = LoadConfig(o);
    WriteJson(o.out, report, Provenance(c, o.seed));
  }
  return 0;
}

int GradCheckCmd(const Options& o) {
  bool ok = true;
  for (const auto& c : RunGradChecks(o.seed)) {
    const bool pass = c.report.max_rel_error < kGradTolerance;
    ok = ok && pass;
    std::cout << (pass ? "ok   " : "FAIL ") << c.name << " max_rel_error=" << c.report.max_rel_error
              << " checked=" << c.report.checked;
    if (!pass) std::cout << " worst=" << c.report.worst_param << "[" << c.report.worst_index << "]";
    std::cout << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int Run(int argc, char** argv) {
  CLI::App app{"Entity linking for news comments"};
  app.require_subcommand(1);
  Options o;
  auto* seed_opt = app.add_option("--seed", o.seed, "Seed for every random stage");
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--no-comment-attn", o.no_comment_attn, "Disable comment attention");
  app.add_flag("--no-article-attn", o.no_article_attn, "Disable article attention");
  app.add_flag("--no-features", o.no_features, "Disable hand-crafted features");
  app.add_flag("--no-pretrain", o.no_pretrain, "Skip weak-supervision pre-training");
  app.add_flag("--quiet", o.quiet, "Suppress progress logging");
  app.fallthrough();

  auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic corpus");
  gen->add_option("--out", o.out, "Output directory")->required();
  auto* kb = app.add_subcommand("build-kb", "Validate and index a knowledge base");
  kb->add_option("--kb", o.kb, "KB JSONL (defaults to data.kb)");
  kb->add_option("--out", o.out, "Write the normalized KB here");
  auto* embed = app.add_subcommand("embed", "Train node, SVD and character embeddings");
  embed->add_option("--out", o.out, "Output directory")->required();
  auto* cands = app.add_subcommand("candidates", "Build candidate sets and report coverage");
  cands->add_option("--out", o.out, "Candidate set JSONL");
  auto* weak = app.add_subcommand("weak-label", "Distantly label unlabeled comments");
  weak->add_option("--out", o.out, "Labeled comments JSONL");
  auto* pre = app.add_subcommand("pretrain", "Pre-train on weak labels");
  pre->add_option("--out", o.out, "Checkpoint path")->required();
  pre->add_option("--report", o.report, "Training trace JSON");
  auto* train = app.add_subcommand("train", "Train the linker");
  train->add_option("--out", o.out, "Checkpoint path")->required();
  train->add_option("--init", o.init, "Warm-start checkpoint")->check(CLI::ExistingFile);
  train->add_option("--report", o.report, "Metric report JSON");
  auto* predict = app.add_subcommand("predict", "Rank candidates for a split");
  predict->add_option("--checkpoint", o.checkpoint, "Checkpoint for --system xref")
      ->check(CLI::ExistingFile);
  predict->add_option("--split", o.split, "train, valid or test")
      ->check(CLI::IsMember({"train", "valid", "test"}));
  std::vector<std::string> systems = {"xref"};
  systems.insert(systems.end(), BaselineNames().begin(), BaselineNames().end());
  predict->add_option("--system", o.system, "xref or a baseline")->check(CLI::IsMember(systems));
  predict->add_option("--k", o.k, "Keep the top k candidates (0 keeps all)")
      ->check(CLI::NonNegativeNumber);
  predict->add_option("--out", o.out, "Prediction JSONL")->required();
  auto* eval = app.add_subcommand("eval", "Score predictions");
  eval->add_option("--pred", o.pred, "Prediction JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--baseline", o.baseline, "Second system for the significance test")
      ->check(CLI::ExistingFile);
  eval->add_option("--metric", o.metric, "Significance metric")
      ->check(CLI::IsMember({"accuracy", "mrr"}));
  eval->add_option("--iterations", o.iterations, "Randomization rounds")
      ->check(CLI::PositiveNumber);
  eval->add_option("--out", o.out, "Report JSON");
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference gradient checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  SetLogEnabled(!o.quiet);
  if (o.threads > 1) Log("computation is single-threaded; --threads has no effect");
  try {
    if (*gen) return GenSynth(o);
    if (*kb) return BuildKb(o);
    if (*embed) return Embed(o);
    if (*cands) return Candidates(o);
    if (*weak) return WeakLabelCmd(o);
    if (*pre) return Pretrain(o);
    if (*train) return TrainCmd(o);
    if (*predict) return Predict(o, seed_opt->count() > 0);
    if (*eval) return Eval(o);
    if (*grad) return GradCheckCmd(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace xref::cli
