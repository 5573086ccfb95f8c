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

#include "xref/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "xref/candidates.h"
#include "xref/error.h"
#include "xref/rng.h"

namespace xref {
namespace {

std::vector<const PredictionRecord*> Singular(std::span<const PredictionRecord> records,
                                              bool include_nil) {
  std::vector<const PredictionRecord*> out;
  for (const auto& r : records) {
    if (r.gold.empty()) throw InvalidArgument("record " + r.Key() + " has no gold entry");
    if (r.is_plural()) {
      throw InvalidArgument("record " + r.Key() + " is plural; use Acc@K or NDCG");
    }
    if (!include_nil && r.is_nil_gold()) continue;
    out.push_back(&r);
  }
  if (out.empty()) throw InvalidArgument("no records to evaluate");
  return out;
}

void CheckPlural(std::span<const PredictionRecord> records) {
  if (records.empty()) throw InvalidArgument("no records to evaluate");
  for (const auto& r : records) {
    if (!r.is_plural()) throw InvalidArgument("record " + r.Key() + " is not plural");
  }
}

bool AtKCorrect(const PredictionRecord& r) {
  const size_t k = r.gold.size();
  if (r.ranking.size() < k) return false;
  const std::set<std::string> top(r.ranking.begin(), r.ranking.begin() + k);
  return top == std::set<std::string>(r.gold.begin(), r.gold.end());
}

}  // namespace

std::string PredictionRecord::Key() const {
  return comment_id + ":" + std::to_string(start) + "-" + std::to_string(end);
}

bool PredictionRecord::is_nil_gold() const { return gold.size() == 1 && gold[0] == kNilId; }

PredictionRecord MakeRecord(const LinkingExample& ex, std::vector<std::string> ranking) {
  PredictionRecord r;
  r.comment_id = ex.comment_id;
  r.start = ex.start;
  r.end = ex.end;
  r.ranking = std::move(ranking);
  r.gold = ex.gold.empty() ? std::vector<std::string>{std::string(kNilId)} : ex.gold;
  r.type = ex.type;
  return r;
}

double Accuracy(std::span<const PredictionRecord> records, bool include_nil) {
  const auto rs = Singular(records, include_nil);
  int correct = 0;
  for (const auto* r : rs) correct += !r->ranking.empty() && r->ranking[0] == r->gold[0];
  return static_cast<double>(correct) / rs.size();
}

double Mrr(std::span<const PredictionRecord> records, bool include_nil) {
  const auto rs = Singular(records, include_nil);
  double total = 0;
  for (const auto* r : rs) {
    auto it = std::find(r->ranking.begin(), r->ranking.end(), r->gold[0]);
    if (it != r->ranking.end()) total += 1.0 / (it - r->ranking.begin() + 1);
  }
  return total / rs.size();
}

double AccAtK(std::span<const PredictionRecord> records) {
  CheckPlural(records);
  int correct = 0;
  for (const auto& r : records) correct += AtKCorrect(r);
  return static_cast<double>(correct) / records.size();
}

double Ndcg(std::span<const PredictionRecord> records, bool truncate_at_k) {
  CheckPlural(records);
  double total = 0;
  for (const auto& r : records) {
    const std::set<std::string> gold(r.gold.begin(), r.gold.end());
    size_t n = r.ranking.size();
    if (truncate_at_k) n = std::min(n, gold.size());
    double dcg = 0;
    for (size_t i = 0; i < n; ++i) {
      if (gold.count(r.ranking[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    double idcg = 0;
    for (size_t i = 0; i < gold.size(); ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    total += dcg / idcg;
  }
  return total / records.size();
}

bool IsCorrect(const PredictionRecord& r) {
  if (r.is_plural()) return AtKCorrect(r);
  return !r.ranking.empty() && !r.gold.empty() && r.ranking[0] == r.gold[0];
}

std::map<MentionType, TypeErrors> ErrorBreakdown(std::span<const PredictionRecord> records) {
  std::map<MentionType, TypeErrors> out;
  for (MentionType t : kAllMentionTypes) out[t] = {};
  for (const auto& r : records) {
    if (!r.type) throw InvalidArgument("record " + r.Key() + " has no mention type");
    TypeErrors& e = out[*r.type];
    ++e.total;
    if (!IsCorrect(r)) ++e.errors;
  }
  return out;
}

Json ErrorBreakdownToJson(const std::map<MentionType, TypeErrors>& breakdown) {
  Json j = Json::object();
  for (const auto& [t, e] : breakdown) {
    j[std::string(MentionTypeName(t))] = {
        {"total", e.total},
        {"errors", e.errors},
        {"error_rate", e.total ? static_cast<double>(e.errors) / e.total : 0.0}};
  }
  return j;
}

std::string ErrorBreakdownTable(const std::map<MentionType, TypeErrors>& breakdown) {
  std::string out = "type        total  errors  error_rate\n";
  char buf[96];
  for (const auto& [t, e] : breakdown) {
    std::snprintf(buf, sizeof(buf), "%-10s  %5d  %6d  %10.4f\n",
                  std::string(MentionTypeName(t)).c_str(), e.total, e.errors,
                  e.total ? static_cast<double>(e.errors) / e.total : 0.0);
    out += buf;
  }
  return out;
}

double ApproxRandomization(std::span<const PredictionRecord> a,
                           std::span<const PredictionRecord> b, const Metric& metric,
                           int iterations, uint64_t seed) {
  if (a.size() != b.size()) throw InvalidArgument("systems cover different mention counts");
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].Key() != b[i].Key()) {
      throw InvalidArgument("records misaligned at " + a[i].Key() + " vs " + b[i].Key());
    }
  }
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  const double observed = std::abs(metric(a) - metric(b));
  std::vector<PredictionRecord> sa(a.begin(), a.end());
  std::vector<PredictionRecord> sb(b.begin(), b.end());
  Rng rng(seed);
  int count = 0;
  for (int it = 0; it < iterations; ++it) {
    for (size_t i = 0; i < a.size(); ++i) {
      const bool swap = rng.Bernoulli(0.5);
      sa[i].ranking = swap ? b[i].ranking : a[i].ranking;
      sb[i].ranking = swap ? a[i].ranking : b[i].ranking;
    }
    // Tolerance guards against reassociation noise on exact ties.
    if (std::abs(metric(sa) - metric(sb)) >= observed - 1e-12) ++count;
  }
  return (count + 1.0) / (iterations + 1.0);
}

std::string SerializePredictions(std::span<const PredictionRecord> records) {
  std::string out;
  for (const auto& r : records) {
    Json j = {{"comment_id", r.comment_id}, {"start", r.start}, {"end", r.end},
              {"ranking", r.ranking},       {"gold", r.gold}};
    if (r.type) j["type"] = MentionTypeName(*r.type);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<PredictionRecord> ParsePredictions(std::string_view jsonl) {
  std::vector<PredictionRecord> out;
  ForEachJsonLine(jsonl, [&](int line, const Json& j) {
    try {
      PredictionRecord r;
      r.comment_id = j.at("comment_id").get<std::string>();
      r.start = j.at("start").get<int>();
      r.end = j.at("end").get<int>();
      r.ranking = j.at("ranking").get<std::vector<std::string>>();
      r.gold = j.at("gold").get<std::vector<std::string>>();
      if (j.contains("type")) r.type = ParseMentionType(j["type"].get<std::string>());
      if (std::set<std::string>(r.ranking.begin(), r.ranking.end()).size() != r.ranking.size()) {
        throw LoadError("ranking has duplicates");
      }
      out.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw LoadError("prediction line " + std::to_string(line) + ": " + e.what());
    } catch (const Error& e) {
      throw LoadError("prediction line " + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

Json MetricReport(std::span<const PredictionRecord> records) {
  std::vector<PredictionRecord> singular, plural;
  for (const auto& r : records) (r.is_plural() ? plural : singular).push_back(r);
  Json j = Json::object();
  j["num_records"] = records.size();
  j["num_singular"] = singular.size();
  j["num_plural"] = plural.size();
  auto has_non_nil = std::any_of(singular.begin(), singular.end(),
                                 [](const PredictionRecord& r) { return !r.is_nil_gold(); });
  if (!singular.empty()) {
    j["accuracy"] = Accuracy(singular, true);
    j["mrr"] = Mrr(singular, true);
  }
  if (has_non_nil) {
    j["accuracy_no_nil"] = Accuracy(singular, false);
    j["mrr_no_nil"] = Mrr(singular, false);
  }
  if (!plural.empty()) {
    j["acc_at_k"] = AccAtK(plural);
    j["ndcg"] = Ndcg(plural);
  }
  return j;
}

std::string MetricTable(const Json& report) {
  std::string out;
  char buf[96];
  for (const char* key : {"accuracy", "mrr", "accuracy_no_nil", "mrr_no_nil", "acc_at_k", "ndcg"}) {
    if (!report.contains(key)) continue;
    std::snprintf(buf, sizeof(buf), "%-16s %.4f\n", key, report[key].get<double>());
    out += buf;
  }
  return out;
}

}  // namespace xref
