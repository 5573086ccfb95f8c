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

#ifndef XREF_EVAL_H_
#define XREF_EVAL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xref/corpus.h"
#include "xref/io.h"
#include "xref/model.h"

namespace xref {

// A NIL gold is written as the single id "NIL".
struct PredictionRecord {
  std::string comment_id;
  int start = 0;
  int end = 0;
  std::vector<std::string> ranking;
  std::vector<std::string> gold;
  std::optional<MentionType> type;

  std::string Key() const;
  bool is_plural() const { return gold.size() >= 2; }
  bool is_nil_gold() const;
};

PredictionRecord MakeRecord(const LinkingExample& ex, std::vector<std::string> ranking);

// Singular records only; include_nil = false drops NIL-gold records. An
// empty record set or a plural record raises InvalidArgument.
double Accuracy(std::span<const PredictionRecord> records, bool include_nil);
// Mean 1/rank of the gold id, 0 when it is not ranked.
double Mrr(std::span<const PredictionRecord> records, bool include_nil);

// Plural records only: top-K set equals the gold set, K = |gold|.
double AccAtK(std::span<const PredictionRecord> records);
// Binary gains over the ranking (cut at K when truncate_at_k), ideal DCG
// over K = |gold| positions.
double Ndcg(std::span<const PredictionRecord> records, bool truncate_at_k = false);

// Rank-1 correctness for singular records, Acc@K correctness for plural.
bool IsCorrect(const PredictionRecord& r);

struct TypeErrors {
  int total = 0;
  int errors = 0;
};

// Per mention type; every record must carry a type.
std::map<MentionType, TypeErrors> ErrorBreakdown(std::span<const PredictionRecord> records);
Json ErrorBreakdownToJson(const std::map<MentionType, TypeErrors>& breakdown);
std::string ErrorBreakdownTable(const std::map<MentionType, TypeErrors>& breakdown);

using Metric = std::function<double(std::span<const PredictionRecord>)>;

// Paired approximate randomization: p = (count + 1) / (R + 1), where count
// is the number of shuffles whose |delta| reaches the observed |delta|.
double ApproxRandomization(std::span<const PredictionRecord> a,
                           std::span<const PredictionRecord> b, const Metric& metric,
                           int iterations, uint64_t seed);

std::string SerializePredictions(std::span<const PredictionRecord> records);
std::vector<PredictionRecord> ParsePredictions(std::string_view jsonl);

// Accuracy/MRR with and without NIL over singular records, Acc@K and NDCG
// over plural ones; a metric with no eligible records is omitted.
Json MetricReport(std::span<const PredictionRecord> records);
std::string MetricTable(const Json& report);

}  // namespace xref

#endif  // XREF_EVAL_H_
