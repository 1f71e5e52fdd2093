// Copyright 2026 The Shotcap Authors.
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


#ifndef SHOTCAP_REPORT_H_
#define SHOTCAP_REPORT_H_

#include <string>
#include <string_view>
#include <vector>

#include "shotcap/json_lines.h"
#include "shotcap/metrics.h"

namespace shotcap::metrics {

enum class Task { kCaptioning, kSummarization };

const char* TaskName(Task task);
Task ParseTask(std::string_view name);

// One model output. A non-empty `error` marks an entry the backend failed
// on; its text is scored as written (normally empty).
struct Prediction {
  std::string entry_id;
  std::string text;
  std::string error;

  bool operator==(const Prediction&) const = default;
};

struct ReferenceSet {
  std::string entry_id;
  std::vector<std::string> texts;
};

struct ItemScore {
  std::string entry_id;
  double rouge_l = 0.0;
  double meteor = 0.0;
  double cider_d = 0.0;
  bool operator==(const ItemScore&) const = default;
};

struct EntryFailure {
  std::string entry_id;
  std::string reason;
  bool operator==(const EntryFailure&) const = default;
};

// All scores, including per-item ones, are raw values times 100.
struct MetricReport {
  Task task = Task::kCaptioning;
  std::string model;
  double bleu4 = 0.0;
  double meteor = 0.0;
  double rouge_l = 0.0;
  double cider_d = 0.0;
  std::vector<ItemScore> per_item;
  std::vector<EntryFailure> failures;
  std::string config_digest;
  Json metadata = Json::object();

  bool operator==(const MetricReport&) const = default;
};

inline constexpr double kReportScale = 100.0;

// Describes tokenizer, metric variants and the reporting scale.
std::string MetricConfigDescriptor();
std::string MetricConfigDigest();

// Pairs predictions with references by entry id and scores the corpus in
// entry-id order. Throws AlignmentError on missing, duplicated or unexpected
// ids, InvalidArgumentError on fewer than two items.
MetricReport ComputeReport(const std::vector<Prediction>& predictions,
                           const std::vector<ReferenceSet>& references,
                           Task task, std::string model = "model");

enum class ReportFormat { kStructured, kTable };

ReportFormat ParseReportFormat(std::string_view name);

std::string EmitReport(const MetricReport& report, ReportFormat format);
// One table row per report, in the given order.
std::string RenderTable(const std::vector<MetricReport>& reports);

Json ReportToJson(const MetricReport& report);
MetricReport ReportFromJson(const Json& json);
MetricReport ParseReport(std::string_view text, std::string_view source);

}  // namespace shotcap::metrics

#endif  // SHOTCAP_REPORT_H_
