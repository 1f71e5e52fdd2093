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


#include "shotcap/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <utility>

#include "shotcap/error.h"
#include "shotcap/text.h"

namespace shotcap::metrics {
namespace {

std::string FormatScore(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

double ItemMax(const TokenizedCaption& candidate,
               const std::vector<TokenizedCaption>& references,
               double (*score)(const TokenizedCaption&, const TokenizedCaption&)) {
  double best = 0.0;
  for (const auto& r : references) best = std::max(best, score(candidate, r));
  return best;
}

}  // namespace

const char* TaskName(Task task) {
  return task == Task::kCaptioning ? "captioning" : "summarization";
}

Task ParseTask(std::string_view name) {
  if (name == "captioning") return Task::kCaptioning;
  if (name == "summarization") return Task::kSummarization;
  throw InvalidArgumentError("unknown task '" + std::string(name) +
                             "' (expected captioning or summarization)");
}

std::string MetricConfigDescriptor() {
  return "tokenizer=lowercase+strip(.,!?;:\"'()[]-)+whitespace;"
         "bleu=corpus,n=4,closest-ref-len,unsmoothed;"
         "rouge_l=lcs-f,beta=1.2,max-ref;"
         "meteor=exact+porter-stem,alpha=0.9,beta=3,gamma=0.5,min-chunks,max-ref;"
         "cider_d=n=1..4,sigma=6,clipped,df=ref-sets;"
         "scale=raw*100";
}

std::string MetricConfigDigest() {
  const std::string descriptor = MetricConfigDescriptor();
  return descriptor + ";fnv1a64=" + HexDigest(Fnv1a64(descriptor));
}

MetricReport ComputeReport(const std::vector<Prediction>& predictions,
                           const std::vector<ReferenceSet>& references,
                           Task task, std::string model) {
  std::map<std::string, const Prediction*> by_id;
  std::vector<std::string> duplicated;
  for (const Prediction& p : predictions) {
    if (!by_id.emplace(p.entry_id, &p).second) duplicated.push_back(p.entry_id);
  }
  std::map<std::string, const ReferenceSet*> refs_by_id;
  for (const ReferenceSet& r : references) {
    if (!refs_by_id.emplace(r.entry_id, &r).second) duplicated.push_back(r.entry_id);
  }
  std::vector<std::string> missing;
  std::vector<std::string> unexpected;
  for (const auto& [id, ref] : refs_by_id) {
    if (!by_id.count(id)) missing.push_back(id);
  }
  for (const auto& [id, pred] : by_id) {
    if (!refs_by_id.count(id)) unexpected.push_back(id);
  }
  if (!missing.empty() || !duplicated.empty() || !unexpected.empty()) {
    std::sort(duplicated.begin(), duplicated.end());
    duplicated.erase(std::unique(duplicated.begin(), duplicated.end()),
                     duplicated.end());
    throw AlignmentError(std::move(missing), std::move(duplicated),
                         std::move(unexpected));
  }

  MetricReport report;
  report.task = task;
  report.model = std::move(model);
  report.config_digest = MetricConfigDigest();

  CorpusPair corpus;
  for (const auto& [id, pred] : by_id) {
    const ReferenceSet& refs = *refs_by_id.at(id);
    if (refs.texts.empty()) {
      throw InvalidArgumentError("entry '" + id + "' has no references");
    }
    CorpusItem item;
    item.entry_id = id;
    item.candidate = NormalizeTokenize(pred->text);
    for (const std::string& text : refs.texts) {
      item.references.push_back(NormalizeTokenize(text));
    }
    corpus.items.push_back(std::move(item));
    if (!pred->error.empty()) report.failures.push_back({id, pred->error});
  }
  if (corpus.items.size() < 2) {
    throw InvalidArgumentError("a report needs at least two entries");
  }

  const std::vector<double> cider = CiderDItems(corpus);
  double rouge_sum = 0.0;
  double meteor_sum = 0.0;
  for (std::size_t i = 0; i < corpus.items.size(); ++i) {
    const CorpusItem& item = corpus.items[i];
    const double rouge = ItemMax(item.candidate, item.references, &RougeLItem);
    const double meteor = ItemMax(item.candidate, item.references, &MeteorItem);
    rouge_sum += rouge;
    meteor_sum += meteor;
    report.per_item.push_back({item.entry_id, rouge * kReportScale,
                               meteor * kReportScale, cider[i] * kReportScale});
  }
  const double n = static_cast<double>(corpus.items.size());
  double cider_sum = 0.0;
  for (double c : cider) cider_sum += c;
  report.bleu4 = Bleu4Corpus(corpus) * kReportScale;
  report.rouge_l = rouge_sum / n * kReportScale;
  report.meteor = meteor_sum / n * kReportScale;
  report.cider_d = cider_sum / n * kReportScale;
  return report;
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "structured" || name == "json") return ReportFormat::kStructured;
  if (name == "table") return ReportFormat::kTable;
  throw InvalidArgumentError("unknown report format '" + std::string(name) +
                             "' (expected structured or table)");
}

std::string RenderTable(const std::vector<MetricReport>& reports) {
  const std::vector<std::string> header = {"Model", "BLEU", "METEOR", "ROUGE",
                                           "CIDER"};
  std::vector<std::vector<std::string>> rows;
  for (const MetricReport& r : reports) {
    rows.push_back({r.model, FormatScore(r.bleu4), FormatScore(r.meteor),
                    FormatScore(r.rouge_l), FormatScore(r.cider_d)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = std::max<std::size_t>(header[c].size(), 3);
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }

  auto line = [&](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string pad(width[c] - cells[c].size(), ' ');
      out += ' ';
      out += c == 0 ? cells[c] + pad : pad + cells[c];
      out += " |";
    }
    return out + "\n";
  };

  std::string out = line(header);
  out += "|";
  for (std::size_t c = 0; c < header.size(); ++c) {
    out += c == 0 ? " :" + std::string(width[c] - 1, '-') + " |"
                  : " " + std::string(width[c] - 1, '-') + ": |";
  }
  out += "\n";
  for (const auto& row : rows) out += line(row);

  for (const MetricReport& r : reports) {
    if (r.failures.empty()) continue;
    out += "\n";
    out += reports.size() == 1 ? std::string("Failed entries: ")
                               : "Failed entries (" + r.model + "): ";
    out += std::to_string(r.failures.size()) + "\n";
  }
  return out;
}

Json ReportToJson(const MetricReport& report) {
  Json json = Json::object();
  json["task"] = TaskName(report.task);
  json["model"] = report.model;
  json["scale"] = "raw*100";
  json["scores"] = {{"bleu4", report.bleu4},
                    {"meteor", report.meteor},
                    {"rouge_l", report.rouge_l},
                    {"cider_d", report.cider_d}};
  Json items = Json::array();
  for (const ItemScore& item : report.per_item) {
    items.push_back({{"entry_id", item.entry_id},
                     {"rouge_l", item.rouge_l},
                     {"meteor", item.meteor},
                     {"cider_d", item.cider_d}});
  }
  json["per_item"] = std::move(items);
  Json failures = Json::array();
  for (const EntryFailure& f : report.failures) {
    failures.push_back({{"entry_id", f.entry_id}, {"reason", f.reason}});
  }
  json["failures"] = std::move(failures);
  json["config_digest"] = report.config_digest;
  json["metadata"] = report.metadata;
  return json;
}

MetricReport ReportFromJson(const Json& json) {
  constexpr std::string_view kContext = "report";
  if (!json.is_object()) throw ParseError("report must be an object");
  MetricReport report;
  report.task = ParseTask(RequireString(json, "task", kContext));
  OptionalString(json, "model", kContext, &report.model);
  const auto scores = json.find("scores");
  if (scores == json.end() || !scores->is_object()) {
    throw ParseError("report is missing the 'scores' object");
  }
  report.bleu4 = RequireNumber(*scores, "bleu4", "report scores");
  report.meteor = RequireNumber(*scores, "meteor", "report scores");
  report.rouge_l = RequireNumber(*scores, "rouge_l", "report scores");
  report.cider_d = RequireNumber(*scores, "cider_d", "report scores");
  if (auto it = json.find("per_item"); it != json.end()) {
    if (!it->is_array()) throw ParseError("report 'per_item' must be an array");
    for (const Json& item : *it) {
      report.per_item.push_back({RequireString(item, "entry_id", "per_item"),
                                 RequireNumber(item, "rouge_l", "per_item"),
                                 RequireNumber(item, "meteor", "per_item"),
                                 RequireNumber(item, "cider_d", "per_item")});
    }
  }
  if (auto it = json.find("failures"); it != json.end()) {
    if (!it->is_array()) throw ParseError("report 'failures' must be an array");
    for (const Json& f : *it) {
      report.failures.push_back({RequireString(f, "entry_id", "failures"),
                                 RequireString(f, "reason", "failures")});
    }
  }
  OptionalString(json, "config_digest", kContext, &report.config_digest);
  if (auto it = json.find("metadata"); it != json.end() && !it->is_null()) {
    report.metadata = *it;
  }
  return report;
}

MetricReport ParseReport(std::string_view text, std::string_view source) {
  return ReportFromJson(ParseJsonDocument(text, source));
}

std::string EmitReport(const MetricReport& report, ReportFormat format) {
  if (format == ReportFormat::kTable) return RenderTable({report});
  return ReportToJson(report).dump(2) + "\n";
}

}  // namespace shotcap::metrics
