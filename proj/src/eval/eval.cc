// Copyright 2026 The pnclab Authors
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


#include "pnc/eval.h"

#include <cctype>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "json.hpp"
#include "pnc/error.h"

namespace pnc {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

WerBreakdown AlignCounts(std::span<const std::string> ref, std::span<const std::string> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<int> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> int& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }

  WerBreakdown out;
  out.ref_words = static_cast<int>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++out.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++out.insertions;
      --j;
    } else {
      ++out.deletions;
      --i;
    }
  }
  return out;
}

WerBreakdown Wer(std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.empty()) throw InputError("word error rate is undefined for an empty reference");
  WerBreakdown out = AlignCounts(ref, hyp);
  out.wer = static_cast<double>(out.errors()) / out.ref_words;
  return out;
}

namespace {

void Accumulate(WerBreakdown& total, const WerBreakdown& part) {
  total.substitutions += part.substitutions;
  total.deletions += part.deletions;
  total.insertions += part.insertions;
  total.ref_words += part.ref_words;
}

void FinishRates(EvalReport& report) {
  for (WerBreakdown& w : report.settings) {
    if (w.ref_words == 0) throw InputError("references contain no words");
    w.wer = static_cast<double>(w.errors()) / w.ref_words;
  }
}

}  // namespace

EvalReport EvaluateSettings(std::string_view ref_text, std::string_view hyp_text,
                            const TransformOptions& options) {
  const std::string ref(ref_text), hyp(hyp_text);
  return EvaluateCorpus(std::span<const std::string>(&ref, 1),
                        std::span<const std::string>(&hyp, 1), options);
}

EvalReport EvaluateCorpus(std::span<const std::string> refs, std::span<const std::string> hyps,
                          const TransformOptions& options) {
  if (refs.size() != hyps.size()) {
    throw InputError(fmt::format("{} references but {} hypotheses", refs.size(), hyps.size()));
  }
  if (refs.empty()) throw InputError("empty hypothesis set");
  EvalReport report;
  report.num_utterances = static_cast<int>(refs.size());
  for (std::size_t k = 0; k < refs.size(); ++k) {
    for (PncSetting s : kAllPncSettings) {
      const auto r = SplitWords(TransformText(refs[k], s, options));
      const auto h = SplitWords(TransformText(hyps[k], s, options));
      Accumulate(report.at(s), AlignCounts(r, h));
    }
  }
  FinishRates(report);
  return report;
}

std::vector<std::string> BleuTokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      flush();
      tokens.emplace_back(1, ch);
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

namespace {

using NgramCounts = std::map<std::vector<std::string>, long>;

NgramCounts CountNgrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

BleuResult Bleu(std::span<const std::string> refs, std::span<const std::string> hyps,
                const BleuOptions& options) {
  if (refs.size() != hyps.size()) {
    throw InputError(fmt::format("{} references but {} hypotheses", refs.size(), hyps.size()));
  }
  if (refs.empty()) throw InputError("empty hypothesis set");
  if (options.max_order < 1) throw InputError("max_order must be positive");
  const int orders = options.max_order;

  BleuResult out;
  out.matches.assign(orders, 0);
  out.totals.assign(orders, 0);
  for (std::size_t k = 0; k < refs.size(); ++k) {
    const auto r = BleuTokenize(refs[k]);
    const auto h = BleuTokenize(hyps[k]);
    out.ref_length += static_cast<long>(r.size());
    out.hyp_length += static_cast<long>(h.size());
    for (int n = 1; n <= orders; ++n) {
      const NgramCounts ref_counts = CountNgrams(r, n);
      for (const auto& [gram, count] : CountNgrams(h, n)) {
        out.totals[n - 1] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) out.matches[n - 1] += std::min(count, it->second);
      }
    }
  }

  out.precisions.assign(orders, 0.0);
  double log_sum = 0.0;
  bool any_zero = false;
  for (int n = 0; n < orders; ++n) {
    double num = static_cast<double>(out.matches[n]);
    double den = static_cast<double>(out.totals[n]);
    if (options.add_one_smoothing && n > 0) {
      num += 1.0;
      den += 1.0;
    }
    out.precisions[n] = den > 0.0 ? num / den : 0.0;
    if (out.precisions[n] == 0.0) {
      any_zero = true;
    } else {
      log_sum += std::log(out.precisions[n]);
    }
  }

  if (out.hyp_length == 0) {
    out.brevity_penalty = 0.0;
  } else if (out.hyp_length <= out.ref_length) {
    out.brevity_penalty =
        std::exp(1.0 - static_cast<double>(out.ref_length) / static_cast<double>(out.hyp_length));
  }
  out.score = any_zero || out.hyp_length == 0
                  ? 0.0
                  : 100.0 * out.brevity_penalty * std::exp(log_sum / orders);
  return out;
}

namespace {

constexpr const char* kWerSchema = "pnclab.wer_report.v1";
constexpr const char* kBleuSchema = "pnclab.bleu_report.v1";

template <typename T>
T Field(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw DataError(fmt::format("report is missing '{}'", key));
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("report field '{}': {}", key, e.what()));
  }
}

ordered_json ParseReportJson(std::string_view text, const char* schema) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || Field<std::string>(j, "schema") != schema) {
    throw DataError(fmt::format("report schema is not {}", schema));
  }
  return j;
}

}  // namespace

std::string EmitReport(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    ordered_json j;
    j["schema"] = kWerSchema;
    j["num_utterances"] = report.num_utterances;
    j["settings"] = ordered_json::array();
    for (PncSetting s : kAllPncSettings) {
      const WerBreakdown& w = report.at(s);
      j["settings"].push_back({{"setting", SettingName(s)},
                               {"wer", w.wer},
                               {"substitutions", w.substitutions},
                               {"deletions", w.deletions},
                               {"insertions", w.insertions},
                               {"ref_words", w.ref_words}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = fmt::format("{:<8} {:>8} {:>6} {:>6} {:>6} {:>8}\n", "setting", "WER(%)",
                                "sub", "del", "ins", "words");
  for (PncSetting s : kAllPncSettings) {
    const WerBreakdown& w = report.at(s);
    out += fmt::format("{:<8} {:>8.2f} {:>6} {:>6} {:>6} {:>8}\n", SettingName(s), 100.0 * w.wer,
                       w.substitutions, w.deletions, w.insertions, w.ref_words);
  }
  out += fmt::format("utterances: {}\n", report.num_utterances);
  return out;
}

std::string EmitReport(const BleuResult& result, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    ordered_json j;
    j["schema"] = kBleuSchema;
    j["score"] = result.score;
    j["brevity_penalty"] = result.brevity_penalty;
    j["hyp_length"] = result.hyp_length;
    j["ref_length"] = result.ref_length;
    j["precisions"] = result.precisions;
    j["matches"] = result.matches;
    j["totals"] = result.totals;
    return j.dump(2) + "\n";
  }
  std::string out = fmt::format("BLEU = {:.2f}", result.score);
  for (std::size_t n = 0; n < result.precisions.size(); ++n) {
    out += fmt::format("{}{:.1f}", n == 0 ? " " : "/", 100.0 * result.precisions[n]);
  }
  out += fmt::format(" (BP = {:.3f}, hyp_len = {}, ref_len = {})\n", result.brevity_penalty,
                     result.hyp_length, result.ref_length);
  return out;
}

EvalReport ParseEvalReport(std::string_view json) {
  const ordered_json j = ParseReportJson(json, kWerSchema);
  EvalReport report;
  report.num_utterances = Field<int>(j, "num_utterances");
  const auto rows = Field<std::vector<ordered_json>>(j, "settings");
  if (rows.size() != 4) throw DataError("report must list four settings");
  for (const ordered_json& row : rows) {
    const auto setting = ParseSetting(Field<std::string>(row, "setting"));
    if (!setting) throw DataError("unknown setting in report");
    WerBreakdown& w = report.at(*setting);
    w.wer = Field<double>(row, "wer");
    w.substitutions = Field<int>(row, "substitutions");
    w.deletions = Field<int>(row, "deletions");
    w.insertions = Field<int>(row, "insertions");
    w.ref_words = Field<int>(row, "ref_words");
  }
  return report;
}

BleuResult ParseBleuReport(std::string_view json) {
  const ordered_json j = ParseReportJson(json, kBleuSchema);
  BleuResult r;
  r.score = Field<double>(j, "score");
  r.brevity_penalty = Field<double>(j, "brevity_penalty");
  r.hyp_length = Field<long>(j, "hyp_length");
  r.ref_length = Field<long>(j, "ref_length");
  r.precisions = Field<std::vector<double>>(j, "precisions");
  r.matches = Field<std::vector<long>>(j, "matches");
  r.totals = Field<std::vector<long>>(j, "totals");
  return r;
}

}  // namespace pnc
