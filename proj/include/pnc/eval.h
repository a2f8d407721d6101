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


#ifndef PNC_EVAL_H_
#define PNC_EVAL_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pnc/corpus/text.h"

namespace pnc {

struct WerBreakdown {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int ref_words = 0;
  double wer = 0.0;

  int errors() const { return substitutions + deletions + insertions; }
  bool operator==(const WerBreakdown&) const = default;
};

std::vector<std::string> SplitWords(std::string_view text);

// Levenshtein alignment with unit costs. When several optimal paths exist the
// backtrace prefers substitution (or match), then insertion, then deletion.
// Throws InputError when ref is empty.
WerBreakdown Wer(std::span<const std::string> ref, std::span<const std::string> hyp);

// Same alignment but an empty reference is allowed (every hyp word is an
// insertion, wer is left at 0). Used for corpus aggregation.
WerBreakdown AlignCounts(std::span<const std::string> ref, std::span<const std::string> hyp);

// One breakdown per setting, indexed in kAllPncSettings order.
struct EvalReport {
  std::array<WerBreakdown, 4> settings{};
  int num_utterances = 0;

  const WerBreakdown& at(PncSetting s) const { return settings[static_cast<int>(s)]; }
  WerBreakdown& at(PncSetting s) { return settings[static_cast<int>(s)]; }
  bool operator==(const EvalReport&) const = default;
};

EvalReport EvaluateSettings(std::string_view ref_text, std::string_view hyp_text,
                            const TransformOptions& options = {});

// Corpus-level WER: edit counts are summed over utterances in order and the
// rate is total errors over total reference words.
EvalReport EvaluateCorpus(std::span<const std::string> refs, std::span<const std::string> hyps,
                          const TransformOptions& options = {});

struct BleuOptions {
  int max_order = 4;
  // Adds one to numerator and denominator of orders n > 1.
  bool add_one_smoothing = false;
};

struct BleuResult {
  std::vector<double> precisions;
  std::vector<long> matches;
  std::vector<long> totals;
  long hyp_length = 0;
  long ref_length = 0;
  double brevity_penalty = 1.0;
  double score = 0.0;  // 0..100

  bool operator==(const BleuResult&) const = default;
};

// Lowercases and splits every ASCII punctuation character into its own token.
std::vector<std::string> BleuTokenize(std::string_view text);

BleuResult Bleu(std::span<const std::string> refs, std::span<const std::string> hyps,
                const BleuOptions& options = {});

enum class ReportFormat { kTable, kJson };

std::string EmitReport(const EvalReport& report, ReportFormat format);
std::string EmitReport(const BleuResult& result, ReportFormat format);

// Inverses of the JSON forms; throw DataError on schema mismatches.
EvalReport ParseEvalReport(std::string_view json);
BleuResult ParseBleuReport(std::string_view json);

}  // namespace pnc

#endif  // PNC_EVAL_H_
