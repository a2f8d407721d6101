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


#ifndef PNC_APP_PIPELINE_H_
#define PNC_APP_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pnc/app/run_config.h"
#include "pnc/corpus/vocabulary.h"
#include "pnc/decode.h"
#include "pnc/eval.h"
#include "pnc/model/trainer.h"

namespace pnc {

struct LoadedSplit {
  std::vector<SegmentRecord> records;
  std::vector<TrainingExample> examples;  // aligned with records
};

Vocabulary ReadVocabulary(const std::filesystem::path& path);

// Reads a manifest and the feature files it references. Targets are encoded
// with vocab when with_targets is set.
LoadedSplit LoadSplit(const std::filesystem::path& manifest, const Vocabulary& vocab,
                      int feature_dim, bool with_targets = true);
LoadedSplit SplitFromSynthetic(const SyntheticSplit& split);

enum class DecoderKind { kCtc, kTdt };

struct DecodeOptions {
  DecoderKind decoder = DecoderKind::kTdt;
  // Decode with the duration head replaced by a single duration of 1.
  bool unit_durations = false;
  int max_tokens_per_frame = 10;
};

std::vector<Hypothesis> DecodeExamples(const Parameters& params, const ModelConfig& config,
                                       std::span<const TrainingExample> examples,
                                       const DecodeOptions& options);

// Writes out_dir/config.json, out_dir/train_log.jsonl and out_dir/model.ckpt
// (plus step-<n>.ckpt every checkpoint_every steps).
Parameters TrainRun(const RunConfig& config, const std::filesystem::path& data_dir,
                    const std::filesystem::path& out_dir, std::ostream* progress);

// In-memory training on an already loaded split.
Parameters TrainOnSplit(const RunConfig& config, const LoadedSplit& split,
                        const std::function<void(const StepStats&)>& on_step = {});

// Hypotheses go to out as JSON lines; out.effort.json and out.config.json
// sit next to it.
DecodeEffort DecodeRun(const std::filesystem::path& checkpoint,
                       const std::filesystem::path& manifest, const DecodeOptions& options,
                       const std::filesystem::path& out);

enum class ScoreMode { kWer4, kBleu };

// Matches hypotheses to references by segment_id, writes the structured
// report to out (and out.config.json), and returns the table form.
std::string ScoreRun(const std::filesystem::path& ref_manifest,
                     const std::filesystem::path& hyp_file, ScoreMode mode,
                     const std::filesystem::path& out);

// Reference and hypothesis text pairs in manifest order.
struct TextPairs {
  std::vector<std::string> refs;
  std::vector<std::string> hyps;
};
TextPairs PairWithReferences(std::span<const SegmentRecord> refs,
                             const std::filesystem::path& hyp_file);

std::string FormatHypothesisLine(const SegmentRecord& record, const std::string& text,
                                 const Hypothesis& hyp);

}  // namespace pnc

#endif  // PNC_APP_PIPELINE_H_
