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

#ifndef PNC_CORPUS_SYNTHETIC_H_
#define PNC_CORPUS_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pnc/corpus/features.h"
#include "pnc/corpus/manifest.h"
#include "pnc/corpus/segments.h"
#include "pnc/corpus/vocabulary.h"

namespace pnc {

enum class SegmentationMode {
  kComplete,  // cut only at sentence boundaries
  kPartial,   // cut at arbitrary word boundaries
};

// Generator for a cased, punctuated toy corpus with synthetic feature frames.
// Each token is a prototype vector plus Gaussian noise held for r encoder
// frames, r uniform in [min_frames_per_token, max_frames_per_token]. Lengths
// are drawn in input frames, so r need not be a whole number.
struct SyntheticConfig {
  std::uint64_t seed = 1;
  int num_train_documents = 150;
  int num_test_documents = 25;
  int min_sentences_per_document = 4;
  int max_sentences_per_document = 10;
  int min_words_per_sentence = 3;
  int max_words_per_sentence = 7;
  double comma_probability = 0.15;
  double question_probability = 0.25;
  double exclamation_probability = 0.15;
  int min_frames_per_token = 2;
  int max_frames_per_token = 5;
  int subsample_factor = 8;
  int feature_dim = 8;
  double noise_sigma = 0.3;
  double frame_shift_sec = 0.01;
  SegmentationMode mode = SegmentationMode::kComplete;
  // Segment lengths are drawn uniformly from [min_segment_sec, top of the
  // highest window).
  std::vector<DurationWindow> windows = {{0.0, 3.0}, {3.0, 6.0}};
  double min_segment_sec = 1.0;
  // A segment's first word is heard without left context: it is rendered
  // from a per-word onset prototype that is the same for both casings.
  // Everywhere else each token has its own prototype.
  bool onset_hides_case = true;

  void Validate() const;
};

struct SyntheticSplit {
  std::vector<SegmentRecord> records;
  std::vector<FeatureMatrix> features;      // aligned with records
  std::vector<std::vector<int>> tokens;     // aligned with records
  std::vector<std::vector<int>> token_frames;  // input frames per token
};

struct SyntheticCorpus {
  Vocabulary vocab;
  // One prototype per acoustic class, feature_dim values each.
  std::vector<std::vector<float>> prototypes;
  std::vector<int> prototype_of_token;
  // Prototype used when the token opens a segment (words only; -1 for
  // punctuation). Equal to prototype_of_token when onsets do not hide case.
  std::vector<int> onset_prototype_of_token;
  SyntheticSplit train;
  SyntheticSplit test;  // always complete-sentence segments
};

Vocabulary SyntheticVocabulary();

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config);

// Writes vocab.json, {train,test}/manifest.jsonl and
// {train,test}/features/<segment_id>.feat under out_dir.
void WriteSyntheticCorpus(const SyntheticCorpus& corpus,
                          const std::filesystem::path& out_dir);

}  // namespace pnc

#endif  // PNC_CORPUS_SYNTHETIC_H_
