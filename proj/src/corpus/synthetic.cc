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

#include "pnc/corpus/synthetic.h"

#include <algorithm>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "json.hpp"
#include "pnc/error.h"

namespace pnc {
namespace {

const char* const kWords[] = {"the", "cat", "sat", "on",  "mat", "dog",
                              "ran", "to",  "park", "we", "saw", "a",
                              "big", "red", "ball", "it", "was", "fun"};
constexpr int kNumWords = sizeof(kWords) / sizeof(kWords[0]);
const char* const kPunctuation[] = {".", ",", "?", "!"};
constexpr int kNumPunctuation = 4;

// Token id layout: [0, kNumWords) lowercase, [kNumWords, 2 kNumWords)
// capitalised, then punctuation.
int LowerId(int word) { return word; }
int UpperId(int word) { return kNumWords + word; }
int PunctId(int p) { return 2 * kNumWords + p; }
constexpr int kPeriod = 0, kComma = 1, kQuestion = 2, kExclamation = 3;

// A word with any punctuation glued to it; the unit partial segmentation
// cuts between.
struct WordGroup {
  int first_token = 0;
  int num_tokens = 0;
  bool ends_sentence = false;
};

struct Document {
  std::vector<int> tokens;
  std::vector<int> frames;  // input frames per token
  std::vector<WordGroup> groups;
  std::vector<double> noise;  // frames x feature_dim
};

Document MakeDocument(const SyntheticConfig& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num_sentences(c.min_sentences_per_document,
                                                   c.max_sentences_per_document);
  std::uniform_int_distribution<int> num_words(c.min_words_per_sentence,
                                               c.max_words_per_sentence);
  // Adjacent words in a sentence always differ: identical neighbours would
  // give one unbroken run of the same prototype.
  std::uniform_int_distribution<int> pick_first(0, kNumWords - 1);
  std::uniform_int_distribution<int> pick_next(0, kNumWords - 2);
  // Token lengths are counted in encoder frames but drawn on the input grid,
  // so token edges rarely line up with subsampling windows.
  std::uniform_int_distribution<int> pick_frames(c.min_frames_per_token * c.subsample_factor,
                                                 c.max_frames_per_token * c.subsample_factor);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  Document doc;
  const int sentences = num_sentences(rng);
  for (int s = 0; s < sentences; ++s) {
    const int words = num_words(rng);
    int previous = -1;
    for (int w = 0; w < words; ++w) {
      WordGroup g;
      g.first_token = static_cast<int>(doc.tokens.size());
      int word = previous < 0 ? pick_first(rng) : pick_next(rng);
      if (previous >= 0 && word >= previous) ++word;
      previous = word;
      doc.tokens.push_back(w == 0 ? UpperId(word) : LowerId(word));
      if (w + 1 < words) {
        if (unit(rng) < c.comma_probability) doc.tokens.push_back(PunctId(kComma));
      } else {
        const double u = unit(rng);
        int end = kPeriod;
        if (u < c.question_probability) {
          end = kQuestion;
        } else if (u < c.question_probability + c.exclamation_probability) {
          end = kExclamation;
        }
        doc.tokens.push_back(PunctId(end));
        g.ends_sentence = true;
      }
      g.num_tokens = static_cast<int>(doc.tokens.size()) - g.first_token;
      doc.groups.push_back(g);
    }
  }

  for (std::size_t k = 0; k < doc.tokens.size(); ++k) {
    const int frames = pick_frames(rng);
    doc.frames.push_back(frames);
    for (int i = 0; i < frames * c.feature_dim; ++i) {
      doc.noise.push_back(c.noise_sigma > 0.0 ? c.noise_sigma * noise(rng) : 0.0);
    }
  }
  return doc;
}

// Splits a document into [first_group, end_group) ranges.
std::vector<std::pair<int, int>> Segment(const SyntheticConfig& c, const Document& doc,
                                         SegmentationMode mode, std::mt19937_64& rng) {
  double max_seg = 0.0;
  for (const DurationWindow& w : c.windows) max_seg = std::max(max_seg, w.hi_sec);
  // Stay strictly inside the top window.
  max_seg -= c.frame_shift_sec * c.subsample_factor;
  std::uniform_real_distribution<double> pick_len(c.min_segment_sec,
                                                  std::max(c.min_segment_sec, max_seg));

  auto group_seconds = [&](int g) {
    int frames = 0;
    const WordGroup& wg = doc.groups[g];
    for (int k = 0; k < wg.num_tokens; ++k) frames += doc.frames[wg.first_token + k];
    return frames * c.frame_shift_sec;
  };

  // Units are sentences (complete mode) or word groups (partial mode).
  std::vector<std::pair<int, int>> units;
  if (mode == SegmentationMode::kComplete) {
    int start = 0;
    for (int g = 0; g < static_cast<int>(doc.groups.size()); ++g) {
      if (doc.groups[g].ends_sentence) {
        units.emplace_back(start, g + 1);
        start = g + 1;
      }
    }
  } else {
    for (int g = 0; g < static_cast<int>(doc.groups.size()); ++g) units.emplace_back(g, g + 1);
  }

  std::vector<std::pair<int, int>> segments;
  std::size_t u = 0;
  while (u < units.size()) {
    const double target = pick_len(rng);
    const int first = units[u].first;
    double total = 0.0;
    int end = first;
    do {
      double unit_sec = 0.0;
      for (int g = units[u].first; g < units[u].second; ++g) unit_sec += group_seconds(g);
      if (end != first && total + unit_sec > target) break;
      total += unit_sec;
      end = units[u].second;
      ++u;
    } while (u < units.size());
    segments.emplace_back(first, end);
  }
  return segments;
}

void AppendDocument(const SyntheticConfig& c, const SyntheticCorpus& corpus,
                    const std::string& utterance_id, const Document& doc,
                    SegmentationMode mode, std::mt19937_64& seg_rng, SyntheticSplit& out) {
  // Frame offset of every token.
  std::vector<int> offset(doc.tokens.size() + 1, 0);
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) offset[i + 1] = offset[i] + doc.frames[i];

  int index = 0;
  for (auto [first_group, end_group] : Segment(c, doc, mode, seg_rng)) {
    const int tok_begin = doc.groups[first_group].first_token;
    const WordGroup& last = doc.groups[end_group - 1];
    const int tok_end = last.first_token + last.num_tokens;

    std::vector<int> tokens(doc.tokens.begin() + tok_begin, doc.tokens.begin() + tok_end);
    std::vector<int> frames(doc.frames.begin() + tok_begin, doc.frames.begin() + tok_end);
    FeatureMatrix m;
    m.dim = c.feature_dim;
    m.num_frames = offset[tok_end] - offset[tok_begin];
    m.values.reserve(static_cast<std::size_t>(m.num_frames) * c.feature_dim);
    for (int k = tok_begin; k < tok_end; ++k) {
      const int proto = k == tok_begin ? corpus.onset_prototype_of_token[doc.tokens[k]]
                                       : corpus.prototype_of_token[doc.tokens[k]];
      const std::vector<float>& p = corpus.prototypes[proto];
      const double* n = doc.noise.data() + static_cast<std::ptrdiff_t>(offset[k]) * c.feature_dim;
      for (int f = 0; f < doc.frames[k]; ++f) {
        for (int d = 0; d < c.feature_dim; ++d) {
          m.values.push_back(static_cast<float>(p[d] + n[f * c.feature_dim + d]));
        }
      }
    }

    SegmentRecord r;
    r.utterance_id = utterance_id;
    r.segment_index = index++;
    r.segment_id = fmt::format("{}-{:04d}", utterance_id, r.segment_index);
    r.duration_sec = m.num_frames * c.frame_shift_sec;
    r.text = corpus.vocab.Decode(tokens);
    r.feature_ref = "features/" + r.segment_id + ".feat";

    out.records.push_back(std::move(r));
    out.features.push_back(std::move(m));
    out.tokens.push_back(std::move(tokens));
    out.token_frames.push_back(std::move(frames));
  }
}

}  // namespace

void SyntheticConfig::Validate() const {
  if (num_train_documents < 0 || num_test_documents < 0) {
    throw InputError("document counts must be non-negative");
  }
  if (min_sentences_per_document < 1 ||
      max_sentences_per_document < min_sentences_per_document) {
    throw InputError("bad sentences-per-document range");
  }
  if (min_words_per_sentence < 1 || max_words_per_sentence < min_words_per_sentence) {
    throw InputError("bad words-per-sentence range");
  }
  if (min_frames_per_token < 1 || max_frames_per_token < min_frames_per_token) {
    throw InputError("bad frames-per-token range");
  }
  if (subsample_factor < 1 || feature_dim < 1) {
    throw InputError("subsample factor and feature dim must be >= 1");
  }
  if (noise_sigma < 0.0 || frame_shift_sec <= 0.0) {
    throw InputError("noise must be >= 0 and frame shift > 0");
  }
  if (question_probability + exclamation_probability > 1.0) {
    throw InputError("terminal punctuation probabilities exceed 1");
  }
  if (windows.empty()) throw InputError("at least one duration window is required");
  ValidateWindows(windows);
}

Vocabulary SyntheticVocabulary() {
  std::vector<std::string> tokens;
  for (const char* w : kWords) tokens.emplace_back(w);
  for (const char* w : kWords) {
    std::string upper(w);
    upper[0] = static_cast<char>(upper[0] - 'a' + 'A');
    tokens.push_back(upper);
  }
  for (const char* p : kPunctuation) tokens.emplace_back(p);
  return Vocabulary(std::move(tokens));
}

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config) {
  config.Validate();
  SyntheticCorpus corpus;
  corpus.vocab = SyntheticVocabulary();

  // Classes: one per token, then one onset form per word.
  const int num_tokens = corpus.vocab.size();
  const int num_classes = num_tokens + (config.onset_hides_case ? kNumWords : 0);
  std::mt19937_64 proto_rng(config.seed ^ 0x5bd1e9955bd1e995ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < num_classes; ++k) {
    std::vector<float> p(config.feature_dim);
    for (float& v : p) v = static_cast<float>(normal(proto_rng));
    corpus.prototypes.push_back(std::move(p));
  }
  for (int t = 0; t < num_tokens; ++t) {
    corpus.prototype_of_token.push_back(t);
    const bool word = t < PunctId(0);
    const int onset = config.onset_hides_case ? num_tokens + t % kNumWords : t;
    corpus.onset_prototype_of_token.push_back(word ? onset : -1);
  }

  // Content and segmentation draw from separate streams so both modes see
  // the same documents.
  std::mt19937_64 content_rng(config.seed);
  std::mt19937_64 seg_rng(config.seed * 0x9E3779B97F4A7C15ULL + 1);
  for (int d = 0; d < config.num_train_documents; ++d) {
    const Document doc = MakeDocument(config, content_rng);
    AppendDocument(config, corpus, fmt::format("synth-train-{:04d}", d), doc, config.mode,
                   seg_rng, corpus.train);
  }
  std::mt19937_64 test_content_rng(config.seed ^ 0xA5A5A5A5DEADBEEFULL);
  std::mt19937_64 test_seg_rng(config.seed ^ 0x0123456789ABCDEFULL);
  for (int d = 0; d < config.num_test_documents; ++d) {
    const Document doc = MakeDocument(config, test_content_rng);
    AppendDocument(config, corpus, fmt::format("synth-test-{:04d}", d), doc,
                   SegmentationMode::kComplete, test_seg_rng, corpus.test);
  }
  return corpus;
}

void WriteSyntheticCorpus(const SyntheticCorpus& corpus,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    nlohmann::ordered_json v;
    v["schema"] = "pnclab.vocab.v1";
    v["tokens"] = corpus.vocab.tokens();
    std::ofstream out(out_dir / "vocab.json", std::ios::binary);
    if (!out) throw DataError("cannot write " + (out_dir / "vocab.json").string());
    out << v.dump(2) << '\n';
  }
  for (const auto& [name, split] :
       {std::pair<const char*, const SyntheticSplit*>{"train", &corpus.train},
        std::pair<const char*, const SyntheticSplit*>{"test", &corpus.test}}) {
    const std::filesystem::path dir = out_dir / name;
    WriteManifest(dir / "manifest.jsonl", split->records);
    for (std::size_t i = 0; i < split->records.size(); ++i) {
      WriteFeatureFile(dir / *split->records[i].feature_ref, split->features[i]);
    }
  }
}

}  // namespace pnc
