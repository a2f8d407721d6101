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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "pnc/corpus/chunking.h"
#include "pnc/corpus/features.h"
#include "pnc/corpus/manifest.h"
#include "pnc/corpus/segments.h"
#include "pnc/corpus/synthetic.h"
#include "pnc/corpus/text.h"
#include "pnc/corpus/vocabulary.h"
#include "pnc/error.h"

namespace pnc {
namespace {

namespace fs = std::filesystem;

SegmentRecord Seg(const std::string& utt, int index, double dur, const std::string& text) {
  SegmentRecord r;
  r.utterance_id = utt;
  r.segment_index = index;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  r.segment_id = utt + "-" + buf;
  r.duration_sec = dur;
  r.text = text;
  return r;
}

fs::path TempDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("pnclab_corpus_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// ---------------------------------------------------------------- manifest

TEST(ManifestTest, LineRoundTrip) {
  SegmentRecord r = Seg("102-129232", 76, 12.5, "Hello, \"world\".");
  r.feature_ref = "features/a.feat";
  const std::string line = FormatManifestLine(r);
  EXPECT_EQ(line,
            "{\"utterance_id\":\"102-129232\",\"segment_index\":76,\"segment_id\":"
            "\"102-129232-0076\",\"duration_sec\":12.5,\"text\":\"Hello, \\\"world\\\".\","
            "\"feature_ref\":\"features/a.feat\"}");
  EXPECT_EQ(ParseManifestLine(line), r);
}

TEST(ManifestTest, ReadRejectsBadRecords) {
  const fs::path dir = TempDir("manifest");
  auto write = [&](const std::string& body) {
    std::ofstream(dir / "m.jsonl") << body;
    return dir / "m.jsonl";
  };
  EXPECT_THROW(ReadManifest(dir / "missing.jsonl"), DataError);
  EXPECT_THROW(ReadManifest(write("{\"utterance_id\":\"u\"}\n")), DataError);
  EXPECT_THROW(ReadManifest(write("not json\n")), DataError);
  const std::string a = FormatManifestLine(Seg("u", 1, 1.0, "A."));
  EXPECT_THROW(ReadManifest(write(a + "\n" + a + "\n")), DataError);
  EXPECT_THROW(ReadManifest(write(FormatManifestLine(Seg("u", 1, -1.0, "A.")) + "\n")),
               DataError);
  const std::string b = FormatManifestLine(Seg("u", 2, 1.0, "B."));
  EXPECT_EQ(ReadManifest(write(a + "\n\n" + b + "\n")).size(), 2u);
}

TEST(FeatureFileTest, RoundTripAndLayout) {
  const fs::path dir = TempDir("features");
  FeatureMatrix m{2, 3, {1.0f, -2.5f, 0.0f, 3.25f, 1e-3f, 7.0f}};
  WriteFeatureFile(dir / "x.feat", m);
  EXPECT_EQ(fs::file_size(dir / "x.feat"), 8u + 6u * 4u);
  std::ifstream in(dir / "x.feat", std::ios::binary);
  unsigned char header[8];
  in.read(reinterpret_cast<char*>(header), 8);
  EXPECT_EQ(header[0], 2);
  EXPECT_EQ(header[4], 3);
  EXPECT_EQ(ReadFeatureFile(dir / "x.feat"), m);

  std::ofstream(dir / "bad.feat", std::ios::binary) << "abcdefghij";
  EXPECT_THROW(ReadFeatureFile(dir / "bad.feat"), DataError);
}

// -------------------------------------------------------------- transforms

TEST(TransformTest, FourSettings) {
  EXPECT_EQ(TransformText("Hello, world.", PncSetting::kPnc), "Hello, world.");
  EXPECT_EQ(TransformText("Hello, world.", PncSetting::kOnlyCap), "Hello world");
  EXPECT_EQ(TransformText("Hello, world.", PncSetting::kOnlyPun), "hello, world.");
  EXPECT_EQ(TransformText("Hello, world.", PncSetting::kNoPnc), "hello world");
  EXPECT_EQ(TransformText("  a \t b  ", PncSetting::kPnc), "a b");
  EXPECT_EQ(TransformText("Tom , \"yes\" !", PncSetting::kOnlyCap), "Tom yes");
}

TEST(TransformTest, PlainTextIsFixedPoint) {
  for (PncSetting s : kAllPncSettings) {
    EXPECT_EQ(TransformText("the cat sat on the mat", s), "the cat sat on the mat");
  }
}

TEST(TransformTest, IdempotentAndComposable) {
  std::mt19937_64 rng(2024);
  const std::string alphabet = "aBcDeZ .,!?;:\"'\t\n-x7";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> length(0, 40);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
    for (PncSetting setting : kAllPncSettings) {
      const std::string once = TransformText(s, setting);
      EXPECT_EQ(TransformText(once, setting), once) << s;
    }
    const std::string no_pnc = TransformText(s, PncSetting::kNoPnc);
    EXPECT_EQ(TransformText(TransformText(s, PncSetting::kOnlyPun), PncSetting::kOnlyCap),
              no_pnc);
    EXPECT_EQ(TransformText(TransformText(s, PncSetting::kOnlyCap), PncSetting::kOnlyPun),
              no_pnc);
  }
}

TEST(TransformTest, SettingNames) {
  for (PncSetting s : kAllPncSettings) EXPECT_EQ(ParseSetting(SettingName(s)), s);
  EXPECT_FALSE(ParseSetting("Bogus").has_value());
}

TEST(CompletenessTest, Predicate) {
  EXPECT_TRUE(IsCompleteSentence("Hello there."));
  EXPECT_TRUE(IsCompleteSentence("\"Why not?\" she asked!  "));
  EXPECT_TRUE(IsCompleteSentence("42 Men went home."));
  EXPECT_FALSE(IsCompleteSentence("hello there."));
  EXPECT_FALSE(IsCompleteSentence("Hello there,"));
  EXPECT_FALSE(IsCompleteSentence("Hello there.\""));
  EXPECT_FALSE(IsCompleteSentence("..."));
  EXPECT_FALSE(IsCompleteSentence(""));
}

// --------------------------------------------------------------- sentences

TEST(CompleteSentencesTest, LibriSpeechPcExample) {
  const std::string first =
      "What appears once in the atmosphere may appear often, and it was undoubtedly "
      "the archetype of that familiar ornament. I have seen in the sky a chain of "
      "summer lightning,";
  const std::string second =
      "which at once showed to me that the Greeks drew from nature when they painted "
      "the thunderbolt in the hand of Jove.";
  const std::vector<SegmentRecord> in = {Seg("102-129232", 76, 14.2, first),
                                         Seg("102-129232", 77, 6.3, second)};
  const SentenceCompletion out = CompleteSentences(in);
  ASSERT_EQ(out.merged.size(), 1u);
  EXPECT_TRUE(out.dropped.empty());
  const SegmentRecord& r = out.merged[0].record;
  EXPECT_EQ(r.segment_id, "102-129232-0076_0077");
  EXPECT_EQ(r.text,
            "What appears once in the atmosphere may appear often, and it was undoubtedly "
            "the archetype of that familiar ornament. I have seen in the sky a chain of "
            "summer lightning, which at once showed to me that the Greeks drew from "
            "nature when they painted the thunderbolt in the hand of Jove.");
  EXPECT_NEAR(r.duration_sec, 20.5, 1e-12);
  EXPECT_EQ(out.merged[0].member_ids,
            (std::vector<std::string>{"102-129232-0076", "102-129232-0077"}));
}

TEST(CompleteSentencesTest, CompleteSegmentPassesThrough) {
  const std::vector<SegmentRecord> in = {Seg("u", 3, 1.5, "Hello there.")};
  const SentenceCompletion out = CompleteSentences(in);
  ASSERT_EQ(out.merged.size(), 1u);
  EXPECT_EQ(out.merged[0].record, in[0]);
}

TEST(CompleteSentencesTest, TrailingRemainderIsDropped) {
  const std::vector<SegmentRecord> in = {Seg("u", 1, 2.0, "The quick"),
                                         Seg("u", 2, 3.0, "brown fox ran."),
                                         Seg("u", 3, 1.0, "And then it")};
  const SentenceCompletion out = CompleteSentences(in);
  ASSERT_EQ(out.merged.size(), 1u);
  EXPECT_EQ(out.merged[0].record.segment_id, "u-0001_0002");
  EXPECT_EQ(out.merged[0].record.text, "The quick brown fox ran.");
  EXPECT_DOUBLE_EQ(out.merged[0].record.duration_sec, 5.0);
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].segment_id, "u-0003");
}

TEST(CompleteSentencesTest, GapsAndMidSentenceStarts) {
  const std::vector<SegmentRecord> in = {
      Seg("a", 1, 1.0, "One two"), Seg("a", 3, 1.0, "three four."),  // gap
      Seg("a", 4, 1.0, "Five six."),  Seg("b", 0, 1.0, "and so on"),
      Seg("b", 1, 1.0, "It ends.")};
  const SentenceCompletion out = CompleteSentences(in);
  ASSERT_EQ(out.merged.size(), 2u);
  EXPECT_EQ(out.merged[0].record.segment_id, "a-0004");
  EXPECT_EQ(out.merged[1].record.segment_id, "b-0001");
  EXPECT_EQ(out.dropped.size(), 3u);
}

TEST(CompleteSentencesTest, PropertiesOnRandomStreams) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> pieces = {"The dog", "ran home.", "and", "Is it?",
                                           "so it was,", "Yes!", "well then", "\"Quote\" ends."};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_real_distribution<double> dur(0.5, 9.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SegmentRecord> in;
    double total_in = 0.0;
    for (int u = 0; u < 3; ++u) {
      for (int i = 0; i < 6; ++i) {
        in.push_back(Seg("utt" + std::to_string(u), i, dur(rng), pieces[pick(rng)]));
        total_in += in.back().duration_sec;
      }
    }
    const SentenceCompletion out = CompleteSentences(in);
    double total_out = 0.0;
    std::size_t members = 0;
    for (const MergedRecord& m : out.merged) {
      EXPECT_TRUE(IsCompleteSentence(m.record.text)) << m.record.text;
      total_out += m.record.duration_sec;
      members += m.member_ids.size();
    }
    EXPECT_LE(total_out, total_in + 1e-9);
    EXPECT_EQ(members + out.dropped.size(), in.size());
  }
}

// ---------------------------------------------------------------- bucketing

TEST(BucketTest, HandComputedStats) {
  const std::vector<SegmentRecord> in = {Seg("u", 0, 5.0, "a"), Seg("u", 1, 15.0, "b"),
                                         Seg("u", 2, 25.0, "c"), Seg("u", 3, 45.0, "d")};
  const std::vector<DurationWindow> windows = {{0, 20}, {20, 40}};
  const DurationBuckets b = BucketByDuration(in, windows);
  EXPECT_EQ(b.stats[0].count, 2);
  EXPECT_EQ(b.stats[1].count, 1);
  EXPECT_DOUBLE_EQ(b.stats[0].mean_duration_sec, 10.0);
  EXPECT_DOUBLE_EQ(b.stats[1].mean_duration_sec, 25.0);
  EXPECT_DOUBLE_EQ(b.stats[0].total_hours, 20.0 / 3600.0);
  ASSERT_EQ(b.rejects.size(), 1u);
  EXPECT_EQ(b.rejects[0].segment_id, "u-0003");
}

TEST(BucketTest, EmptyManifest) {
  const std::vector<DurationWindow> windows = {{0, 20}};
  const DurationBuckets b = BucketByDuration({}, windows);
  EXPECT_EQ(b.stats[0].count, 0);
  EXPECT_EQ(b.stats[0].total_hours, 0.0);
  EXPECT_TRUE(b.rejects.empty());
}

TEST(BucketTest, LargeManifestMatchesBruteForce) {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> dur(0.0, 70.0);
  std::vector<SegmentRecord> in;
  for (int i = 0; i < 1000; ++i) in.push_back(Seg("u", i, dur(rng), "x"));
  const std::vector<DurationWindow> windows = {{0, 20}, {20, 40}, {40, 60}};
  const DurationBuckets b = BucketByDuration(in, windows);
  std::size_t assigned = b.rejects.size();
  for (std::size_t w = 0; w < windows.size(); ++w) {
    double seconds = 0.0;
    int count = 0;
    for (const SegmentRecord& r : in) {
      if (r.duration_sec >= windows[w].lo_sec && r.duration_sec < windows[w].hi_sec) {
        seconds += r.duration_sec;
        ++count;
      }
    }
    EXPECT_EQ(b.stats[w].count, count);
    EXPECT_NEAR(b.stats[w].total_hours, seconds / 3600.0, 1e-12);
    assigned += b.buckets[w].size();
  }
  EXPECT_EQ(assigned, in.size());
  for (const SegmentRecord& r : b.rejects) EXPECT_GE(r.duration_sec, 60.0);
}

TEST(BucketTest, WindowValidation) {
  const std::vector<DurationWindow> overlapping = {{0, 20}, {10, 30}};
  EXPECT_THROW(BucketByDuration({}, overlapping), InputError);
  const std::vector<DurationWindow> inverted = {{5, 5}};
  EXPECT_THROW(BucketByDuration({}, inverted), InputError);
  EXPECT_EQ(ParseWindows("0-20,20-40").size(), 2u);
  EXPECT_THROW(ParseWindows("0-20,x"), InputError);
}

TEST(BucketTest, TableAndJson) {
  const std::vector<SegmentRecord> in = {Seg("u", 0, 5.0, "a"), Seg("u", 1, 15.0, "b")};
  const std::vector<DurationWindow> windows = {{0, 20}};
  const DurationBuckets b = BucketByDuration(in, windows);
  EXPECT_NE(FormatBucketTable(b.stats).find("0-20"), std::string::npos);
  EXPECT_NE(FormatBucketJson(b.stats).find("\"avg_segment_sec\": 10.0"), std::string::npos);
}

// ------------------------------------------------------------ greedy concat

TEST(GreedyConcatTest, SimpleGroups) {
  const std::vector<SegmentRecord> in = {Seg("t", 0, 8, "a"), Seg("t", 1, 8, "b"),
                                         Seg("t", 2, 8, "c")};
  const auto out = GreedyConcat(in, 20.0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].record.segment_id, "t-0000_0001");
  EXPECT_EQ(out[0].record.text, "a b");
  EXPECT_DOUBLE_EQ(out[0].record.duration_sec, 16.0);
  EXPECT_DOUBLE_EQ(out[1].record.duration_sec, 8.0);
  EXPECT_EQ(GreedyConcat(in, 100.0).size(), 1u);
  EXPECT_THROW(GreedyConcat(in, 0.0), InputError);
}

TEST(GreedyConcatTest, OversizeAndTalkBoundaries) {
  const std::vector<SegmentRecord> in = {Seg("t", 0, 3, "a"), Seg("t", 1, 30, "b"),
                                         Seg("t", 2, 3, "c"), Seg("s", 0, 3, "d")};
  const auto out = GreedyConcat(in, 20.0);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_FALSE(out[0].oversize);
  EXPECT_TRUE(out[1].oversize);
  EXPECT_EQ(out[3].record.utterance_id, "s");
}

TEST(GreedyConcatTest, MatchesIndependentScan) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> dur(0.5, 25.0);
  std::vector<SegmentRecord> in;
  for (int i = 0; i < 50; ++i) in.push_back(Seg(i < 30 ? "talk1" : "talk2", i, dur(rng), "w"));
  for (double cap : {20.0, 40.0, 60.0}) {
    // Independent scan: boundary before record i when the talk changes or the
    // running sum would pass the cap.
    std::vector<std::vector<int>> expected;
    double sum = 0.0;
    for (int i = 0; i < 50; ++i) {
      const bool new_talk = i > 0 && in[i].utterance_id != in[i - 1].utterance_id;
      if (i == 0 || new_talk || sum + in[i].duration_sec > cap) {
        expected.emplace_back();
        sum = 0.0;
      }
      expected.back().push_back(i);
      sum += in[i].duration_sec;
    }
    const auto out = GreedyConcat(in, cap);
    ASSERT_EQ(out.size(), expected.size());
    std::size_t next = 0;
    for (std::size_t g = 0; g < out.size(); ++g) {
      ASSERT_EQ(out[g].member_ids.size(), expected[g].size());
      double total = 0.0;
      for (std::size_t k = 0; k < expected[g].size(); ++k) {
        EXPECT_EQ(out[g].member_ids[k], in[next++].segment_id);
        total += in[expected[g][k]].duration_sec;
      }
      if (!out[g].oversize) EXPECT_LE(out[g].record.duration_sec, cap);
      EXPECT_NEAR(out[g].record.duration_sec, total, 1e-9);
    }
  }
}

// ----------------------------------------------------------------- chunking

std::vector<WordTimestamp> Sentences(int count, int words_per, double word_sec) {
  std::vector<WordTimestamp> words;
  double t = 0.0;
  for (int s = 0; s < count; ++s) {
    for (int w = 0; w < words_per; ++w) {
      words.push_back({w + 1 == words_per ? "end." : "word", t, t + word_sec});
      t += word_sec;
    }
  }
  return words;
}

TEST(ChunkTest, SentenceAlignedTwentyMinuteChunks) {
  // Ten 3-minute sentences of three 1-minute words.
  const auto words = Sentences(10, 3, 60.0);
  const auto chunks = ChunkLongAudio(words, 1200.0, 1200.0);
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].last_word, 17);
  EXPECT_DOUBLE_EQ(chunks[0].end_sec - chunks[0].start_sec, 1080.0);
  EXPECT_DOUBLE_EQ(chunks[1].end_sec - chunks[1].start_sec, 720.0);
  EXPECT_TRUE(chunks[0].ends_sentence);
  EXPECT_FALSE(chunks[0].fallback_split);
}

TEST(ChunkTest, ShortStreamIsOneChunk) {
  const auto chunks = ChunkLongAudio(Sentences(2, 3, 1.0), 100.0, 100.0);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].text, "word word end. word word end.");
}

TEST(ChunkTest, TargetClosesEarly) {
  const auto chunks = ChunkLongAudio(Sentences(10, 3, 60.0), 500.0, 1200.0);
  // First sentence end at or past 500 s is at 540 s.
  EXPECT_EQ(chunks[0].last_word, 8);
}

TEST(ChunkTest, NoPunctuationFallsBackToWidestGap) {
  std::vector<WordTimestamp> words;
  double t = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double gap = (i % 7 == 6) ? 2.0 : 0.1;
    words.push_back({"w", t, t + 1.0});
    t += 1.0 + gap;
  }
  const auto chunks = ChunkLongAudio(words, 12.0, 12.0);
  ASSERT_GT(chunks.size(), 1u);
  for (const Chunk& c : chunks) EXPECT_LE(c.end_sec - c.start_sec, 12.0);
  EXPECT_TRUE(chunks[0].fallback_split);
  // The widest pause follows word 6.
  EXPECT_EQ(chunks[0].last_word, 6);
}

TEST(ChunkTest, RandomStreamsPartitionWordsWithinCap) {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> len(0.1, 1.5), gap(0.0, 0.8), unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<WordTimestamp> words;
    double t = 0.0;
    const int n = 1 + static_cast<int>(unit(rng) * 200);
    const double p_end = unit(rng) * 0.3;
    for (int i = 0; i < n; ++i) {
      const double l = len(rng);
      words.push_back({unit(rng) < p_end ? "x." : "x", t, t + l});
      t += l + gap(rng);
    }
    const double cap = 5.0 + unit(rng) * 20.0;
    const double target = cap * (0.5 + 0.5 * unit(rng));
    const auto chunks = ChunkLongAudio(words, target, cap);
    int next = 0;
    for (const Chunk& c : chunks) {
      ASSERT_EQ(c.first_word, next);
      ASSERT_GE(c.last_word, c.first_word);
      next = c.last_word + 1;
      if (c.first_word != c.last_word) EXPECT_LE(c.end_sec - c.start_sec, cap + 1e-9);
      if (!c.fallback_split && &c != &chunks.back()) EXPECT_TRUE(c.ends_sentence);
    }
    EXPECT_EQ(next, n);
  }
}

TEST(ChunkTest, RejectsBadInput) {
  std::vector<WordTimestamp> words = {{"a", 1.0, 0.5}};
  EXPECT_THROW(ChunkLongAudio(words, 5, 10), InputError);
  words = {{"a", 1.0, 1.5}, {"b", 0.5, 0.7}};
  EXPECT_THROW(ChunkLongAudio(words, 5, 10), InputError);
  EXPECT_THROW(ChunkLongAudio({}, 20, 10), InputError);
}

// ------------------------------------------------------------- vocabulary

TEST(VocabularyTest, EncodeDecode) {
  const Vocabulary v = SyntheticVocabulary();
  EXPECT_EQ(v.size(), 40);
  EXPECT_EQ(v.blank_id(), 40);
  const std::string text = "The cat, sat on a mat. Was it fun?";
  const std::vector<int> ids = v.Encode(text);
  EXPECT_EQ(ids.size(), 12u);
  EXPECT_TRUE(v.IsPunctuation(ids[2]));
  EXPECT_EQ(v.Decode(ids), text);
  EXPECT_THROW(v.Encode("The zebra."), DataError);
}

// ---------------------------------------------------------------- synthetic

SyntheticConfig SmallSynth() {
  SyntheticConfig c;
  c.num_train_documents = 12;
  c.num_test_documents = 4;
  return c;
}

TEST(SyntheticTest, NoiselessFramesDecodeByNearestPrototype) {
  SyntheticConfig c = SmallSynth();
  c.noise_sigma = 0.0;
  c.num_train_documents = 1;
  c.min_sentences_per_document = c.max_sentences_per_document = 1;
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(c);
  ASSERT_EQ(corpus.train.records.size(), 1u);
  const FeatureMatrix& m = corpus.train.features[0];
  const std::vector<int>& frames = corpus.train.token_frames[0];

  // Oracle: nearest prototype per token span. The opening word is heard in
  // its case-neutral onset form; a complete segment starts with a capital.
  std::vector<int> decoded;
  int offset = 0;
  for (int len : frames) {
    int best = -1;
    double best_dist = 1e300;
    for (std::size_t k = 0; k < corpus.prototypes.size(); ++k) {
      double dist = 0.0;
      for (int d = 0; d < m.dim; ++d) {
        const double diff = m.at(offset, d) - corpus.prototypes[k][d];
        dist += diff * diff;
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(k);
      }
    }
    EXPECT_EQ(best_dist, 0.0);
    for (int f = 1; f < len; ++f) {
      for (int d = 0; d < m.dim; ++d) EXPECT_EQ(m.at(offset + f, d), m.at(offset, d));
    }
    const auto& table = decoded.empty() ? corpus.onset_prototype_of_token
                                        : corpus.prototype_of_token;
    const auto it = std::find(table.begin(), table.end(), best);
    ASSERT_NE(it, table.end());
    decoded.push_back(static_cast<int>(it - table.begin()));
    offset += len;
  }
  // The onset form of a word maps back to its lowercase id first.
  decoded[0] += 18;
  EXPECT_EQ(decoded, corpus.train.tokens[0]);
  EXPECT_EQ(corpus.vocab.Decode(decoded), corpus.train.records[0].text);
}

TEST(SyntheticTest, OnsetFormHidesCaseOnlyAtSegmentStart) {
  SyntheticConfig c = SmallSynth();
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(c);
  ASSERT_EQ(corpus.onset_prototype_of_token.size(), 40u);
  for (int w = 0; w < 18; ++w) {
    EXPECT_EQ(corpus.onset_prototype_of_token[w], corpus.onset_prototype_of_token[18 + w]);
    EXPECT_NE(corpus.prototype_of_token[w], corpus.prototype_of_token[18 + w]);
    EXPECT_NE(corpus.onset_prototype_of_token[w], corpus.prototype_of_token[w]);
  }
  for (int p = 36; p < 40; ++p) EXPECT_EQ(corpus.onset_prototype_of_token[p], -1);

  c.onset_hides_case = false;
  const SyntheticCorpus plain = GenerateSyntheticCorpus(c);
  for (int w = 0; w < 36; ++w) {
    EXPECT_EQ(plain.onset_prototype_of_token[w], plain.prototype_of_token[w]);
  }
  // Only the opening word's frames differ between the two renderings.
  const std::vector<int>& frames = corpus.train.token_frames[0];
  const FeatureMatrix& a = corpus.train.features[0];
  const FeatureMatrix& b = plain.train.features[0];
  ASSERT_EQ(a.num_frames, b.num_frames);
  for (int f = 0; f < a.num_frames; ++f) {
    bool same = true;
    for (int d = 0; d < a.dim; ++d) same = same && a.at(f, d) == b.at(f, d);
    EXPECT_EQ(same, f >= frames[0]) << "frame " << f;
  }
}

TEST(SyntheticTest, SameSeedSameBytes) {
  const SyntheticCorpus a = GenerateSyntheticCorpus(SmallSynth());
  const SyntheticCorpus b = GenerateSyntheticCorpus(SmallSynth());
  ASSERT_EQ(a.train.records.size(), b.train.records.size());
  for (std::size_t i = 0; i < a.train.records.size(); ++i) {
    EXPECT_EQ(FormatManifestLine(a.train.records[i]), FormatManifestLine(b.train.records[i]));
    EXPECT_EQ(a.train.features[i], b.train.features[i]);
  }
  SyntheticConfig other = SmallSynth();
  other.seed = 2;
  EXPECT_NE(FormatManifestLine(GenerateSyntheticCorpus(other).train.records[0]),
            FormatManifestLine(a.train.records[0]));
}

TEST(SyntheticTest, CompleteModeSegmentsAreCompleteSentences) {
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(SmallSynth());
  const SentenceCompletion check = CompleteSentences(corpus.train.records);
  EXPECT_EQ(check.merged.size(), corpus.train.records.size());
  EXPECT_TRUE(check.dropped.empty());
  for (const SegmentRecord& r : corpus.test.records) EXPECT_TRUE(IsCompleteSentence(r.text));
}

TEST(SyntheticTest, PartialModeMatchesTotalDuration) {
  SyntheticConfig c = SmallSynth();
  const SyntheticCorpus complete = GenerateSyntheticCorpus(c);
  c.mode = SegmentationMode::kPartial;
  const SyntheticCorpus partial = GenerateSyntheticCorpus(c);
  auto total = [](const SyntheticSplit& s) {
    double t = 0.0;
    for (const SegmentRecord& r : s.records) t += r.duration_sec;
    return t;
  };
  EXPECT_NEAR(total(complete.train), total(partial.train), 1e-6);
  int incomplete = 0;
  for (const SegmentRecord& r : partial.train.records) {
    if (!IsCompleteSentence(r.text)) ++incomplete;
  }
  EXPECT_GT(incomplete, static_cast<int>(partial.train.records.size()) / 2);
  // The held-out split does not depend on the training segmentation.
  ASSERT_EQ(complete.test.records.size(), partial.test.records.size());
  EXPECT_EQ(complete.test.records[0], partial.test.records[0]);
}

TEST(SyntheticTest, SegmentsFitTheWindowsAndTokenLengths) {
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(SmallSynth());
  int unaligned = 0;
  for (std::size_t i = 0; i < corpus.train.records.size(); ++i) {
    EXPECT_LT(corpus.train.records[i].duration_sec, 6.0 + 1e-9);
    int total = 0;
    for (int len : corpus.train.token_frames[i]) {
      EXPECT_GE(len, 2 * 8);
      EXPECT_LE(len, 5 * 8);
      unaligned += len % 8 != 0 ? 1 : 0;
      total += len;
    }
    EXPECT_EQ(total, corpus.train.features[i].num_frames);
    EXPECT_EQ(corpus.vocab.Encode(corpus.train.records[i].text), corpus.train.tokens[i]);
  }
  EXPECT_GT(unaligned, 0);
}

TEST(SyntheticTest, WritesReadableCorpus) {
  const fs::path dir = TempDir("synth");
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(SmallSynth());
  WriteSyntheticCorpus(corpus, dir);
  const auto records = ReadManifest(dir / "train" / "manifest.jsonl");
  ASSERT_EQ(records.size(), corpus.train.records.size());
  EXPECT_EQ(ReadFeatureFile(ResolveFeaturePath(dir / "train" / "manifest.jsonl", records[0])),
            corpus.train.features[0]);
}

}  // namespace
}  // namespace pnc
