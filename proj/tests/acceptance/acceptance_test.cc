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


// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "pnc/app/pipeline.h"
#include "pnc/app/run_config.h"
#include "pnc/app/verify.h"
#include "pnc/corpus/chunking.h"
#include "pnc/corpus/segments.h"
#include "pnc/eval.h"
#include "pnc/model/trainer.h"

namespace {

namespace fs = std::filesystem;
using namespace pnc;

int failures = 0;

void Report(int id, const std::string& title, bool pass, const std::string& detail) {
  fmt::print("criterion {:2d} {} {:<28} {}\n", id, pass ? "PASS" : "FAIL", title, detail);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double CpuSeconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

double Median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// ------------------------------------------------------------ criteria 1-3

void LossSuites() {
  const SuiteResult oracle = VerifyLossOracles(1, 200);
  Report(1, "loss oracles", oracle.passed && oracle.seconds < 30.0,
         fmt::format("{} instances, worst abs err {:.2e}, {:.1f}s{}", oracle.instances,
                     oracle.worst, oracle.seconds, oracle.passed ? "" : "; " + oracle.detail));

  const SuiteResult losses = VerifyLossGradients(1, 20);
  const SuiteResult model = VerifyModelGradients(1, 20);
  const double seconds = losses.seconds + model.seconds;
  std::string detail = fmt::format(
      "losses {} inst worst rel {:.2e}; model {} inst worst rel {:.2e}; {:.1f}s",
      losses.instances, losses.worst, model.instances, model.worst, seconds);
  if (!losses.passed) detail += "; " + losses.detail;
  if (!model.passed) detail += "; " + model.detail;
  Report(2, "gradient suite",
         losses.passed && model.passed && losses.instances >= 20 && model.instances >= 20 &&
             seconds < 120.0,
         detail);

  const SuiteResult norm = VerifyNormalization(1, 10);
  Report(3, "normalization", norm.passed,
         fmt::format("{} instances, worst |sum - 1| {:.2e}{}", norm.instances, norm.worst,
                     norm.passed ? "" : "; " + norm.detail));
}

// ---------------------------------------------------------------- criterion 4

bool SameCtcHead(const Parameters& a, const Parameters& b) {
  return a.ctc == b.ctc && a.ctc_bias == b.ctc_bias;
}

void HybridRouting() {
  SyntheticConfig synth;
  synth.num_train_documents = 3;
  synth.num_test_documents = 0;
  const LoadedSplit split = SplitFromSynthetic(GenerateSyntheticCorpus(synth).train);
  const std::vector<TrainingExample> batch(split.examples.begin(), split.examples.begin() + 4);
  const std::vector<Batch> micro = {{0, {0, 1, 2, 3}}};

  ModelConfig model;
  TrainConfig train;
  train.warmup_steps = 1;
  train.weight_decay = 0.0;
  train.grad_accum_batches = 1;
  const Parameters init = Parameters::Initialize(model);

  train.lambda = 0.0;
  Trainer off(model, train, init);
  const StepStats s0 = off.Step(batch, micro);
  train.lambda = 0.3;
  Trainer on(model, train, init);
  const StepStats s1 = on.Step(batch, micro);

  const bool frozen = SameCtcHead(off.params(), init);
  const bool moved = !SameCtcHead(on.params(), init);
  // The encoder still moves when the CTC weight is zero.
  const bool encoder_moved = off.params().subsample != init.subsample;
  Report(4, "hybrid routing", frozen && moved && encoder_moved && !s0.aborted && !s1.aborted,
         fmt::format("lambda=0 head bit-identical: {}; lambda=0.3 head changed: {}; "
                     "encoder updated: {}",
                     frozen, moved, encoder_moved));
}

// ------------------------------------------------------------ criteria 5-7

struct TrainedRun {
  RunConfig config;
  SyntheticCorpus corpus;
  LoadedSplit test;
  Parameters params;
  double cpu_seconds = 0.0;
};

TrainedRun TrainSynthetic(RunConfig config) {
  TrainedRun run;
  run.corpus = GenerateSyntheticCorpus(config.synth);
  const LoadedSplit train = SplitFromSynthetic(run.corpus.train);
  run.test = SplitFromSynthetic(run.corpus.test);
  const double start = CpuSeconds();
  run.params = TrainOnSplit(config, train);
  run.cpu_seconds = CpuSeconds() - start;
  run.config = std::move(config);
  return run;
}

struct Decoded {
  std::vector<Hypothesis> hyps;
  EvalReport report;
};

Decoded DecodeAndScore(const TrainedRun& run, const DecodeOptions& options) {
  Decoded d;
  d.hyps = DecodeExamples(run.params, run.config.model, run.test.examples, options);
  std::vector<std::string> refs, texts;
  for (std::size_t i = 0; i < d.hyps.size(); ++i) {
    refs.push_back(run.test.records[i].text);
    texts.push_back(run.corpus.vocab.Decode(d.hyps[i].tokens));
  }
  d.report = EvaluateCorpus(refs, texts);
  return d;
}

RunConfig WithSeed(RunConfig c, std::uint64_t seed, SegmentationMode mode) {
  c.model.seed = c.train.seed = c.synth.seed = seed;
  c.synth.mode = mode;
  return c;
}

void SyntheticTraining(const fs::path& bundled) {
  const RunConfig base = ReadRunConfig(bundled);
  std::map<std::pair<std::uint64_t, SegmentationMode>, double> pnc_wer;

  fmt::print("training bundled config (seed 1, complete)\n");
  std::fflush(stdout);
  const TrainedRun run = TrainSynthetic(WithSeed(base, 1, SegmentationMode::kComplete));

  DecodeOptions tdt;
  DecodeOptions unit;
  unit.unit_durations = true;
  DecodeOptions ctc;
  ctc.decoder = DecoderKind::kCtc;
  const Decoded with_tdt = DecodeAndScore(run, tdt);
  const Decoded with_unit = DecodeAndScore(run, unit);
  const Decoded with_ctc = DecodeAndScore(run, ctc);
  pnc_wer[{1, SegmentationMode::kComplete}] = with_tdt.report.at(PncSetting::kPnc).wer;

  const double skip = SummarizeDecodeEffort(with_tdt.hyps).skip_ratio;
  const double unit_skip = SummarizeDecodeEffort(with_unit.hyps).skip_ratio;
  Report(5, "duration skipping", skip < 1.0 && skip < unit_skip,
         fmt::format("frames_visited/T: D={{0..4}} {:.4f}, D={{1}} {:.4f} ({} utterances)", skip,
                     unit_skip, with_tdt.hyps.size()));

  const double ctc_wer = with_ctc.report.at(PncSetting::kNoPnc).wer;
  const double tdt_wer = with_tdt.report.at(PncSetting::kNoPnc).wer;
  const int utterances = static_cast<int>(run.corpus.train.records.size());
  Report(6, "end-to-end synthetic",
         ctc_wer <= 0.05 && tdt_wer <= 0.05 && run.cpu_seconds <= 600.0,
         fmt::format("NoPnC WER ctc {:.2f}% tdt {:.2f}%; {} train utterances; "
                     "{:.0f} CPU-s training",
                     100 * ctc_wer, 100 * tdt_wer, utterances, run.cpu_seconds));

  std::vector<double> complete, partial;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    for (SegmentationMode mode : {SegmentationMode::kComplete, SegmentationMode::kPartial}) {
      if (!pnc_wer.count({seed, mode})) {
        fmt::print("training seed {} ({})\n", seed,
                   mode == SegmentationMode::kComplete ? "complete" : "partial");
        std::fflush(stdout);
        const TrainedRun r = TrainSynthetic(WithSeed(base, seed, mode));
        pnc_wer[{seed, mode}] = DecodeAndScore(r, tdt).report.at(PncSetting::kPnc).wer;
      }
    }
    const double c = pnc_wer[{seed, SegmentationMode::kComplete}];
    const double p = pnc_wer[{seed, SegmentationMode::kPartial}];
    complete.push_back(c);
    partial.push_back(p);
    per_seed += fmt::format(" s{} {:.2f}/{:.2f}", seed, 100 * c, 100 * p);
  }
  const double mc = Median3(complete), mp = Median3(partial);
  Report(7, "complete vs partial", mc < mp,
         fmt::format("median PnC WER complete {:.2f}% < partial {:.2f}%; per seed c/p:{}",
                     100 * mc, 100 * mp, per_seed));
}

// ---------------------------------------------------------------- criterion 8

SegmentRecord Seg(const std::string& utt, int index, double dur, const std::string& text) {
  SegmentRecord r;
  r.utterance_id = utt;
  r.segment_index = index;
  r.segment_id = fmt::format("{}-{:04d}", utt, index);
  r.duration_sec = dur;
  r.text = text;
  return r;
}

const char* const kFigTwoFirst =
    "What appears once in the atmosphere may appear often, and it was undoubtedly the "
    "archetype of that familiar ornament. I have seen in the sky a chain of summer "
    "lightning,";
const char* const kFigTwoSecond =
    "which at once showed to me that the Greeks drew from nature when they painted the "
    "thunderbolt in the hand of Jove.";

void CorpusGoldens() {
  std::vector<std::string> problems;

  const std::vector<SegmentRecord> fig = {Seg("102-129232", 76, 14.2, kFigTwoFirst),
                                          Seg("102-129232", 77, 6.3, kFigTwoSecond)};
  const SentenceCompletion done = CompleteSentences(fig);
  const std::string merged_text = std::string(kFigTwoFirst) + " " + kFigTwoSecond;
  if (done.merged.size() != 1 || done.merged[0].record.segment_id != "102-129232-0076_0077" ||
      done.merged[0].record.text != merged_text) {
    problems.push_back("sentence fixture");
  }

  const std::vector<SegmentRecord> durations = {Seg("u", 0, 5.0, "a"), Seg("u", 1, 15.0, "b"),
                                                Seg("u", 2, 25.0, "c"), Seg("u", 3, 45.0, "d")};
  const std::vector<DurationWindow> windows = {{0, 20}, {20, 40}};
  const DurationBuckets b = BucketByDuration(durations, windows);
  if (b.stats[0].count != 2 || b.stats[1].count != 1 || b.stats[0].mean_duration_sec != 10.0 ||
      b.stats[1].mean_duration_sec != 25.0 || b.stats[0].total_hours != 20.0 / 3600.0 ||
      b.stats[1].total_hours != 25.0 / 3600.0 || b.rejects.size() != 1) {
    problems.push_back("bucket stats");
  }

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> len(0.1, 1.5), gap(0.0, 0.8), unit(0.0, 1.0);
  int bad_trials = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<WordTimestamp> words;
    double t = 0.0;
    const int n = 1 + static_cast<int>(unit(rng) * 200);
    const double p_end = unit(rng) * 0.3;
    for (int i = 0; i < n; ++i) {
      const double l = len(rng);
      words.push_back({unit(rng) < p_end ? "w." : "w", t, t + l});
      t += l + gap(rng);
    }
    const double cap = 5.0 + unit(rng) * 20.0;
    const double target = cap * (0.5 + 0.5 * unit(rng));
    const std::vector<Chunk> chunks = ChunkLongAudio(words, target, cap);
    int next = 0;
    bool ok = true;
    for (const Chunk& c : chunks) {
      ok = ok && c.first_word == next && c.last_word >= c.first_word;
      // Cap holds unless one word alone exceeds it.
      if (c.first_word != c.last_word) ok = ok && c.end_sec - c.start_sec <= cap + 1e-9;
      // Every non-final cut lands on a sentence end or is a flagged fallback.
      if (&c != &chunks.back()) ok = ok && (c.ends_sentence || c.fallback_split);
      next = c.last_word + 1;
    }
    ok = ok && next == n;
    if (!ok) ++bad_trials;
  }
  if (bad_trials > 0) problems.push_back(fmt::format("chunker ({} bad trials)", bad_trials));

  std::string detail = "sentence fixture, bucket stats, 1000 chunker trials";
  if (!problems.empty()) {
    detail = "failed:";
    for (const auto& p : problems) detail += " " + p;
  }
  Report(8, "corpus goldens", problems.empty(), detail);
}

// ---------------------------------------------------------------- criterion 9

// Plain recursive edit distance with memo; deliberately unlike AlignCounts.
int OracleDistance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, int> memo;
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int best = std::min({go(i + 1, j) + 1, go(i, j + 1) + 1,
                               go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

void MetricChecks() {
  std::mt19937_64 rng(9);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e"};
  std::uniform_int_distribution<int> length(0, 10), pick(0, 4);
  auto draw = [&] {
    std::vector<std::string> out(length(rng));
    for (auto& w : out) w = words[pick(rng)];
    return out;
  };
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> ref = draw();
    if (ref.empty()) ref.push_back("a");
    const std::vector<std::string> hyp = draw();
    const WerBreakdown w = Wer(ref, hyp);
    const int expected = OracleDistance(ref, hyp);
    if (w.errors() != expected ||
        std::abs(w.wer - static_cast<double>(expected) / ref.size()) > 1e-15) {
      ++mismatches;
    }
  }

  const std::vector<std::string> refs = {"The cat sat on the mat.", "a dog ran to the park",
                                         "we saw a big red ball"};
  const std::vector<std::string> hyps = {"the cat sat on a mat.", "a dog ran to park",
                                         "we saw the red ball"};
  const BleuResult b = Bleu(refs, hyps);
  const double expected =
      100.0 * std::exp(-2.0 / 17.0) *
      std::pow((15.0 / 17.0) * (9.0 / 14.0) * (4.0 / 11.0) * (2.0 / 8.0), 0.25);
  const bool fixture = b.matches == std::vector<long>{15, 9, 4, 2} &&
                       b.totals == std::vector<long>{17, 14, 11, 8} && b.hyp_length == 17 &&
                       b.ref_length == 19 && std::abs(b.score - expected) < 1e-12;
  const double identical = Bleu(refs, refs).score;

  Report(9, "metric cross-checks", mismatches == 0 && fixture && identical == 100.0,
         fmt::format("WER vs oracle: {} mismatches / 1000; BLEU fixture {:.4f} (expected "
                     "{:.4f}); identical-corpus BLEU {}",
                     mismatches, b.score, expected, identical));
}

// --------------------------------------------------------------- criterion 10

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteText(const fs::path& p, const std::string& body) {
  std::ofstream(p, std::ios::binary) << body;
}

// Files under dir (recursive), relative path -> bytes.
std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = Slurp(e.path());
  }
  return out;
}

void Determinism(const fs::path& cli, const fs::path& work) {
  fs::remove_all(work);
  const fs::path in = work / "inputs";
  fs::create_directories(in);

  std::string manifest;
  for (const SegmentRecord& r :
       {Seg("102-129232", 76, 14.2, kFigTwoFirst), Seg("102-129232", 77, 6.3, kFigTwoSecond),
        Seg("7-1", 0, 3.5, "A short one."), Seg("7-1", 1, 25.0, "Another sentence here."),
        Seg("7-1", 2, 48.0, "and a fragment")}) {
    manifest += FormatManifestLine(r) + "\n";
  }
  WriteText(in / "segments.jsonl", manifest);

  std::string stamps;
  double t = 0.0;
  for (int i = 0; i < 400; ++i) {
    const std::string word = i % 17 == 16 ? "end." : "word";
    stamps += nlohmann::ordered_json{{"word", word}, {"start_sec", t}, {"end_sec", t + 0.4}}
                  .dump() +
              "\n";
    t += 0.4 + (i % 5) * 0.05;
  }
  WriteText(in / "words.jsonl", stamps);

  RunConfig small;
  small.synth.num_train_documents = 6;
  small.synth.num_test_documents = 2;
  small.train.total_steps = 6;
  small.train.warmup_steps = 2;
  small.train.bucket_batch_sizes = {{{0.0, 3.0}, 4}, {{3.0, 6.0}, 2}};
  small.run.log_every = 1;
  WriteJsonFile(in / "small.json", ToJson(small));

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sentences", "sentences --in {in}/segments.jsonl --out {out}/sentences.jsonl"},
      {"bucket", "bucket --in {in}/segments.jsonl --windows 0-20,20-40 --out-dir {out}"},
      {"concat", "concat --in {in}/segments.jsonl --max-dur 30 --out {out}/concat.jsonl"},
      {"chunk", "chunk --timestamps {in}/words.jsonl --target 40 --cap 60 --out {out}/chunks.jsonl"},
      {"gen-synth", "gen-synth --config {in}/small.json --out-dir {out}"},
      {"train", "train --config {in}/small.json --data {run}/gen-synth --out-dir {out}"},
      {"decode", "decode --checkpoint {run}/train/model.ckpt --manifest "
                 "{run}/gen-synth/test/manifest.jsonl --decoder tdt --out {out}/tdt.jsonl"},
      {"decode-ctc", "decode --checkpoint {run}/train/model.ckpt --manifest "
                     "{run}/gen-synth/test/manifest.jsonl --decoder ctc --out {out}/ctc.jsonl"},
      {"score", "score --ref {run}/gen-synth/test/manifest.jsonl --hyp {run}/decode/tdt.jsonl "
                "--mode wer4 --out {out}/wer.json"},
      {"score-bleu", "score --ref {run}/gen-synth/test/manifest.jsonl --hyp "
                     "{run}/decode/tdt.jsonl --mode bleu --out {out}/bleu.json"},
      {"verify", "verify losses --out {out}/verify.json"},
  };

  std::vector<std::string> problems;
  std::vector<std::map<std::string, std::string>> snapshots[2];
  // Both passes run the identical command lines in the same place.
  const fs::path run = work / "run";
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(run);
    for (const auto& [name, pattern] : commands) {
      const fs::path out = run / name;
      fs::create_directories(out);
      std::string args = pattern;
      for (const auto& [key, value] :
           {std::pair<std::string, std::string>{"{in}", in.string()},
            {"{out}", out.string()},
            {"{run}", run.string()}}) {
        for (std::size_t at; (at = args.find(key)) != std::string::npos;) {
          args.replace(at, key.size(), value);
        }
      }
      const std::string cmd =
          fmt::format("\"{}\" {} > \"{}\" 2>&1", cli.string(), args, (run / (name + ".log")).string());
      const int status = std::system(cmd.c_str());
      if (status != 0 && pass == 0) {
        problems.push_back(name + " exited non-zero: " + Slurp(run / (name + ".log")));
      }
      snapshots[pass].push_back(Snapshot(out));
    }
  }
  int compared = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    if (snapshots[0][k].empty()) problems.push_back(commands[k].first + " wrote nothing");
    if (snapshots[0][k] != snapshots[1][k]) problems.push_back(commands[k].first + " differs");
    compared += static_cast<int>(snapshots[0][k].size());
  }
  std::string detail = fmt::format("{} subcommand runs, {} output files byte-identical",
                                   commands.size(), compared);
  if (!problems.empty()) {
    detail = "problems:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  Report(10, "determinism", problems.empty(), detail);
}

}  // namespace

int main(int argc, char** argv) {
  // Optional argument: criteria to run, e.g. "1,2,10".
  std::vector<int> only;
  if (argc > 1) {
    std::stringstream s(argv[1]);
    for (std::string item; std::getline(s, item, ',');) only.push_back(std::stoi(item));
  }
  auto wanted = [&](std::initializer_list<int> ids) {
    if (only.empty()) return true;
    for (int id : ids) {
      if (std::find(only.begin(), only.end(), id) != only.end()) return true;
    }
    return false;
  };

  const fs::path work = fs::temp_directory_path() / "pnclab_acceptance";
  try {
    if (wanted({1, 2, 3})) LossSuites();
    if (wanted({4})) HybridRouting();
    if (wanted({5, 6, 7})) SyntheticTraining(fs::path(PNC_SOURCE_DIR) / "configs" / "synth.json");
    if (wanted({8})) CorpusGoldens();
    if (wanted({9})) MetricChecks();
    if (wanted({10})) Determinism(PNC_CLI_PATH, work);
  } catch (const std::exception& e) {
    fmt::print("acceptance run aborted: {}\n", e.what());
    return 2;
  }
  fmt::print("{}\n", failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures));
  return failures == 0 ? 0 : 1;
}
