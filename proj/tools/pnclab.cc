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


// pnclab: data preparation, training, decoding and scoring for hybrid
// token-and-duration / CTC models.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "pnc/app/pipeline.h"
#include "pnc/app/run_config.h"
#include "pnc/app/verify.h"
#include "pnc/corpus/chunking.h"
#include "pnc/corpus/segments.h"
#include "pnc/error.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace pnc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;
constexpr int kExitNumerical = 4;

fs::path Sibling(const fs::path& out, const std::string& suffix) {
  return fs::path(out.string() + suffix);
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::vector<SegmentRecord> Records(const std::vector<MergedRecord>& merged) {
  std::vector<SegmentRecord> out;
  for (const MergedRecord& m : merged) out.push_back(m.record);
  return out;
}

int RunSentences(const fs::path& in, const fs::path& out) {
  const std::vector<SegmentRecord> records = ReadManifest(in);
  const SentenceCompletion result = CompleteSentences(records);
  WriteManifest(out, Records(result.merged));
  std::ofstream dropped = OpenOut(Sibling(out, ".dropped.jsonl"));
  for (const DroppedSegment& d : result.dropped) {
    dropped << ordered_json{{"segment_id", d.segment_id}, {"reason", d.reason}}.dump() << '\n';
  }
  int merges = 0;
  for (const MergedRecord& m : result.merged) merges += m.member_ids.size() > 1 ? 1 : 0;
  WriteJsonFile(Sibling(out, ".config.json"),
                {{"command", "sentences"}, {"in", in.string()}, {"out", out.string()}});
  fmt::print("{} segments in, {} records out ({} merged), {} dropped\n", records.size(),
             result.merged.size(), merges, result.dropped.size());
  return kExitOk;
}

int RunBucket(const fs::path& in, const std::string& windows_spec, const fs::path& out_dir) {
  const std::vector<DurationWindow> windows = ParseWindows(windows_spec);
  const DurationBuckets b = BucketByDuration(ReadManifest(in), windows);
  fs::create_directories(out_dir);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    WriteManifest(out_dir / ("bucket_" + windows[w].Label() + ".jsonl"), b.buckets[w]);
  }
  WriteManifest(out_dir / "rejects.jsonl", b.rejects);
  std::ofstream(out_dir / "stats.json", std::ios::binary) << FormatBucketJson(b.stats);
  WriteJsonFile(out_dir / "config.json",
                {{"command", "bucket"}, {"in", in.string()}, {"windows", windows_spec}});
  fmt::print("{}", FormatBucketTable(b.stats));
  if (!b.rejects.empty()) fmt::print("{} records outside every window\n", b.rejects.size());
  return kExitOk;
}

int RunConcat(const fs::path& in, double max_dur, const fs::path& out) {
  const std::vector<SegmentRecord> records = ReadManifest(in);
  const std::vector<MergedRecord> merged = GreedyConcat(records, max_dur);
  WriteManifest(out, Records(merged));
  int oversize = 0;
  for (const MergedRecord& m : merged) oversize += m.oversize ? 1 : 0;
  WriteJsonFile(Sibling(out, ".config.json"),
                {{"command", "concat"}, {"in", in.string()}, {"max_dur_sec", max_dur}});
  fmt::print("{} records in, {} groups out, {} oversize singletons\n", records.size(),
             merged.size(), oversize);
  return kExitOk;
}

std::vector<WordTimestamp> ReadTimestamps(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<WordTimestamp> words;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const ordered_json j = ordered_json::parse(line);
      words.push_back({j.at("word").get<std::string>(), j.at("start_sec").get<double>(),
                       j.at("end_sec").get<double>()});
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return words;
}

int RunChunk(const fs::path& in, double target, double cap, const fs::path& out) {
  const std::vector<Chunk> chunks = ChunkLongAudio(ReadTimestamps(in), target, cap);
  std::ofstream o = OpenOut(out);
  int fallbacks = 0;
  for (const Chunk& c : chunks) {
    ordered_json j;
    j["start_sec"] = c.start_sec;
    j["end_sec"] = c.end_sec;
    j["first_word"] = c.first_word;
    j["last_word"] = c.last_word;
    j["fallback_split"] = c.fallback_split;
    j["text"] = c.text;
    o << j.dump() << '\n';
    fallbacks += c.fallback_split ? 1 : 0;
  }
  WriteJsonFile(Sibling(out, ".config.json"), {{"command", "chunk"},
                                               {"timestamps", in.string()},
                                               {"target_sec", target},
                                               {"cap_sec", cap}});
  fmt::print("{} chunks ({} fallback splits)\n", chunks.size(), fallbacks);
  return kExitOk;
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<int> total_steps;
  std::optional<int> warmup_steps;
  std::optional<double> max_lr;
  std::optional<double> lambda;
  std::optional<int> attention_window;
};

RunConfig ResolveConfig(const std::optional<fs::path>& path, const Overrides& o) {
  RunConfig c = path ? ReadRunConfig(*path) : RunConfig{};
  ordered_json j = ToJson(c);
  if (o.seed) {
    j["model"]["seed"] = *o.seed;
    j["train"]["seed"] = *o.seed;
    j["synth"]["seed"] = *o.seed;
  }
  if (o.mode) j["synth"]["mode"] = *o.mode;
  if (o.total_steps) j["train"]["total_steps"] = *o.total_steps;
  if (o.warmup_steps) j["train"]["warmup_steps"] = *o.warmup_steps;
  if (o.max_lr) j["train"]["max_lr"] = *o.max_lr;
  if (o.lambda) j["train"]["lambda"] = *o.lambda;
  if (o.attention_window) {
    j["model"]["attention_window"] =
        *o.attention_window > 0 ? ordered_json(*o.attention_window) : ordered_json();
  }
  // Round trip so every override goes through validation.
  return RunConfigFromJson(j);
}

int RunGenSynth(const RunConfig& config, const fs::path& out_dir) {
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(config.synth);
  WriteSyntheticCorpus(corpus, out_dir);
  WriteJsonFile(out_dir / "config.json", ToJson(config));
  double train_sec = 0.0;
  for (const SegmentRecord& r : corpus.train.records) train_sec += r.duration_sec;
  fmt::print("train: {} segments, {:.2f} h; test: {} segments\n", corpus.train.records.size(),
             train_sec / 3600.0, corpus.test.records.size());
  return kExitOk;
}

int RunVerify(const std::string& which, std::uint64_t seed, const std::optional<fs::path>& out) {
  const std::vector<SuiteResult> results = RunVerifySuites(which, seed);
  bool ok = true;
  ordered_json j;
  j["schema"] = "pnclab.verify.v1";
  j["seed"] = seed;
  j["suites"] = ordered_json::array();
  for (const SuiteResult& r : results) {
    fmt::print("{}\n", FormatSuiteResult(r));
    ok = ok && r.passed;
    j["suites"].push_back({{"name", r.name},
                           {"passed", r.passed},
                           {"instances", r.instances},
                           {"worst", r.worst},
                           {"tolerance", r.tolerance},
                           {"detail", r.detail}});
  }
  if (out) {
    WriteJsonFile(*out, j);
    WriteJsonFile(Sibling(*out, ".config.json"),
                  {{"command", "verify"}, {"which", which}, {"seed", seed}});
  }
  fmt::print("{}\n", ok ? "all suites passed" : "verification FAILED");
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pnclab: hybrid TDT-CTC toolkit for punctuated, cased transcripts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pnclab 0.1.0");

  fs::path in, out, out_dir, config_path, data_dir, checkpoint, manifest, ref, hyp;
  std::string windows = "0-20,20-40,40-60";
  double max_dur = 20.0, target = 1200.0, cap = 1200.0;
  std::string decoder = "tdt", score_mode = "wer4", which = "all";
  bool unit_durations = false;
  int max_tokens_per_frame = 10;
  std::uint64_t verify_seed = 1;
  std::optional<fs::path> config_opt, verify_out;
  Overrides overrides;

  auto* sentences = app.add_subcommand("sentences", "merge segments into complete sentences");
  sentences->add_option("--in", in, "input manifest")->required();
  sentences->add_option("--out", out, "output manifest")->required();

  auto* bucket = app.add_subcommand("bucket", "split a manifest by duration window");
  bucket->add_option("--in", in, "input manifest")->required();
  bucket->add_option("--windows", windows, "comma-separated lo-hi windows in seconds");
  bucket->add_option("--out-dir", out_dir, "output directory")->required();

  auto* concat = app.add_subcommand("concat", "greedily concatenate consecutive records");
  concat->add_option("--in", in, "input manifest")->required();
  concat->add_option("--max-dur", max_dur, "maximum group duration in seconds");
  concat->add_option("--out", out, "output manifest")->required();

  auto* chunk = app.add_subcommand("chunk", "cut long audio at sentence ends");
  chunk->add_option("--timestamps", in, "JSON lines of word, start_sec, end_sec")->required();
  chunk->add_option("--target", target, "target chunk length in seconds");
  chunk->add_option("--cap", cap, "hard chunk length cap in seconds");
  chunk->add_option("--out", out, "output JSON lines")->required();

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--config", config_opt, "run config JSON");
    sub->add_option("--seed", overrides.seed, "seed for data, init and batching");
    sub->add_option("--mode", overrides.mode, "synthetic segmentation: complete|partial");
    sub->add_option("--total-steps", overrides.total_steps, "optimizer updates");
    sub->add_option("--warmup-steps", overrides.warmup_steps, "warmup updates");
    sub->add_option("--max-lr", overrides.max_lr, "peak learning rate");
    sub->add_option("--lambda", overrides.lambda, "CTC loss weight");
    sub->add_option("--attention-window", overrides.attention_window,
                    "attention half-width in encoder frames, 0 for full");
  };

  auto* gen = app.add_subcommand("gen-synth", "write a synthetic cased, punctuated corpus");
  add_overrides(gen);
  gen->add_option("--out-dir", out_dir, "output directory")->required();

  auto* train = app.add_subcommand("train", "duration-bucketed hybrid TDT-CTC training");
  add_overrides(train);
  train->add_option("--data", data_dir, "corpus directory from gen-synth")->required();
  train->add_option("--out-dir", out_dir, "output directory")->required();

  auto* decode = app.add_subcommand("decode", "greedy decoding with effort report");
  decode->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
  decode->add_option("--manifest", manifest, "manifest with feature_ref")->required();
  decode->add_option("--decoder", decoder, "ctc|tdt")
      ->check(CLI::IsMember({"ctc", "tdt"}));
  decode->add_flag("--unit-durations", unit_durations,
                   "replace the duration head with a fixed duration of 1");
  decode->add_option("--max-tokens-per-frame", max_tokens_per_frame,
                     "consecutive zero-duration tokens before a forced advance");
  decode->add_option("--out", out, "hypotheses as JSON lines")->required();

  auto* score = app.add_subcommand("score", "WER under four settings, or BLEU");
  score->add_option("--ref", ref, "reference manifest")->required();
  score->add_option("--hyp", hyp, "hypotheses as JSON lines")->required();
  score->add_option("--mode", score_mode, "wer4|bleu")->check(CLI::IsMember({"wer4", "bleu"}));
  score->add_option("--out", out, "structured report")->required();

  auto* verify = app.add_subcommand("verify", "oracle and finite-difference checks");
  verify->add_option("which", which, "losses|gradients|all")
      ->check(CLI::IsMember({"losses", "gradients", "all"}));
  verify->add_option("--seed", verify_seed, "instance seed");
  verify->add_option("--out", verify_out, "structured results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sentences) return RunSentences(in, out);
    if (*bucket) return RunBucket(in, windows, out_dir);
    if (*concat) return RunConcat(in, max_dur, out);
    if (*chunk) return RunChunk(in, target, cap, out);
    if (*gen) return RunGenSynth(ResolveConfig(config_opt, overrides), out_dir);
    if (*train) {
      TrainRun(ResolveConfig(config_opt, overrides), data_dir, out_dir, &std::cout);
      return kExitOk;
    }
    if (*decode) {
      DecodeOptions options;
      options.decoder = decoder == "ctc" ? DecoderKind::kCtc : DecoderKind::kTdt;
      options.unit_durations = unit_durations;
      options.max_tokens_per_frame = max_tokens_per_frame;
      const DecodeEffort e = DecodeRun(checkpoint, manifest, options, out);
      fmt::print("{} hypotheses; mean joint calls {:.2f}; frames visited / T {:.4f}\n",
                 e.num_hypotheses, e.mean_joint_calls, e.skip_ratio);
      return kExitOk;
    }
    if (*score) {
      fmt::print("{}", ScoreRun(ref, hyp, score_mode == "wer4" ? ScoreMode::kWer4 : ScoreMode::kBleu,
                                out));
      return kExitOk;
    }
    if (*verify) return RunVerify(which, verify_seed, verify_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
