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


#include "pnc/app/pipeline.h"

#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "pnc/error.h"
#include "pnc/model/checkpoint.h"
#include "pnc/parallel.h"

namespace pnc {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

Vocabulary ReadVocabulary(const fs::path& path) {
  const ordered_json j = ReadJsonFile(path);
  if (!j.is_object() || j.value("schema", "") != "pnclab.vocab.v1" || !j.contains("tokens")) {
    throw DataError(path.string() + " is not a pnclab vocabulary");
  }
  try {
    return Vocabulary(j.at("tokens").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LoadedSplit LoadSplit(const fs::path& manifest, const Vocabulary& vocab, int feature_dim,
                      bool with_targets) {
  LoadedSplit split;
  split.records = ReadManifest(manifest);
  split.examples.resize(split.records.size());
  ParallelFor(static_cast<int>(split.records.size()), [&](int i) {
    const SegmentRecord& r = split.records[i];
    if (!r.feature_ref) throw DataError("record " + r.segment_id + " has no feature_ref");
    const FeatureMatrix f = ReadFeatureFile(ResolveFeaturePath(manifest, r));
    if (f.dim != feature_dim) {
      throw DataError(fmt::format("{}: feature dim {} but the model expects {}", r.segment_id,
                                  f.dim, feature_dim));
    }
    if (f.num_frames < 1) throw DataError(r.segment_id + " has no frames");
    TrainingExample& ex = split.examples[i];
    ex.features = FeaturesToMat(f);
    ex.num_frames = f.num_frames;
    if (with_targets) ex.target = vocab.Encode(r.text);
  });
  return split;
}

LoadedSplit SplitFromSynthetic(const SyntheticSplit& s) {
  LoadedSplit split;
  split.records = s.records;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    TrainingExample ex;
    ex.features = FeaturesToMat(s.features[i]);
    ex.num_frames = s.features[i].num_frames;
    ex.target = s.tokens[i];
    split.examples.push_back(std::move(ex));
  }
  return split;
}

std::vector<Hypothesis> DecodeExamples(const Parameters& params, const ModelConfig& config,
                                       std::span<const TrainingExample> examples,
                                       const DecodeOptions& options) {
  std::vector<Hypothesis> hyps(examples.size());
  ParallelFor(static_cast<int>(examples.size()), [&](int i) {
    const Mat encoded = Encode(params, config, examples[i].features, examples[i].num_frames);
    if (options.decoder == DecoderKind::kCtc) {
      hyps[i] = GreedyCtcDecode(CtcHead(params, encoded));
      return;
    }
    JointScorer scorer = MakeJointScorer(params, config, encoded);
    if (options.unit_durations) {
      hyps[i] = GreedyTdtDecode(UnitDurationScorer(std::move(scorer)),
                                static_cast<int>(encoded.rows()),
                                TdtConfig::WithBlank(config.blank_id(), {1}),
                                options.max_tokens_per_frame);
    } else {
      hyps[i] = GreedyTdtDecode(scorer, static_cast<int>(encoded.rows()), config.tdt(),
                                options.max_tokens_per_frame);
    }
  });
  return hyps;
}

Parameters TrainOnSplit(const RunConfig& config, const LoadedSplit& split,
                        const std::function<void(const StepStats&)>& on_step) {
  Trainer trainer(config.model, config.train, Parameters::Initialize(config.model));
  Train(trainer, split.examples, split.records, on_step);
  return trainer.params();
}

namespace {

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

ordered_json StepJson(const StepStats& s) {
  ordered_json j;
  j["step"] = s.step;
  j["learning_rate"] = s.learning_rate;
  j["loss_tdt"] = s.loss_tdt;
  j["loss_ctc"] = s.loss_ctc;
  j["loss_final"] = s.loss_final;
  j["samples"] = s.samples;
  j["skipped"] = s.skipped;
  j["grad_norm"] = s.grad_norm;
  j["aborted"] = s.aborted;
  return j;
}

fs::path Sibling(const fs::path& out, const std::string& suffix) {
  return fs::path(out.string() + suffix);
}

const char* DecoderName(DecoderKind k) { return k == DecoderKind::kCtc ? "ctc" : "tdt"; }

}  // namespace

Parameters TrainRun(const RunConfig& config, const fs::path& data_dir, const fs::path& out_dir,
                    std::ostream* progress) {
  const Vocabulary vocab = ReadVocabulary(data_dir / "vocab.json");
  if (vocab.size() != config.model.vocab_size) {
    throw InputError(fmt::format("model vocab_size {} but {} lists {} tokens",
                                 config.model.vocab_size, (data_dir / "vocab.json").string(),
                                 vocab.size()));
  }
  const LoadedSplit split =
      LoadSplit(data_dir / "train" / "manifest.jsonl", vocab, config.model.feature_dim);

  fs::create_directories(out_dir);
  WriteJsonFile(out_dir / "config.json", ToJson(config));
  std::ofstream log = OpenOut(out_dir / "train_log.jsonl");

  Trainer trainer(config.model, config.train, Parameters::Initialize(config.model));
  auto on_step = [&](const StepStats& s) {
    log << StepJson(s).dump() << '\n';
    if (progress && !s.aborted && (s.step % config.run.log_every == 0 || s.step == 1)) {
      *progress << fmt::format("step {:>6}  lr {:.3e}  tdt {:.4f}  ctc {:.4f}  final {:.4f}\n",
                               s.step, s.learning_rate, s.loss_tdt, s.loss_ctc, s.loss_final);
    }
    if (progress && s.aborted) *progress << "step aborted: non-finite loss or gradient\n";
    if (!s.aborted && config.run.checkpoint_every > 0 &&
        s.step % config.run.checkpoint_every == 0 && s.step < config.train.total_steps) {
      SaveCheckpoint({config.model, vocab.tokens(), s.step, trainer.params()},
                     out_dir / fmt::format("step-{}.ckpt", s.step));
    }
  };
  const TrainingLog result = Train(trainer, split.examples, split.records, on_step);
  if (progress) {
    *progress << fmt::format("trained {} steps over {} epochs ({} aborted)\n", trainer.step(),
                             result.epochs, result.aborted_steps);
  }
  SaveCheckpoint({config.model, vocab.tokens(), trainer.step(), trainer.params()},
                 out_dir / "model.ckpt");
  return trainer.params();
}

std::string FormatHypothesisLine(const SegmentRecord& record, const std::string& text,
                                 const Hypothesis& hyp) {
  ordered_json j;
  j["segment_id"] = record.segment_id;
  j["text"] = text;
  j["num_frames"] = hyp.num_frames;
  j["frames_visited"] = hyp.frames_visited;
  j["joint_calls"] = hyp.joint_calls;
  j["forced_advances"] = hyp.forced_advances;
  return j.dump();
}

DecodeEffort DecodeRun(const fs::path& checkpoint, const fs::path& manifest,
                       const DecodeOptions& options, const fs::path& out) {
  const Checkpoint ck = LoadCheckpoint(checkpoint);
  const Vocabulary vocab(ck.vocabulary);
  const LoadedSplit split = LoadSplit(manifest, vocab, ck.model.feature_dim, false);
  const std::vector<Hypothesis> hyps = DecodeExamples(ck.params, ck.model, split.examples, options);

  std::ofstream lines = OpenOut(out);
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    lines << FormatHypothesisLine(split.records[i], vocab.Decode(hyps[i].tokens), hyps[i]) << '\n';
  }
  if (!lines) throw DataError("failed writing " + out.string());

  DecodeEffort effort;
  if (!hyps.empty()) effort = SummarizeDecodeEffort(hyps);
  ordered_json e;
  e["schema"] = "pnclab.decode_effort.v1";
  e["decoder"] = DecoderName(options.decoder);
  e["durations"] = options.decoder == DecoderKind::kCtc ? ordered_json()
                   : options.unit_durations        ? ordered_json(std::vector<int>{1})
                                                   : ordered_json(ck.model.durations);
  e["num_hypotheses"] = effort.num_hypotheses;
  e["mean_joint_calls"] = effort.mean_joint_calls;
  e["mean_frames_visited"] = effort.mean_frames_visited;
  e["skip_ratio"] = effort.skip_ratio;
  WriteJsonFile(Sibling(out, ".effort.json"), e);

  ordered_json echo;
  echo["command"] = "decode";
  echo["checkpoint"] = checkpoint.string();
  echo["manifest"] = manifest.string();
  echo["decoder"] = DecoderName(options.decoder);
  echo["unit_durations"] = options.unit_durations;
  echo["max_tokens_per_frame"] = options.max_tokens_per_frame;
  echo["model"] = ToJson(ck.model);
  WriteJsonFile(Sibling(out, ".config.json"), echo);
  return effort;
}

TextPairs PairWithReferences(std::span<const SegmentRecord> refs, const fs::path& hyp_file) {
  std::ifstream in(hyp_file);
  if (!in) throw DataError("cannot open " + hyp_file.string());
  std::map<std::string, std::string> by_id;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const ordered_json j = ordered_json::parse(line);
      const std::string id = j.at("segment_id").get<std::string>();
      if (!by_id.emplace(id, j.at("text").get<std::string>()).second) {
        throw DataError(fmt::format("{}:{}: duplicate segment_id {}", hyp_file.string(), line_no, id));
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("{}:{}: {}", hyp_file.string(), line_no, e.what()));
    }
  }
  if (by_id.empty()) throw DataError("empty hypothesis set in " + hyp_file.string());
  TextPairs pairs;
  for (const SegmentRecord& r : refs) {
    auto it = by_id.find(r.segment_id);
    if (it == by_id.end()) throw DataError("no hypothesis for segment " + r.segment_id);
    pairs.refs.push_back(r.text);
    pairs.hyps.push_back(it->second);
  }
  if (pairs.refs.size() != by_id.size()) {
    throw DataError("hypothesis file has segments missing from the reference manifest");
  }
  return pairs;
}

std::string ScoreRun(const fs::path& ref_manifest, const fs::path& hyp_file, ScoreMode mode,
                     const fs::path& out) {
  const std::vector<SegmentRecord> refs = ReadManifest(ref_manifest);
  const TextPairs pairs = PairWithReferences(refs, hyp_file);
  std::string table, structured;
  if (mode == ScoreMode::kWer4) {
    const EvalReport report = EvaluateCorpus(pairs.refs, pairs.hyps);
    table = EmitReport(report, ReportFormat::kTable);
    structured = EmitReport(report, ReportFormat::kJson);
  } else {
    const BleuResult bleu = Bleu(pairs.refs, pairs.hyps);
    table = EmitReport(bleu, ReportFormat::kTable);
    structured = EmitReport(bleu, ReportFormat::kJson);
  }
  std::ofstream o = OpenOut(out);
  o << structured;
  if (!o) throw DataError("failed writing " + out.string());
  ordered_json echo;
  echo["command"] = "score";
  echo["ref_manifest"] = ref_manifest.string();
  echo["hyp_file"] = hyp_file.string();
  echo["mode"] = mode == ScoreMode::kWer4 ? "wer4" : "bleu";
  WriteJsonFile(Sibling(out, ".config.json"), echo);
  return table;
}

}  // namespace pnc
