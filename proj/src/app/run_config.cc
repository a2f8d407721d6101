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


#include "pnc/app/run_config.h"

#include <fstream>
#include <sstream>

#include "pnc/error.h"

namespace pnc {

using nlohmann::ordered_json;

namespace {

template <typename T>
void Read(const ordered_json& j, const std::string& key, T& out) {
  try {
    out = j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config key '" + key + "': " + e.what());
  }
}

const char* ModeName(SegmentationMode m) {
  return m == SegmentationMode::kComplete ? "complete" : "partial";
}

}  // namespace

ordered_json ToJson(const SyntheticConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["num_train_documents"] = c.num_train_documents;
  j["num_test_documents"] = c.num_test_documents;
  j["min_sentences_per_document"] = c.min_sentences_per_document;
  j["max_sentences_per_document"] = c.max_sentences_per_document;
  j["min_words_per_sentence"] = c.min_words_per_sentence;
  j["max_words_per_sentence"] = c.max_words_per_sentence;
  j["comma_probability"] = c.comma_probability;
  j["question_probability"] = c.question_probability;
  j["exclamation_probability"] = c.exclamation_probability;
  j["min_frames_per_token"] = c.min_frames_per_token;
  j["max_frames_per_token"] = c.max_frames_per_token;
  j["subsample_factor"] = c.subsample_factor;
  j["feature_dim"] = c.feature_dim;
  j["noise_sigma"] = c.noise_sigma;
  j["frame_shift_sec"] = c.frame_shift_sec;
  j["mode"] = ModeName(c.mode);
  j["windows"] = ordered_json::array();
  for (const DurationWindow& w : c.windows) {
    j["windows"].push_back({{"lo_sec", w.lo_sec}, {"hi_sec", w.hi_sec}});
  }
  j["min_segment_sec"] = c.min_segment_sec;
  j["onset_hides_case"] = c.onset_hides_case;
  return j;
}

void FromJson(const ordered_json& j, SyntheticConfig& c) {
  if (!j.is_object()) throw InputError("synth config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") Read(value, key, c.seed);
    else if (key == "num_train_documents") Read(value, key, c.num_train_documents);
    else if (key == "num_test_documents") Read(value, key, c.num_test_documents);
    else if (key == "min_sentences_per_document") Read(value, key, c.min_sentences_per_document);
    else if (key == "max_sentences_per_document") Read(value, key, c.max_sentences_per_document);
    else if (key == "min_words_per_sentence") Read(value, key, c.min_words_per_sentence);
    else if (key == "max_words_per_sentence") Read(value, key, c.max_words_per_sentence);
    else if (key == "comma_probability") Read(value, key, c.comma_probability);
    else if (key == "question_probability") Read(value, key, c.question_probability);
    else if (key == "exclamation_probability") Read(value, key, c.exclamation_probability);
    else if (key == "min_frames_per_token") Read(value, key, c.min_frames_per_token);
    else if (key == "max_frames_per_token") Read(value, key, c.max_frames_per_token);
    else if (key == "subsample_factor") Read(value, key, c.subsample_factor);
    else if (key == "feature_dim") Read(value, key, c.feature_dim);
    else if (key == "noise_sigma") Read(value, key, c.noise_sigma);
    else if (key == "frame_shift_sec") Read(value, key, c.frame_shift_sec);
    else if (key == "mode") {
      std::string mode;
      Read(value, key, mode);
      if (mode == "complete") c.mode = SegmentationMode::kComplete;
      else if (mode == "partial") c.mode = SegmentationMode::kPartial;
      else throw InputError("synth mode must be 'complete' or 'partial'");
    }
    else if (key == "windows") {
      if (!value.is_array()) throw InputError("windows must be a list");
      c.windows.clear();
      for (const ordered_json& row : value) {
        DurationWindow w;
        Read(row.value("lo_sec", ordered_json()), "lo_sec", w.lo_sec);
        Read(row.value("hi_sec", ordered_json()), "hi_sec", w.hi_sec);
        c.windows.push_back(w);
      }
    }
    else if (key == "min_segment_sec") Read(value, key, c.min_segment_sec);
    else if (key == "onset_hides_case") Read(value, key, c.onset_hides_case);
    else throw InputError("unknown synth config key '" + key + "'");
  }
  c.Validate();
}

ordered_json ToJson(const RunConfig& c) {
  ordered_json j;
  j["model"] = ToJson(c.model);
  j["train"] = ToJson(c.train);
  j["synth"] = ToJson(c.synth);
  j["run"] = {{"log_every", c.run.log_every}, {"checkpoint_every", c.run.checkpoint_every}};
  return j;
}

RunConfig RunConfigFromJson(const ordered_json& j) {
  if (!j.is_object()) throw InputError("run config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "model") FromJson(value, c.model);
    else if (key == "train") FromJson(value, c.train);
    else if (key == "synth") FromJson(value, c.synth);
    else if (key == "run") {
      if (!value.is_object()) throw InputError("run section must be an object");
      for (const auto& [k, v] : value.items()) {
        if (k == "log_every") Read(v, k, c.run.log_every);
        else if (k == "checkpoint_every") Read(v, k, c.run.checkpoint_every);
        else throw InputError("unknown run key '" + k + "'");
      }
    }
    else throw InputError("unknown config section '" + key + "'");
  }
  if (c.run.log_every < 1 || c.run.checkpoint_every < 0) {
    throw InputError("log_every must be >= 1 and checkpoint_every >= 0");
  }
  return c;
}

ordered_json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + " is not valid JSON: " + e.what());
  }
}

RunConfig ReadRunConfig(const std::filesystem::path& path) {
  return RunConfigFromJson(ReadJsonFile(path));
}

void WriteJsonFile(const std::filesystem::path& path, const ordered_json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace pnc
