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


#ifndef PNC_APP_RUN_CONFIG_H_
#define PNC_APP_RUN_CONFIG_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "pnc/corpus/synthetic.h"
#include "pnc/model/config.h"

namespace pnc {

struct RunOptions {
  int log_every = 10;
  int checkpoint_every = 0;  // 0: final checkpoint only
};

// Everything a train run depends on. The echoed copy in an output directory
// reproduces the run on its own.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  SyntheticConfig synth;
  RunOptions run;
};

nlohmann::ordered_json ToJson(const SyntheticConfig& config);
void FromJson(const nlohmann::ordered_json& j, SyntheticConfig& config);

nlohmann::ordered_json ToJson(const RunConfig& config);
// Sections and keys not present keep their defaults.
RunConfig RunConfigFromJson(const nlohmann::ordered_json& j);
RunConfig ReadRunConfig(const std::filesystem::path& path);

// Pretty JSON with a trailing newline, written atomically enough for a
// single-process tool (truncate and write).
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::ordered_json& j);
nlohmann::ordered_json ReadJsonFile(const std::filesystem::path& path);

}  // namespace pnc

#endif  // PNC_APP_RUN_CONFIG_H_
