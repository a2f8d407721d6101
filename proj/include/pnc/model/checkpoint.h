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


#ifndef PNC_MODEL_CHECKPOINT_H_
#define PNC_MODEL_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "pnc/model/parameters.h"

namespace pnc {

struct Checkpoint {
  ModelConfig model;
  std::vector<std::string> vocabulary;
  int step = 0;
  Parameters params;
};

// Layout (see docs/formats.md):
//   line 1: "pnclab-checkpoint 1"
//   line 2: compact JSON header with model config, vocabulary, step and the
//           ordered tensor list (name, rows, cols)
//   rest:   every tensor in header order, row-major float64 little-endian
void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace pnc

#endif  // PNC_MODEL_CHECKPOINT_H_
