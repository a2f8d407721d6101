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


#ifndef PNC_MODEL_CONFIG_H_
#define PNC_MODEL_CONFIG_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "pnc/corpus/segments.h"
#include "pnc/lattice.h"

namespace pnc {

struct ModelConfig {
  int feature_dim = 8;
  int hidden_dim = 32;
  int num_blocks = 2;
  // Unset means full attention; otherwise frame i sees frames j with
  // |i - j| <= window.
  std::optional<int> attention_window;
  int subsample_factor = 8;
  int vocab_size = 40;
  std::vector<int> durations = {0, 1, 2, 3, 4};
  int predictor_dim = 32;
  std::uint64_t seed = 1;

  void Validate() const;
  int blank_id() const { return vocab_size; }
  TdtConfig tdt() const { return TdtConfig::WithBlank(vocab_size, durations); }
  int EncodedFrames(int input_frames) const {
    return (input_frames + subsample_factor - 1) / subsample_factor;
  }
};

struct BucketBatchSize {
  DurationWindow window;
  int batch_size = 1;
};

struct TrainConfig {
  double max_lr = 3e-4;
  int warmup_steps = 100;
  int total_steps = 1000;
  double weight_decay = 1e-2;
  double lambda = 0.3;
  int grad_accum_batches = 2;
  std::vector<BucketBatchSize> bucket_batch_sizes = {{{0.0, 10.0}, 16}, {{10.0, 20.0}, 8}};
  std::uint64_t seed = 1;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-9;
  // Global gradient-norm clip; 0 disables it.
  double grad_clip_norm = 0.0;

  void Validate() const;
};

// JSON forms used by run configs and checkpoints. Unknown keys are rejected;
// missing keys keep their defaults.
nlohmann::ordered_json ToJson(const ModelConfig& config);
nlohmann::ordered_json ToJson(const TrainConfig& config);
void FromJson(const nlohmann::ordered_json& j, ModelConfig& config);
void FromJson(const nlohmann::ordered_json& j, TrainConfig& config);

}  // namespace pnc

#endif  // PNC_MODEL_CONFIG_H_
