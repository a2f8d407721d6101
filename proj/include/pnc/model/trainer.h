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


#ifndef PNC_MODEL_TRAINER_H_
#define PNC_MODEL_TRAINER_H_

#include <functional>
#include <span>
#include <vector>

#include "pnc/corpus/manifest.h"
#include "pnc/model/batching.h"
#include "pnc/model/network.h"
#include "pnc/model/optimizer.h"

namespace pnc {

struct TrainingExample {
  Mat features;
  int num_frames = 0;
  std::vector<int> target;
};

struct StepStats {
  int step = 0;  // optimizer updates applied so far
  double learning_rate = 0.0;
  // Means over the samples that entered the update.
  double loss_tdt = 0.0;
  double loss_ctc = 0.0;
  double loss_final = 0.0;
  int samples = 0;
  int skipped = 0;  // infeasible targets
  double grad_norm = 0.0;  // before clipping
  bool aborted = false;
};

class Trainer {
 public:
  Trainer(ModelConfig model, TrainConfig train, Parameters params);

  // One optimizer update. Each micro-batch's gradient is the mean over its
  // feasible samples of d(L_TDT + lambda * L_CTC); the update uses the mean
  // over micro-batches. A non-finite loss or gradient aborts the step and
  // leaves the parameters and step count untouched.
  StepStats Step(std::span<const TrainingExample> examples, std::span<const Batch> micro_batches);

  const Parameters& params() const { return params_; }
  const ModelConfig& model_config() const { return model_; }
  const TrainConfig& train_config() const { return train_; }
  int step() const { return step_; }

 private:
  ModelConfig model_;
  TrainConfig train_;
  Parameters params_;
  AdamW optimizer_;
  int step_ = 0;
};

struct TrainingLog {
  std::vector<StepStats> steps;
  int epochs = 0;
  int aborted_steps = 0;
};

// Runs until train_config().total_steps updates are done. Every epoch draws
// a fresh bucketed schedule and consumes it grad_accum_batches batches at a
// time. records supply the durations used for bucketing and align with
// examples.
TrainingLog Train(Trainer& trainer, std::span<const TrainingExample> examples,
                  std::span<const SegmentRecord> records,
                  const std::function<void(const StepStats&)>& on_step = {});

}  // namespace pnc

#endif  // PNC_MODEL_TRAINER_H_
