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


#ifndef PNC_MODEL_OPTIMIZER_H_
#define PNC_MODEL_OPTIMIZER_H_

#include "pnc/model/parameters.h"

namespace pnc {

// Inverse square-root schedule with linear warmup; step counts from 1.
// lr(step) = max_lr * min(step / warmup, sqrt(warmup / step)).
// With warmup_steps = 0 this is max_lr / sqrt(step).
double LearningRate(const TrainConfig& config, int step);

// Adam moments with decoupled weight decay applied to every tensor.
class AdamW {
 public:
  AdamW(const ModelConfig& model, const TrainConfig& train);

  void Update(Parameters& params, const Parameters& grad, double lr);
  int steps() const { return steps_; }

 private:
  double beta1_, beta2_, epsilon_, weight_decay_;
  Parameters first_, second_;
  int steps_ = 0;
};

}  // namespace pnc

#endif  // PNC_MODEL_OPTIMIZER_H_
