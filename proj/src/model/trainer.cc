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


#include "pnc/model/trainer.h"

#include <cmath>

#include "pnc/error.h"
#include "pnc/parallel.h"

namespace pnc {

Trainer::Trainer(ModelConfig model, TrainConfig train, Parameters params)
    : model_(std::move(model)),
      train_(std::move(train)),
      params_(std::move(params)),
      optimizer_(model_, train_) {
  model_.Validate();
  train_.Validate();
}

StepStats Trainer::Step(std::span<const TrainingExample> examples,
                        std::span<const Batch> micro_batches) {
  const LossWeights weights{1.0, train_.lambda};
  StepStats stats;
  stats.step = step_;
  Parameters total = Parameters::Zeros(model_);
  int contributing_batches = 0;
  bool finite = true;

  for (const Batch& batch : micro_batches) {
    const int n = static_cast<int>(batch.indices.size());
    std::vector<Parameters> grads(n);
    std::vector<SampleLosses> losses(n);
    ParallelFor(n, [&](int i) {
      const TrainingExample& ex = examples[batch.indices[i]];
      grads[i] = Parameters::Zeros(model_);
      losses[i] = ForwardBackward(params_, model_, ex.features, ex.num_frames, ex.target,
                                  weights, &grads[i]);
    });
    // Fixed-order reduction keeps results independent of the thread count.
    Parameters batch_grad = Parameters::Zeros(model_);
    int used = 0;
    for (int i = 0; i < n; ++i) {
      if (!losses[i].feasible) {
        ++stats.skipped;
        continue;
      }
      if (!std::isfinite(losses[i].total)) finite = false;
      batch_grad.Axpy(1.0, grads[i]);
      stats.loss_tdt += losses[i].tdt;
      stats.loss_ctc += losses[i].ctc;
      stats.loss_final += losses[i].total;
      ++used;
    }
    if (used == 0) continue;
    total.Axpy(1.0 / used, batch_grad);
    stats.samples += used;
    ++contributing_batches;
  }

  if (stats.samples > 0) {
    stats.loss_tdt /= stats.samples;
    stats.loss_ctc /= stats.samples;
    stats.loss_final /= stats.samples;
  }
  if (contributing_batches == 0) {
    stats.aborted = true;
    return stats;
  }
  total.Scale(1.0 / contributing_batches);
  stats.grad_norm = std::sqrt(total.SquaredNorm());
  if (!finite || !std::isfinite(stats.grad_norm)) {
    stats.aborted = true;
    return stats;
  }
  if (train_.grad_clip_norm > 0.0 && stats.grad_norm > train_.grad_clip_norm) {
    total.Scale(train_.grad_clip_norm / stats.grad_norm);
  }

  stats.learning_rate = LearningRate(train_, step_ + 1);
  Parameters updated = params_;
  AdamW optimizer_backup = optimizer_;
  optimizer_.Update(updated, total, stats.learning_rate);
  if (!updated.AllFinite()) {
    optimizer_ = std::move(optimizer_backup);
    stats.aborted = true;
    return stats;
  }
  params_ = std::move(updated);
  stats.step = ++step_;
  return stats;
}

TrainingLog Train(Trainer& trainer, std::span<const TrainingExample> examples,
                  std::span<const SegmentRecord> records,
                  const std::function<void(const StepStats&)>& on_step) {
  if (examples.size() != records.size()) {
    throw InputError("examples and records must align");
  }
  const TrainConfig& cfg = trainer.train_config();
  TrainingLog log;
  int consecutive_aborts = 0;
  while (trainer.step() < cfg.total_steps) {
    const BatchSchedule schedule = BucketBatches(
        records, cfg.bucket_batch_sizes, cfg.seed * 1000003u + static_cast<std::uint64_t>(log.epochs));
    ++log.epochs;
    if (schedule.batches.empty()) throw DataError("no training record falls in any bucket");
    const std::span<const Batch> batches(schedule.batches);
    for (std::size_t start = 0; start < batches.size() && trainer.step() < cfg.total_steps;
         start += cfg.grad_accum_batches) {
      const std::size_t count =
          std::min<std::size_t>(cfg.grad_accum_batches, batches.size() - start);
      const StepStats stats = trainer.Step(examples, batches.subspan(start, count));
      log.steps.push_back(stats);
      if (on_step) on_step(stats);
      if (stats.aborted) {
        ++log.aborted_steps;
        if (++consecutive_aborts >= 5) {
          throw NumericalError("five consecutive training steps produced non-finite values");
        }
      } else {
        consecutive_aborts = 0;
      }
    }
  }
  return log;
}

}  // namespace pnc
