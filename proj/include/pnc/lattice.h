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

// Sequence-transduction losses (CTC, RNN-T, token-and-duration transducer)
// computed by log-domain forward-backward, with gradients taken with respect
// to the unnormalized logits.
//
// Token-and-duration lattice: states (t, u) with t in [0, T] and u in [0, U].
// From a state with t < T the joint emits a symbol together with a duration
// d from the duration set, with weight P_token(symbol | t, u) * P_dur(d | t, u).
//   token y[u] with duration d:  (t, u) -> (t + d, u + 1), needs t + d <= T
//   blank with duration d >= 1:  (t, u) -> (t + d, u),     needs t + d <= T
// The accept state is (T, U). Zero-duration tokens let several tokens share a
// frame, so forward passes walk u in ascending order inside each t.

#ifndef PNC_LATTICE_H_
#define PNC_LATTICE_H_

#include <span>
#include <vector>

#include "pnc/tensor.h"

namespace pnc {

// Per-frame CTC log-odds, shape [T][V + 1]. Blank is the last column.
struct CtcLogits {
  Tensor values;

  int num_frames() const { return values.dim(0); }
  int num_symbols() const { return values.dim(1); }
  int blank() const { return values.dim(1) - 1; }
};

struct TdtConfig {
  // Sorted, unique, non-negative; at least one entry must be >= 1.
  std::vector<int> durations = {0, 1, 2, 3, 4};
  int blank_id = 0;

  void Validate() const;
  static TdtConfig WithBlank(int blank_id, std::vector<int> durations = {0, 1, 2, 3, 4});
};

// token: [T][U + 1][V + 1], duration: [T][U + 1][|D|].
struct TdtLatticeLogits {
  Tensor token;
  Tensor duration;
};

struct HybridLossConfig {
  double lambda = 0.3;
};

struct LossResult {
  // Negative log-likelihood in nats; +inf when the target is unreachable.
  double loss = 0.0;
  bool feasible = true;
  Tensor grad_token_logits;
  // Empty for CTC and RNN-T.
  Tensor grad_duration_logits;
};

LossResult CtcLoss(const CtcLogits& logits, std::span<const int> target);

LossResult TdtLoss(const TdtLatticeLogits& logits, std::span<const int> target,
                   const TdtConfig& config);

// Standard transducer: token moves (t,u)->(t,u+1), blank moves (t,u)->(t+1,u),
// accept through a final blank from (T-1, U). token_logits: [T][U+1][V+1].
LossResult RnntLoss(const Tensor& token_logits, std::span<const int> target,
                    int blank_id);

// L_TDT + lambda * L_CTC. Infinite if either side is infeasible.
double HybridLoss(const LossResult& tdt, const LossResult& ctc,
                  const HybridLossConfig& config);

// True when no CTC path of length num_frames can produce the target.
bool CtcTargetInfeasible(int num_frames, std::span<const int> target);

struct AlignmentStep {
  int symbol = 0;
  int duration = 0;
};

struct Alignment {
  std::vector<AlignmentStep> steps;
  double probability = 0.0;
};

// Exhaustive list of token-and-duration alignments from (0, 0) to (T, U).
// Refuses instances with T > 8 or U > 4. Computes probabilities with its own
// softmax so it stays independent of the forward-backward code.
std::vector<Alignment> EnumerateAlignments(const TdtLatticeLogits& logits,
                                           std::span<const int> target,
                                           const TdtConfig& config);

}  // namespace pnc

#endif  // PNC_LATTICE_H_
