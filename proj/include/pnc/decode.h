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

#ifndef PNC_DECODE_H_
#define PNC_DECODE_H_

#include <functional>
#include <span>
#include <vector>

#include "pnc/lattice.h"

namespace pnc {

struct Hypothesis {
  std::vector<int> tokens;
  // Encoder frame each token was emitted at; non-decreasing.
  std::vector<int> emission_frames;
  int joint_calls = 0;
  int frames_visited = 0;
  int num_frames = 0;
  // Times the zero-duration cap forced the frame pointer forward.
  int forced_advances = 0;
};

struct JointOutput {
  std::vector<double> token_logits;     // V + 1 entries
  std::vector<double> duration_logits;  // |D| entries
};

// Scores the joint network at (frame, decoded prefix). Must be deterministic.
using JointScorer =
    std::function<JointOutput(int frame, std::span<const int> prefix)>;

Hypothesis GreedyCtcDecode(const CtcLogits& logits);

// Duration-skipping greedy search. Each step scores (t, prefix), appends the
// argmax token unless it is blank, then advances t by the argmax duration.
// Blank always advances by at least one frame; after max_tokens_per_frame
// consecutive zero-duration tokens the pointer is forced forward by one.
Hypothesis GreedyTdtDecode(const JointScorer& scorer, int num_frames,
                           const TdtConfig& config, int max_tokens_per_frame = 10);

// Wraps a scorer so its duration head collapses to a single slot; decode the
// result with durations {1} to get the frame-by-frame baseline.
JointScorer UnitDurationScorer(JointScorer scorer);

struct DecodeEffort {
  double mean_joint_calls = 0.0;
  double mean_frames_visited = 0.0;
  // Mean over hypotheses of frames_visited / num_frames.
  double skip_ratio = 0.0;
  int num_hypotheses = 0;
};

DecodeEffort SummarizeDecodeEffort(std::span<const Hypothesis> hyps);

}  // namespace pnc

#endif  // PNC_DECODE_H_
