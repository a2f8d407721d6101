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

#include "pnc/decode.h"

#include <algorithm>
#include <string>

#include "pnc/error.h"

namespace pnc {
namespace {

int ArgMax(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Hypothesis GreedyCtcDecode(const CtcLogits& logits) {
  const Tensor& x = logits.values;
  if (x.rank() != 2 || x.dim(0) < 1 || x.dim(1) < 2) {
    throw InputError("CTC logits must be [T >= 1][V + 1 >= 2]");
  }
  if (!x.AllFinite()) throw InputError("CTC logits contain non-finite values");
  const int blank = logits.blank();
  Hypothesis hyp;
  hyp.num_frames = logits.num_frames();
  hyp.joint_calls = hyp.num_frames;
  hyp.frames_visited = hyp.num_frames;
  int previous = -1;
  for (int t = 0; t < hyp.num_frames; ++t) {
    const int k = ArgMax(x.Row(t));
    if (k != blank && k != previous) {
      hyp.tokens.push_back(k);
      hyp.emission_frames.push_back(t);
    }
    previous = k;
  }
  return hyp;
}

Hypothesis GreedyTdtDecode(const JointScorer& scorer, int num_frames,
                           const TdtConfig& config, int max_tokens_per_frame) {
  config.Validate();
  if (num_frames < 1) throw InputError("decode needs at least one frame");
  if (max_tokens_per_frame < 1) throw InputError("max_tokens_per_frame must be >= 1");

  Hypothesis hyp;
  hyp.num_frames = num_frames;
  int t = 0;
  int last_visited = -1;
  int zero_run = 0;
  while (t < num_frames) {
    const JointOutput out = scorer(t, hyp.tokens);
    ++hyp.joint_calls;
    if (t != last_visited) {
      ++hyp.frames_visited;
      last_visited = t;
    }
    if (out.duration_logits.size() != config.durations.size()) {
      throw InputError("scorer returned " + std::to_string(out.duration_logits.size()) +
                       " duration logits, expected " +
                       std::to_string(config.durations.size()));
    }
    if (config.blank_id >= static_cast<int>(out.token_logits.size())) {
      throw InputError("scorer token logits do not cover the blank id");
    }
    const int k = ArgMax(out.token_logits);
    const int d = config.durations[ArgMax(out.duration_logits)];
    int advance = d;
    if (k == config.blank_id) {
      advance = std::max(d, 1);
    } else {
      hyp.tokens.push_back(k);
      hyp.emission_frames.push_back(t);
      if (d == 0 && ++zero_run >= max_tokens_per_frame) {
        advance = 1;
        ++hyp.forced_advances;
      }
    }
    if (advance > 0) zero_run = 0;
    t += advance;
  }
  return hyp;
}

JointScorer UnitDurationScorer(JointScorer scorer) {
  return [inner = std::move(scorer)](int frame, std::span<const int> prefix) {
    JointOutput out = inner(frame, prefix);
    out.duration_logits.assign(1, 0.0);
    return out;
  };
}

DecodeEffort SummarizeDecodeEffort(std::span<const Hypothesis> hyps) {
  if (hyps.empty()) throw InputError("effort summary needs at least one hypothesis");
  DecodeEffort e;
  e.num_hypotheses = static_cast<int>(hyps.size());
  for (const Hypothesis& h : hyps) {
    if (h.num_frames < 1) throw InputError("hypothesis without frame count");
    e.mean_joint_calls += h.joint_calls;
    e.mean_frames_visited += h.frames_visited;
    e.skip_ratio += static_cast<double>(h.frames_visited) / h.num_frames;
  }
  e.mean_joint_calls /= e.num_hypotheses;
  e.mean_frames_visited /= e.num_hypotheses;
  e.skip_ratio /= e.num_hypotheses;
  return e;
}

}  // namespace pnc
