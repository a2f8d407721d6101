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

#include <cmath>

#include "pnc/error.h"
#include "pnc/lattice.h"

namespace pnc {
namespace {

std::vector<double> Softmax(std::span<const double> row) {
  double max = row[0];
  for (double v : row) max = v > max ? v : max;
  std::vector<double> p(row.size());
  double total = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    p[i] = std::exp(row[i] - max);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

struct Walker {
  const TdtLatticeLogits& logits;
  std::span<const int> target;
  const TdtConfig& config;
  int num_frames;
  std::vector<Alignment> out;
  std::vector<AlignmentStep> steps;

  void Visit(int t, int u, double prob) {
    const int num_tokens = static_cast<int>(target.size());
    if (t == num_frames) {
      if (u == num_tokens) out.push_back({steps, prob});
      return;
    }
    const std::vector<double> p_tok = Softmax(logits.token.Row(t, u));
    const std::vector<double> p_dur = Softmax(logits.duration.Row(t, u));
    for (std::size_t j = 0; j < config.durations.size(); ++j) {
      const int d = config.durations[j];
      if (t + d > num_frames) continue;
      if (u < num_tokens) {
        steps.push_back({target[u], d});
        Visit(t + d, u + 1, prob * p_tok[target[u]] * p_dur[j]);
        steps.pop_back();
      }
      if (d >= 1) {
        steps.push_back({config.blank_id, d});
        Visit(t + d, u, prob * p_tok[config.blank_id] * p_dur[j]);
        steps.pop_back();
      }
    }
  }
};

}  // namespace

std::vector<Alignment> EnumerateAlignments(const TdtLatticeLogits& logits,
                                           std::span<const int> target,
                                           const TdtConfig& config) {
  config.Validate();
  const int num_frames = logits.token.dim(0);
  const int num_tokens = static_cast<int>(target.size());
  if (num_frames > 8 || num_tokens > 4) {
    throw InputError("alignment enumeration refused: T > 8 or U > 4");
  }
  if (logits.token.dim(1) != num_tokens + 1 ||
      logits.duration.dim(1) != num_tokens + 1 ||
      logits.duration.dim(2) != static_cast<int>(config.durations.size())) {
    throw InputError("logit grid shape does not match target and durations");
  }
  Walker walker{logits, target, config, num_frames, {}, {}};
  walker.Visit(0, 0, 1.0);
  return std::move(walker.out);
}

}  // namespace pnc
