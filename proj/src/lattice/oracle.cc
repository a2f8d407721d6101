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

#include "pnc/oracle.h"

#include <algorithm>
#include <cmath>

#include "pnc/error.h"

namespace pnc::oracle {
namespace {

std::vector<double> Softmax(std::span<const double> row) {
  double max = row[0];
  for (double v : row) max = std::max(max, v);
  std::vector<double> p(row.size());
  double total = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    p[i] = std::exp(row[i] - max);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

void WalkRnnt(const Tensor& logits, std::span<const int> target, int blank,
              int t, int u, double prob, double& total) {
  const int num_frames = logits.dim(0);
  const int num_tokens = static_cast<int>(target.size());
  const std::vector<double> p = Softmax(logits.Row(t, u));
  if (u < num_tokens) {
    WalkRnnt(logits, target, blank, t, u + 1, prob * p[target[u]], total);
  }
  if (t + 1 < num_frames) {
    WalkRnnt(logits, target, blank, t + 1, u, prob * p[blank], total);
  } else if (u == num_tokens) {
    total += prob * p[blank];
  }
}

}  // namespace

std::vector<int> CollapseCtcPath(std::span<const int> path, int blank) {
  std::vector<int> out;
  int previous = -1;
  for (int symbol : path) {
    if (symbol != previous && symbol != blank) out.push_back(symbol);
    previous = symbol;
  }
  return out;
}

double CtcLossByEnumeration(const Tensor& logits, std::span<const int> target) {
  const int num_frames = logits.dim(0);
  const int num_symbols = logits.dim(1);
  const int blank = num_symbols - 1;
  double count = std::pow(static_cast<double>(num_symbols), num_frames);
  if (count > (1 << 20)) throw InputError("CTC enumeration too large");

  std::vector<std::vector<double>> probs;
  for (int t = 0; t < num_frames; ++t) probs.push_back(Softmax(logits.Row(t)));

  const std::vector<int> wanted(target.begin(), target.end());
  std::vector<int> path(num_frames, 0);
  double total = 0.0;
  while (true) {
    if (CollapseCtcPath(path, blank) == wanted) {
      double p = 1.0;
      for (int t = 0; t < num_frames; ++t) p *= probs[t][path[t]];
      total += p;
    }
    // Odometer increment over (V+1)^T paths.
    int t = 0;
    while (t < num_frames && ++path[t] == num_symbols) path[t++] = 0;
    if (t == num_frames) break;
  }
  return -std::log(total);
}

double RnntLossByEnumeration(const Tensor& logits, std::span<const int> target,
                             int blank_id) {
  if (logits.dim(0) > 10 || target.size() > 6) {
    throw InputError("RNN-T enumeration too large");
  }
  double total = 0.0;
  WalkRnnt(logits, target, blank_id, 0, 0, 1.0, total);
  return -std::log(total);
}

Tensor FiniteDifferenceGradient(const std::function<double(const Tensor&)>& f,
                                const Tensor& x, double step) {
  Tensor grad(x.shape());
  Tensor probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = probe.data()[i];
    probe.data()[i] = saved + step;
    const double up = f(probe);
    probe.data()[i] = saved - step;
    const double down = f(probe);
    probe.data()[i] = saved;
    grad.data()[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

double RelativeError(double a, double b, double floor) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace pnc::oracle
