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


#include "pnc/model/optimizer.h"

#include <algorithm>
#include <cmath>

#include "pnc/error.h"

namespace pnc {

double LearningRate(const TrainConfig& c, int step) {
  if (step < 1) throw InputError("learning-rate steps count from 1");
  const double s = step;
  if (c.warmup_steps == 0) return c.max_lr / std::sqrt(s);
  const double w = c.warmup_steps;
  return c.max_lr * std::min(s / w, std::sqrt(w / s));
}

AdamW::AdamW(const ModelConfig& model, const TrainConfig& train)
    : beta1_(train.beta1),
      beta2_(train.beta2),
      epsilon_(train.epsilon),
      weight_decay_(train.weight_decay),
      first_(Parameters::Zeros(model)),
      second_(Parameters::Zeros(model)) {}

void AdamW::Update(Parameters& params, const Parameters& grad, double lr) {
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, steps_);
  const double c2 = 1.0 - std::pow(beta2_, steps_);
  std::vector<const Mat*> g;
  std::vector<Mat*> m, v;
  grad.ForEach([&](const std::string&, const Mat& x) { g.push_back(&x); });
  first_.ForEach([&](const std::string&, Mat& x) { m.push_back(&x); });
  second_.ForEach([&](const std::string&, Mat& x) { v.push_back(&x); });
  std::size_t k = 0;
  params.ForEach([&](const std::string&, Mat& p) {
    Mat& mk = *m[k];
    Mat& vk = *v[k];
    const Mat& gk = *g[k];
    ++k;
    mk = beta1_ * mk + (1.0 - beta1_) * gk;
    vk = beta2_ * vk + (1.0 - beta2_) * gk.cwiseProduct(gk);
    const auto step = (mk.array() / c1) / ((vk.array() / c2).sqrt() + epsilon_);
    p.array() -= lr * (step + weight_decay_ * p.array());
  });
}

}  // namespace pnc
