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


#include "pnc/model/config.h"

#include <fmt/format.h>

#include "pnc/error.h"

namespace pnc {

using nlohmann::ordered_json;

void ModelConfig::Validate() const {
  if (feature_dim < 1 || hidden_dim < 1 || num_blocks < 0 || vocab_size < 1 ||
      predictor_dim < 1) {
    throw InputError("model dimensions must be positive");
  }
  if (subsample_factor < 1) throw InputError("subsample_factor must be >= 1");
  if (attention_window && *attention_window < 1) {
    throw InputError("attention window must be >= 1");
  }
  tdt().Validate();
}

void TrainConfig::Validate() const {
  if (!(max_lr > 0.0)) throw InputError("max_lr must be positive");
  if (warmup_steps < 0 || total_steps < 1 || warmup_steps > total_steps) {
    throw InputError("need 0 <= warmup_steps <= total_steps and total_steps >= 1");
  }
  if (weight_decay < 0.0) throw InputError("weight_decay must be non-negative");
  if (lambda < 0.0) throw InputError("lambda must be non-negative");
  if (grad_accum_batches < 1) throw InputError("grad_accum_batches must be >= 1");
  if (bucket_batch_sizes.empty()) throw InputError("bucket_batch_sizes is empty");
  for (const BucketBatchSize& b : bucket_batch_sizes) {
    if (b.batch_size < 1) throw InputError("batch sizes must be >= 1");
  }
  std::vector<DurationWindow> windows;
  for (const BucketBatchSize& b : bucket_batch_sizes) windows.push_back(b.window);
  ValidateWindows(windows);
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0)) {
    throw InputError("invalid optimizer moments");
  }
  if (grad_clip_norm < 0.0) throw InputError("grad_clip_norm must be non-negative");
}

ordered_json ToJson(const ModelConfig& c) {
  ordered_json j;
  j["feature_dim"] = c.feature_dim;
  j["hidden_dim"] = c.hidden_dim;
  j["num_blocks"] = c.num_blocks;
  j["attention_window"] = c.attention_window ? ordered_json(*c.attention_window) : ordered_json();
  j["subsample_factor"] = c.subsample_factor;
  j["vocab_size"] = c.vocab_size;
  j["durations"] = c.durations;
  j["predictor_dim"] = c.predictor_dim;
  j["seed"] = c.seed;
  return j;
}

ordered_json ToJson(const TrainConfig& c) {
  ordered_json j;
  j["max_lr"] = c.max_lr;
  j["warmup_steps"] = c.warmup_steps;
  j["total_steps"] = c.total_steps;
  j["weight_decay"] = c.weight_decay;
  j["lambda"] = c.lambda;
  j["grad_accum_batches"] = c.grad_accum_batches;
  j["bucket_batch_sizes"] = ordered_json::array();
  for (const BucketBatchSize& b : c.bucket_batch_sizes) {
    j["bucket_batch_sizes"].push_back(
        {{"lo_sec", b.window.lo_sec}, {"hi_sec", b.window.hi_sec}, {"batch_size", b.batch_size}});
  }
  j["seed"] = c.seed;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["epsilon"] = c.epsilon;
  j["grad_clip_norm"] = c.grad_clip_norm;
  return j;
}

namespace {

template <typename T>
void Read(const ordered_json& j, const std::string& key, T& out) {
  try {
    out = j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

void RequireObject(const ordered_json& j, const char* what) {
  if (!j.is_object()) throw InputError(fmt::format("{} config must be an object", what));
}

}  // namespace

void FromJson(const ordered_json& j, ModelConfig& c) {
  RequireObject(j, "model");
  for (const auto& [key, value] : j.items()) {
    if (key == "feature_dim") Read(value, key, c.feature_dim);
    else if (key == "hidden_dim") Read(value, key, c.hidden_dim);
    else if (key == "num_blocks") Read(value, key, c.num_blocks);
    else if (key == "attention_window") {
      if (value.is_null()) {
        c.attention_window.reset();
      } else {
        int w = 0;
        Read(value, key, w);
        c.attention_window = w;
      }
    }
    else if (key == "subsample_factor") Read(value, key, c.subsample_factor);
    else if (key == "vocab_size") Read(value, key, c.vocab_size);
    else if (key == "durations") Read(value, key, c.durations);
    else if (key == "predictor_dim") Read(value, key, c.predictor_dim);
    else if (key == "seed") Read(value, key, c.seed);
    else throw InputError("unknown model config key '" + key + "'");
  }
  c.Validate();
}

void FromJson(const ordered_json& j, TrainConfig& c) {
  RequireObject(j, "train");
  for (const auto& [key, value] : j.items()) {
    if (key == "max_lr") Read(value, key, c.max_lr);
    else if (key == "warmup_steps") Read(value, key, c.warmup_steps);
    else if (key == "total_steps") Read(value, key, c.total_steps);
    else if (key == "weight_decay") Read(value, key, c.weight_decay);
    else if (key == "lambda") Read(value, key, c.lambda);
    else if (key == "grad_accum_batches") Read(value, key, c.grad_accum_batches);
    else if (key == "bucket_batch_sizes") {
      if (!value.is_array()) throw InputError("bucket_batch_sizes must be a list");
      c.bucket_batch_sizes.clear();
      for (const ordered_json& row : value) {
        RequireObject(row, "bucket_batch_sizes entry");
        BucketBatchSize b;
        for (const auto& [k, v] : row.items()) {
          if (k == "lo_sec") Read(v, k, b.window.lo_sec);
          else if (k == "hi_sec") Read(v, k, b.window.hi_sec);
          else if (k == "batch_size") Read(v, k, b.batch_size);
          else throw InputError("unknown bucket key '" + k + "'");
        }
        c.bucket_batch_sizes.push_back(b);
      }
    }
    else if (key == "seed") Read(value, key, c.seed);
    else if (key == "beta1") Read(value, key, c.beta1);
    else if (key == "beta2") Read(value, key, c.beta2);
    else if (key == "epsilon") Read(value, key, c.epsilon);
    else if (key == "grad_clip_norm") Read(value, key, c.grad_clip_norm);
    else throw InputError("unknown train config key '" + key + "'");
  }
  c.Validate();
}

}  // namespace pnc
