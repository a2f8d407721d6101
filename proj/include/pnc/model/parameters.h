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


#ifndef PNC_MODEL_PARAMETERS_H_
#define PNC_MODEL_PARAMETERS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pnc/model/config.h"

namespace pnc {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Linear maps are stored out x in and applied to row vectors as x * W^T.
// Biases are 1 x out.
struct BlockParameters {
  Mat query, key, value, output;
  Mat mlp_in, mlp_in_bias, mlp_out, mlp_out_bias;
};

struct Parameters {
  Mat subsample, subsample_bias;
  std::vector<BlockParameters> blocks;
  Mat ctc, ctc_bias;
  Mat embedding;  // V + 1 rows, the last one is the start symbol
  Mat predictor, predictor_bias;
  Mat joint_encoder, joint_predictor, joint_bias;
  Mat token, token_bias;
  Mat duration, duration_bias;

  static Parameters Zeros(const ModelConfig& config);
  // Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static Parameters Initialize(const ModelConfig& config);

  // Visits every tensor in a fixed order with a stable name.
  template <typename F>
  void ForEach(F&& f) {
    VisitImpl(*this, f);
  }
  template <typename F>
  void ForEach(F&& f) const {
    VisitImpl(*this, f);
  }

  void SetZero();
  // this += scale * other
  void Axpy(double scale, const Parameters& other);
  void Scale(double factor);
  double SquaredNorm() const;
  bool AllFinite() const;
  std::size_t NumValues() const;
  bool operator==(const Parameters& other) const;

 private:
  template <typename Self, typename F>
  static void VisitImpl(Self& self, F& f) {
    f("subsample.weight", self.subsample);
    f("subsample.bias", self.subsample_bias);
    for (std::size_t b = 0; b < self.blocks.size(); ++b) {
      auto& blk = self.blocks[b];
      const std::string p = "blocks." + std::to_string(b) + ".";
      f(p + "attention.query", blk.query);
      f(p + "attention.key", blk.key);
      f(p + "attention.value", blk.value);
      f(p + "attention.output", blk.output);
      f(p + "mlp.in.weight", blk.mlp_in);
      f(p + "mlp.in.bias", blk.mlp_in_bias);
      f(p + "mlp.out.weight", blk.mlp_out);
      f(p + "mlp.out.bias", blk.mlp_out_bias);
    }
    f("ctc.weight", self.ctc);
    f("ctc.bias", self.ctc_bias);
    f("predictor.embedding", self.embedding);
    f("predictor.weight", self.predictor);
    f("predictor.bias", self.predictor_bias);
    f("joint.encoder", self.joint_encoder);
    f("joint.predictor", self.joint_predictor);
    f("joint.bias", self.joint_bias);
    f("joint.token.weight", self.token);
    f("joint.token.bias", self.token_bias);
    f("joint.duration.weight", self.duration);
    f("joint.duration.bias", self.duration_bias);
  }
};

}  // namespace pnc

#endif  // PNC_MODEL_PARAMETERS_H_
