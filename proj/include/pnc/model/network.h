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


#ifndef PNC_MODEL_NETWORK_H_
#define PNC_MODEL_NETWORK_H_

#include <span>

#include "pnc/corpus/features.h"
#include "pnc/decode.h"
#include "pnc/lattice.h"
#include "pnc/model/parameters.h"

namespace pnc {

// Rows are input frames. Only the first num_frames rows are read, so a
// padded batch tensor can be passed with each sample's true length.
Mat FeaturesToMat(const FeatureMatrix& features);

// Subsampler followed by the residual attention blocks: T_in x F ->
// ceil(num_frames / subsample_factor) x H.
Mat Encode(const Parameters& params, const ModelConfig& config, const Mat& features,
           int num_frames);

CtcLogits CtcHead(const Parameters& params, const Mat& encoded);

// Token and duration logits for every lattice cell (t, u), with the
// predictor fed the start symbol at u = 0 and target[u - 1] after that.
TdtLatticeLogits JointLattice(const Parameters& params, const ModelConfig& config,
                              const Mat& encoded, std::span<const int> target);

// Scores frames of one encoded utterance given the last emitted token.
// Holds a reference to params, which must outlive the scorer.
JointScorer MakeJointScorer(const Parameters& params, const ModelConfig& config,
                            const Mat& encoded);

struct LossWeights {
  double tdt = 1.0;
  double ctc = 0.3;
};

struct SampleLosses {
  double tdt = 0.0;
  double ctc = 0.0;
  double total = 0.0;  // weights.tdt * tdt + weights.ctc * ctc
  bool feasible = true;
};

// Forward pass, and when grad is non-null, backward pass adding
// scale * d(total)/d(params) into grad. Infeasible samples leave grad alone.
SampleLosses ForwardBackward(const Parameters& params, const ModelConfig& config,
                             const Mat& features, int num_frames, std::span<const int> target,
                             const LossWeights& weights, Parameters* grad, double scale = 1.0);

}  // namespace pnc

#endif  // PNC_MODEL_NETWORK_H_
