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

#ifndef PNC_CORPUS_FEATURES_H_
#define PNC_CORPUS_FEATURES_H_

#include <filesystem>
#include <span>
#include <vector>

namespace pnc {

// Row-major [num_frames][dim] feature frames.
struct FeatureMatrix {
  int num_frames = 0;
  int dim = 0;
  std::vector<float> values;

  float at(int frame, int d) const {
    return values[static_cast<std::size_t>(frame) * dim + d];
  }
  bool operator==(const FeatureMatrix&) const = default;
};

// File layout: uint32 num_frames, uint32 dim, then num_frames * dim float32
// values, row-major. Every field is little-endian.
void WriteFeatureFile(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix ReadFeatureFile(const std::filesystem::path& path);

// Stacks matrices of equal dim along the frame axis.
FeatureMatrix ConcatFrames(std::span<const FeatureMatrix> parts);

}  // namespace pnc

#endif  // PNC_CORPUS_FEATURES_H_
