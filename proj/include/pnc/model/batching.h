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


#ifndef PNC_MODEL_BATCHING_H_
#define PNC_MODEL_BATCHING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "pnc/corpus/manifest.h"
#include "pnc/model/config.h"

namespace pnc {

struct Batch {
  int window = 0;  // index into the bucket list
  std::vector<int> indices;  // positions in the input record list
};

struct BatchSchedule {
  std::vector<Batch> batches;
  std::vector<int> rejects;  // records outside every window
};

// Records are grouped by duration window and shuffled per window with the
// seed; each window is cut into batches of its size (the last one may be
// short). Windows are interleaved by always taking the next batch from the
// window that has used the smallest fraction of its batches, ties going to
// the earlier window.
BatchSchedule BucketBatches(std::span<const SegmentRecord> records,
                            std::span<const BucketBatchSize> buckets, std::uint64_t seed);

}  // namespace pnc

#endif  // PNC_MODEL_BATCHING_H_
