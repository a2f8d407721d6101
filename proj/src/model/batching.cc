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


#include "pnc/model/batching.h"

#include <algorithm>
#include <random>

namespace pnc {

BatchSchedule BucketBatches(std::span<const SegmentRecord> records,
                            std::span<const BucketBatchSize> buckets, std::uint64_t seed) {
  std::vector<DurationWindow> windows;
  for (const BucketBatchSize& b : buckets) windows.push_back(b.window);
  ValidateWindows(windows);

  BatchSchedule out;
  std::vector<std::vector<int>> members(buckets.size());
  for (int i = 0; i < static_cast<int>(records.size()); ++i) {
    bool placed = false;
    for (std::size_t w = 0; w < buckets.size() && !placed; ++w) {
      if (buckets[w].window.Contains(records[i].duration_sec)) {
        members[w].push_back(i);
        placed = true;
      }
    }
    if (!placed) out.rejects.push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<Batch>> per_window(buckets.size());
  for (std::size_t w = 0; w < buckets.size(); ++w) {
    std::shuffle(members[w].begin(), members[w].end(), rng);
    const int size = buckets[w].batch_size;
    for (std::size_t start = 0; start < members[w].size(); start += size) {
      const std::size_t end = std::min(members[w].size(), start + size);
      per_window[w].push_back(
          {static_cast<int>(w), std::vector<int>(members[w].begin() + start,
                                                 members[w].begin() + end)});
    }
  }

  std::vector<std::size_t> used(buckets.size(), 0);
  while (true) {
    int best = -1;
    double best_ratio = 2.0;
    for (std::size_t w = 0; w < buckets.size(); ++w) {
      if (used[w] == per_window[w].size()) continue;
      const double ratio =
          static_cast<double>(used[w]) / static_cast<double>(per_window[w].size());
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = static_cast<int>(w);
      }
    }
    if (best < 0) break;
    out.batches.push_back(std::move(per_window[best][used[best]++]));
  }
  return out;
}

}  // namespace pnc
