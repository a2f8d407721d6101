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

#ifndef PNC_CORPUS_SEGMENTS_H_
#define PNC_CORPUS_SEGMENTS_H_

#include <span>
#include <string>
#include <vector>

#include "pnc/corpus/manifest.h"

namespace pnc {

// A record built from one or more consecutive input records.
struct MergedRecord {
  SegmentRecord record;
  std::vector<std::string> member_ids;
  // Set by GreedyConcat when a single member exceeds the duration cap.
  bool oversize = false;
};

struct DroppedSegment {
  std::string segment_id;
  std::string reason;
};

struct SentenceCompletion {
  std::vector<MergedRecord> merged;
  std::vector<DroppedSegment> dropped;
};

// Concatenates consecutive segments of each utterance until the accumulated
// text is a complete sentence, e.g. ids "u-0076" + "u-0077" become
// "u-0076_0077". Runs that cannot complete are dropped and reported; a gap in
// segment_index breaks a run. Utterances keep first-appearance order.
SentenceCompletion CompleteSentences(std::span<const SegmentRecord> records);

// Merged id: first id, then "_" + the part after the last '-' of each later id.
std::string MergedSegmentId(std::span<const SegmentRecord> members);

// Groups records in order, per utterance, while the running duration stays
// <= max_duration_sec. A record longer than the cap forms its own group and
// is flagged oversize.
std::vector<MergedRecord> GreedyConcat(std::span<const SegmentRecord> records,
                                       double max_duration_sec);

// Half-open [lo_sec, hi_sec).
struct DurationWindow {
  double lo_sec = 0.0;
  double hi_sec = 0.0;

  bool Contains(double duration) const {
    return duration >= lo_sec && duration < hi_sec;
  }
  std::string Label() const;
  bool operator==(const DurationWindow&) const = default;
};

struct BucketStats {
  DurationWindow window;
  int count = 0;
  double total_hours = 0.0;
  double mean_duration_sec = 0.0;
};

struct DurationBuckets {
  std::vector<std::vector<SegmentRecord>> buckets;  // one per window
  std::vector<BucketStats> stats;                   // one per window
  std::vector<SegmentRecord> rejects;               // outside every window
};

// Windows must be valid and pairwise disjoint (InputError otherwise).
void ValidateWindows(std::span<const DurationWindow> windows);
DurationBuckets BucketByDuration(std::span<const SegmentRecord> records,
                                 std::span<const DurationWindow> windows);

// Human-readable table with the columns window, segments, hours, mean seconds.
std::string FormatBucketTable(std::span<const BucketStats> stats);
// Machine-readable form of the same table.
std::string FormatBucketJson(std::span<const BucketStats> stats);

// Parses "0-20,20-40" into windows.
std::vector<DurationWindow> ParseWindows(const std::string& spec);

}  // namespace pnc

#endif  // PNC_CORPUS_SEGMENTS_H_
