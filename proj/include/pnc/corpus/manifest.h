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

#ifndef PNC_CORPUS_MANIFEST_H_
#define PNC_CORPUS_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pnc {

// One manifest row. The unit every corpus operation works on.
struct SegmentRecord {
  std::string utterance_id;
  int segment_index = 0;
  std::string segment_id;
  double duration_sec = 0.0;
  std::string text;
  std::optional<std::string> feature_ref;

  bool operator==(const SegmentRecord&) const = default;
};

// Manifest lines are JSON objects with exactly the fields above, in the
// order utterance_id, segment_index, segment_id, duration_sec, text,
// feature_ref (omitted when absent).
std::string FormatManifestLine(const SegmentRecord& record);
SegmentRecord ParseManifestLine(const std::string& line);

// Throws DataError on unreadable files, malformed lines, negative durations
// or duplicate (utterance_id, segment_index) pairs.
std::vector<SegmentRecord> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path,
                   std::span<const SegmentRecord> records);

// Resolves a record's feature_ref against the manifest's directory.
std::filesystem::path ResolveFeaturePath(const std::filesystem::path& manifest,
                                         const SegmentRecord& record);

}  // namespace pnc

#endif  // PNC_CORPUS_MANIFEST_H_
