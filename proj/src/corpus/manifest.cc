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

#include "pnc/corpus/manifest.h"

#include <fstream>
#include <set>
#include <utility>

#include "json.hpp"
#include "pnc/error.h"

namespace pnc {

std::string FormatManifestLine(const SegmentRecord& record) {
  nlohmann::ordered_json j;
  j["utterance_id"] = record.utterance_id;
  j["segment_index"] = record.segment_index;
  j["segment_id"] = record.segment_id;
  j["duration_sec"] = record.duration_sec;
  j["text"] = record.text;
  if (record.feature_ref) j["feature_ref"] = *record.feature_ref;
  return j.dump();
}

SegmentRecord ParseManifestLine(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("manifest line is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("manifest line is not an object");
  SegmentRecord r;
  try {
    r.utterance_id = j.at("utterance_id").get<std::string>();
    r.segment_index = j.at("segment_index").get<int>();
    r.segment_id = j.at("segment_id").get<std::string>();
    r.duration_sec = j.at("duration_sec").get<double>();
    r.text = j.at("text").get<std::string>();
    if (j.contains("feature_ref") && !j["feature_ref"].is_null()) {
      r.feature_ref = j["feature_ref"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad manifest record: ") + e.what());
  }
  if (r.duration_sec < 0.0) {
    throw DataError("negative duration for segment " + r.segment_id);
  }
  return r;
}

std::vector<SegmentRecord> ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  std::vector<SegmentRecord> records;
  std::set<std::pair<std::string, int>> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(ParseManifestLine(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const SegmentRecord& r = records.back();
    if (!seen.emplace(r.utterance_id, r.segment_index).second) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": duplicate segment index " + std::to_string(r.segment_index) +
                      " in utterance " + r.utterance_id);
    }
  }
  return records;
}

void WriteManifest(const std::filesystem::path& path,
                   std::span<const SegmentRecord> records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest " + path.string());
  for (const SegmentRecord& r : records) out << FormatManifestLine(r) << '\n';
}

std::filesystem::path ResolveFeaturePath(const std::filesystem::path& manifest,
                                         const SegmentRecord& record) {
  if (!record.feature_ref) {
    throw DataError("segment " + record.segment_id + " has no feature_ref");
  }
  std::filesystem::path ref(*record.feature_ref);
  if (ref.is_absolute()) return ref;
  return manifest.parent_path() / ref;
}

}  // namespace pnc
