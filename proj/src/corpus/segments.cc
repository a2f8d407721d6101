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

#include "pnc/corpus/segments.h"

#include <algorithm>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "pnc/corpus/text.h"
#include "pnc/error.h"

namespace pnc {
namespace {

std::string OrdinalSuffix(const std::string& id) {
  const std::size_t dash = id.rfind('-');
  return dash == std::string::npos ? id : id.substr(dash + 1);
}

std::string Trimmed(const std::string& s) { return CollapseWhitespace(s); }

MergedRecord Merge(std::span<const SegmentRecord> members) {
  MergedRecord m;
  m.record.utterance_id = members.front().utterance_id;
  m.record.segment_index = members.front().segment_index;
  m.record.segment_id = MergedSegmentId(members);
  std::string text;
  for (const SegmentRecord& r : members) {
    const std::string piece = Trimmed(r.text);
    if (piece.empty()) continue;
    if (!text.empty()) text.push_back(' ');
    text += piece;
    m.record.duration_sec += r.duration_sec;
    m.member_ids.push_back(r.segment_id);
  }
  m.record.text = text;
  if (members.size() == 1) {
    m.record.text = members.front().text;
    m.record.feature_ref = members.front().feature_ref;
  }
  return m;
}

// Utterances in first-appearance order, each sorted by segment_index.
std::vector<std::vector<SegmentRecord>> GroupByUtterance(
    std::span<const SegmentRecord> records) {
  std::vector<std::vector<SegmentRecord>> groups;
  std::map<std::string, std::size_t> slot;
  for (const SegmentRecord& r : records) {
    auto [it, inserted] = slot.emplace(r.utterance_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(r);
  }
  for (auto& g : groups) {
    std::stable_sort(g.begin(), g.end(), [](const auto& a, const auto& b) {
      return a.segment_index < b.segment_index;
    });
  }
  return groups;
}

}  // namespace

std::string MergedSegmentId(std::span<const SegmentRecord> members) {
  if (members.empty()) return "";
  std::string id = members.front().segment_id;
  for (std::size_t i = 1; i < members.size(); ++i) {
    id += "_" + OrdinalSuffix(members[i].segment_id);
  }
  return id;
}

SentenceCompletion CompleteSentences(std::span<const SegmentRecord> records) {
  SentenceCompletion out;
  for (const auto& utterance : GroupByUtterance(records)) {
    std::vector<SegmentRecord> run;
    auto drop_run = [&](const std::string& reason) {
      for (const SegmentRecord& r : run) out.dropped.push_back({r.segment_id, reason});
      run.clear();
    };
    for (std::size_t i = 0; i < utterance.size(); ++i) {
      const SegmentRecord& r = utterance[i];
      if (i > 0 && r.segment_index == utterance[i - 1].segment_index) {
        out.dropped.push_back({r.segment_id, "duplicate segment index"});
        continue;
      }
      if (Trimmed(r.text).empty()) {
        drop_run("run interrupted by empty segment");
        out.dropped.push_back({r.segment_id, "empty text"});
        continue;
      }
      if (!run.empty() && r.segment_index != run.back().segment_index + 1) {
        drop_run("segment index gap");
      }
      if (run.empty() && StartsMidSentence(r.text)) {
        out.dropped.push_back({r.segment_id, "starts mid-sentence"});
        continue;
      }
      run.push_back(r);
      std::string joined;
      for (const SegmentRecord& m : run) {
        if (!joined.empty()) joined.push_back(' ');
        joined += Trimmed(m.text);
      }
      if (IsCompleteSentence(joined)) {
        out.merged.push_back(Merge(run));
        run.clear();
      }
    }
    drop_run("incomplete at end of utterance");
  }
  return out;
}

std::vector<MergedRecord> GreedyConcat(std::span<const SegmentRecord> records,
                                       double max_duration_sec) {
  if (!(max_duration_sec > 0.0)) throw InputError("max duration must be positive");
  std::vector<MergedRecord> out;
  std::vector<SegmentRecord> group;
  double total = 0.0;
  auto flush = [&] {
    if (group.empty()) return;
    out.push_back(Merge(group));
    out.back().oversize = group.size() == 1 && total > max_duration_sec;
    group.clear();
    total = 0.0;
  };
  for (const SegmentRecord& r : records) {
    const bool same_utterance =
        !group.empty() && group.back().utterance_id == r.utterance_id;
    if (!same_utterance || total + r.duration_sec > max_duration_sec) flush();
    group.push_back(r);
    total += r.duration_sec;
  }
  flush();
  return out;
}

std::string DurationWindow::Label() const {
  return fmt::format("{:g}-{:g}", lo_sec, hi_sec);
}

void ValidateWindows(std::span<const DurationWindow> windows) {
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const DurationWindow& w = windows[i];
    if (!(w.lo_sec >= 0.0) || !(w.lo_sec < w.hi_sec)) {
      throw InputError("invalid duration window " + w.Label());
    }
    for (std::size_t j = 0; j < i; ++j) {
      const DurationWindow& v = windows[j];
      if (w.lo_sec < v.hi_sec && v.lo_sec < w.hi_sec) {
        throw InputError("duration windows overlap: " + v.Label() + " and " + w.Label());
      }
    }
  }
}

DurationBuckets BucketByDuration(std::span<const SegmentRecord> records,
                                 std::span<const DurationWindow> windows) {
  ValidateWindows(windows);
  DurationBuckets out;
  out.buckets.resize(windows.size());
  for (const SegmentRecord& r : records) {
    auto it = std::find_if(windows.begin(), windows.end(),
                           [&](const DurationWindow& w) { return w.Contains(r.duration_sec); });
    if (it == windows.end()) {
      out.rejects.push_back(r);
    } else {
      out.buckets[it - windows.begin()].push_back(r);
    }
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    BucketStats s;
    s.window = windows[i];
    s.count = static_cast<int>(out.buckets[i].size());
    double seconds = 0.0;
    for (const SegmentRecord& r : out.buckets[i]) seconds += r.duration_sec;
    s.total_hours = seconds / 3600.0;
    s.mean_duration_sec = s.count > 0 ? seconds / s.count : 0.0;
    out.stats.push_back(s);
  }
  return out;
}

std::string FormatBucketTable(std::span<const BucketStats> stats) {
  std::string out = fmt::format("{:<16} {:>10} {:>14} {:>18}\n", "window_sec",
                                "segments", "duration_hrs", "avg_segment_sec");
  for (const BucketStats& s : stats) {
    out += fmt::format("{:<16} {:>10} {:>14.4f} {:>18.2f}\n", s.window.Label(), s.count,
                       s.total_hours, s.mean_duration_sec);
  }
  return out;
}

std::string FormatBucketJson(std::span<const BucketStats> stats) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const BucketStats& s : stats) {
    nlohmann::ordered_json row;
    row["lo_sec"] = s.window.lo_sec;
    row["hi_sec"] = s.window.hi_sec;
    row["segments"] = s.count;
    row["duration_hrs"] = s.total_hours;
    row["avg_segment_sec"] = s.mean_duration_sec;
    rows.push_back(row);
  }
  nlohmann::ordered_json doc;
  doc["schema"] = "pnclab.bucket_stats.v1";
  doc["windows"] = rows;
  return doc.dump(2) + "\n";
}

std::vector<DurationWindow> ParseWindows(const std::string& spec) {
  std::vector<DurationWindow> windows;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) throw InputError("window must look like lo-hi: " + item);
    try {
      windows.push_back({std::stod(item.substr(0, dash)), std::stod(item.substr(dash + 1))});
    } catch (const std::exception&) {
      throw InputError("window must look like lo-hi: " + item);
    }
  }
  ValidateWindows(windows);
  return windows;
}

}  // namespace pnc
