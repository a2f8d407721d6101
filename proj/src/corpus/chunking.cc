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

#include "pnc/corpus/chunking.h"

#include "pnc/error.h"

namespace pnc {

bool EndsSentence(const std::string& word) {
  if (word.empty()) return false;
  const char c = word.back();
  return c == '.' || c == '!' || c == '?';
}

std::vector<Chunk> ChunkLongAudio(std::span<const WordTimestamp> words,
                                  double target_sec, double cap_sec) {
  if (!(cap_sec > 0.0) || !(target_sec > 0.0) || target_sec > cap_sec) {
    throw InputError("chunking needs 0 < target <= cap");
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].end_sec < words[i].start_sec) {
      throw InputError("word '" + words[i].word + "' ends before it starts");
    }
    if (i > 0 && words[i].start_sec < words[i - 1].start_sec) {
      throw InputError("word timestamps are not ordered");
    }
  }

  std::vector<Chunk> chunks;
  const int n = static_cast<int>(words.size());
  auto emit = [&](int first, int last, bool fallback) {
    Chunk c;
    c.first_word = first;
    c.last_word = last;
    c.start_sec = words[first].start_sec;
    c.end_sec = words[first].end_sec;
    for (int i = first; i <= last; ++i) {
      if (i > first) c.text.push_back(' ');
      c.text += words[i].word;
      c.end_sec = std::max(c.end_sec, words[i].end_sec);
    }
    c.fallback_split = fallback;
    c.ends_sentence = EndsSentence(words[last].word);
    chunks.push_back(std::move(c));
  };

  int start = 0;
  int last_boundary = -1;
  double span_end = 0.0;
  int i = 0;
  while (i < n) {
    const double end = std::max(i == start ? words[i].end_sec : span_end, words[i].end_sec);
    const double span = end - words[start].start_sec;
    if (span > cap_sec && i > start) {
      if (last_boundary >= start) {
        emit(start, last_boundary, false);
        start = last_boundary + 1;
      } else {
        // Widest pause between consecutive words inside [start, i - 1].
        int cut = start;
        double widest = -1.0;
        for (int k = start; k + 1 <= i - 1; ++k) {
          const double gap = words[k + 1].start_sec - words[k].end_sec;
          if (gap > widest) {
            widest = gap;
            cut = k;
          }
        }
        emit(start, cut, true);
        start = cut + 1;
      }
      last_boundary = -1;
      i = start;
      continue;
    }
    span_end = end;
    if (EndsSentence(words[i].word)) {
      last_boundary = i;
      if (span >= target_sec) {
        emit(start, i, false);
        start = i + 1;
        last_boundary = -1;
      }
    }
    ++i;
  }
  if (start < n) emit(start, n - 1, false);
  return chunks;
}

}  // namespace pnc
