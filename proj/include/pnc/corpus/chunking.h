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

#ifndef PNC_CORPUS_CHUNKING_H_
#define PNC_CORPUS_CHUNKING_H_

#include <span>
#include <string>
#include <vector>

namespace pnc {

struct WordTimestamp {
  std::string word;
  double start_sec = 0.0;
  double end_sec = 0.0;
};

struct Chunk {
  double start_sec = 0.0;
  double end_sec = 0.0;
  std::string text;
  int first_word = 0;  // inclusive index into the input
  int last_word = 0;   // inclusive
  // No sentence boundary fit under the cap; cut at the widest pause instead.
  bool fallback_split = false;
  bool ends_sentence = false;
};

bool EndsSentence(const std::string& word);

// Cuts a long word stream into chunks of at most cap_sec. A chunk closes at
// the first sentence end at or past target_sec; if the next word would push
// the span over cap_sec, the chunk closes at the latest sentence end seen, or,
// without one, after the word followed by the widest inter-word gap.
std::vector<Chunk> ChunkLongAudio(std::span<const WordTimestamp> words,
                                  double target_sec, double cap_sec);

}  // namespace pnc

#endif  // PNC_CORPUS_CHUNKING_H_
