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

#ifndef PNC_CORPUS_VOCABULARY_H_
#define PNC_CORPUS_VOCABULARY_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pnc {

// Word-level token inventory. Punctuation tokens are single characters that
// attach to the preceding word when rendered. Blank is one past the last
// token id.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  int blank_id() const { return size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& Token(int id) const { return tokens_.at(id); }
  int Id(std::string_view token) const;  // -1 if unknown
  bool IsPunctuation(int id) const;

  // Splits on whitespace and peels trailing punctuation into separate tokens.
  // Throws DataError on unknown words.
  std::vector<int> Encode(std::string_view text) const;
  std::string Decode(std::span<const int> ids) const;

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int, std::less<>> index_;
};

}  // namespace pnc

#endif  // PNC_CORPUS_VOCABULARY_H_
