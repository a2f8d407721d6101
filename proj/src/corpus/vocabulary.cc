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

#include "pnc/corpus/vocabulary.h"

#include <sstream>

#include "pnc/error.h"

namespace pnc {
namespace {

bool IsPunctChar(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (int i = 0; i < size(); ++i) {
    if (tokens_[i].empty()) throw InputError("empty vocabulary entry");
    if (!index_.emplace(tokens_[i], i).second) {
      throw InputError("duplicate vocabulary entry " + tokens_[i]);
    }
  }
}

int Vocabulary::Id(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

bool Vocabulary::IsPunctuation(int id) const {
  const std::string& t = tokens_.at(id);
  return t.size() == 1 && IsPunctChar(t[0]);
}

std::vector<int> Vocabulary::Encode(std::string_view text) const {
  std::vector<int> ids;
  std::istringstream in{std::string(text)};
  std::string word;
  auto lookup = [&](const std::string& w) {
    const int id = Id(w);
    if (id < 0) throw DataError("token not in vocabulary: '" + w + "'");
    ids.push_back(id);
  };
  while (in >> word) {
    std::size_t stem_end = word.size();
    while (stem_end > 0 && IsPunctChar(word[stem_end - 1])) --stem_end;
    if (stem_end > 0) lookup(word.substr(0, stem_end));
    for (std::size_t i = stem_end; i < word.size(); ++i) lookup(std::string(1, word[i]));
  }
  return ids;
}

std::string Vocabulary::Decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) {
    if (id < 0 || id >= size()) continue;
    if (!out.empty() && !IsPunctuation(id)) out.push_back(' ');
    out += tokens_[id];
  }
  return out;
}

}  // namespace pnc
