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

#include "pnc/corpus/text.h"

#include <cctype>

namespace pnc {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsAsciiAlpha(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 &&
         static_cast<unsigned char>(c) < 0x80;
}

// First ASCII letter, or '\0' when there is none.
char FirstLetter(std::string_view text) {
  for (char c : text) {
    if (IsAsciiAlpha(c)) return c;
  }
  return '\0';
}

}  // namespace

std::string_view SettingName(PncSetting setting) {
  switch (setting) {
    case PncSetting::kPnc:
      return "PnC";
    case PncSetting::kOnlyCap:
      return "OnlyCap";
    case PncSetting::kOnlyPun:
      return "OnlyPun";
    case PncSetting::kNoPnc:
      return "NoPnC";
  }
  return "";
}

std::optional<PncSetting> ParseSetting(std::string_view name) {
  for (PncSetting s : kAllPncSettings) {
    if (SettingName(s) == name) return s;
  }
  return std::nullopt;
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string TransformText(std::string_view text, PncSetting setting,
                          const TransformOptions& options) {
  const bool strip_punct =
      setting == PncSetting::kOnlyCap || setting == PncSetting::kNoPnc;
  const bool lower = setting == PncSetting::kOnlyPun || setting == PncSetting::kNoPnc;
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (strip_punct && options.punctuation.find(c) != std::string::npos) continue;
    if (lower && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return CollapseWhitespace(out);
}

bool IsCompleteSentence(std::string_view text) {
  const char first = FirstLetter(text);
  if (first < 'A' || first > 'Z') return false;
  const std::size_t last = text.find_last_not_of(" \t\n\r\f\v");
  if (last == std::string_view::npos) return false;
  const char end = text[last];
  return end == '.' || end == '!' || end == '?';
}

bool StartsMidSentence(std::string_view text) {
  const char first = FirstLetter(text);
  return first >= 'a' && first <= 'z';
}

}  // namespace pnc
