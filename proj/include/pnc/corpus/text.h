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

#ifndef PNC_CORPUS_TEXT_H_
#define PNC_CORPUS_TEXT_H_

#include <optional>
#include <string>
#include <string_view>

namespace pnc {

// Evaluation settings: keep both, keep case only, keep punctuation only,
// strip both.
enum class PncSetting { kPnc, kOnlyCap, kOnlyPun, kNoPnc };

inline constexpr PncSetting kAllPncSettings[] = {
    PncSetting::kPnc, PncSetting::kOnlyCap, PncSetting::kOnlyPun, PncSetting::kNoPnc};

std::string_view SettingName(PncSetting setting);
std::optional<PncSetting> ParseSetting(std::string_view name);

struct TransformOptions {
  // Characters removed by the OnlyCap and NoPnC settings.
  std::string punctuation = ".,!?;:\"'";
};

// Trims and squeezes runs of ASCII whitespace to one space.
std::string CollapseWhitespace(std::string_view text);

// Lowercasing is ASCII-only; other bytes pass through untouched.
std::string TransformText(std::string_view text, PncSetting setting,
                          const TransformOptions& options = {});

// First alphabetic character is uppercase and the last non-space character
// is '.', '!' or '?'.
bool IsCompleteSentence(std::string_view text);

// First alphabetic character exists and is lowercase; such a text can never
// become complete by appending more text.
bool StartsMidSentence(std::string_view text);

}  // namespace pnc

#endif  // PNC_CORPUS_TEXT_H_
