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

#include "pnc/corpus/features.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pnc/error.h"

namespace pnc {
namespace {

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void WriteFeatureFile(const std::filesystem::path& path, const FeatureMatrix& m) {
  if (m.values.size() != static_cast<std::size_t>(m.num_frames) * m.dim) {
    throw InputError("feature matrix size does not match its shape");
  }
  std::string bytes;
  bytes.reserve(8 + 4 * m.values.size());
  PutU32(bytes, static_cast<std::uint32_t>(m.num_frames));
  PutU32(bytes, static_cast<std::uint32_t>(m.dim));
  for (float f : m.values) PutU32(bytes, std::bit_cast<std::uint32_t>(f));
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write feature file " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

FeatureMatrix ReadFeatureFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature file " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 8) throw DataError("feature file too short: " + path.string());
  FeatureMatrix m;
  m.num_frames = static_cast<int>(GetU32(p));
  m.dim = static_cast<int>(GetU32(p + 4));
  const std::size_t count = static_cast<std::size_t>(m.num_frames) * m.dim;
  if (bytes.size() != 8 + 4 * count) {
    throw DataError("feature file size does not match header: " + path.string());
  }
  m.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    m.values[i] = std::bit_cast<float>(GetU32(p + 8 + 4 * i));
  }
  return m;
}

FeatureMatrix ConcatFrames(std::span<const FeatureMatrix> parts) {
  FeatureMatrix out;
  if (parts.empty()) return out;
  out.dim = parts.front().dim;
  for (const FeatureMatrix& p : parts) {
    if (p.dim != out.dim) throw InputError("feature dims differ in concatenation");
    out.num_frames += p.num_frames;
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
  }
  return out;
}

}  // namespace pnc
