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


#include "pnc/model/checkpoint.h"

#include <bit>
#include <cstdint>
#include <fstream>

#include "pnc/error.h"

namespace pnc {

namespace {

constexpr const char* kMagic = "pnclab-checkpoint 1";

void PutDouble(std::string& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

double GetDouble(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

void SaveCheckpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  nlohmann::ordered_json header;
  header["model"] = ToJson(ck.model);
  header["vocabulary"] = ck.vocabulary;
  header["step"] = ck.step;
  header["tensors"] = nlohmann::ordered_json::array();
  std::string payload;
  ck.params.ForEach([&](const std::string& name, const Mat& m) {
    header["tensors"].push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
    for (Eigen::Index i = 0; i < m.size(); ++i) PutDouble(payload, m.data()[i]);
  });
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << kMagic << '\n' << header.dump() << '\n';
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::string magic, header_line;
  std::getline(in, magic);
  if (magic != kMagic) throw DataError(path.string() + " is not a pnclab checkpoint");
  std::getline(in, header_line);
  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Checkpoint ck;
  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(header_line);
    FromJson(header.at("model"), ck.model);
    ck.vocabulary = header.at("vocabulary").get<std::vector<std::string>>();
    ck.step = header.at("step").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad checkpoint header in " + path.string() + ": " + e.what());
  } catch (const InputError& e) {
    throw DataError("bad model config in " + path.string() + ": " + e.what());
  }

  ck.params = Parameters::Zeros(ck.model);
  const auto& tensors = header.at("tensors");
  std::size_t index = 0, offset = 0;
  const auto* bytes = reinterpret_cast<const unsigned char*>(payload.data());
  ck.params.ForEach([&](const std::string& name, Mat& m) {
    if (index >= tensors.size()) throw DataError("checkpoint lists too few tensors");
    const auto& t = tensors[index++];
    if (t.at("name").get<std::string>() != name || t.at("rows").get<Eigen::Index>() != m.rows() ||
        t.at("cols").get<Eigen::Index>() != m.cols()) {
      throw DataError("checkpoint tensor '" + name + "' does not match the model config");
    }
    if (offset + 8 * static_cast<std::size_t>(m.size()) > payload.size()) {
      throw DataError("checkpoint payload is truncated");
    }
    for (Eigen::Index i = 0; i < m.size(); ++i, offset += 8) m.data()[i] = GetDouble(bytes + offset);
  });
  if (index != tensors.size() || offset != payload.size()) {
    throw DataError("checkpoint has trailing tensors or bytes");
  }
  return ck;
}

}  // namespace pnc
