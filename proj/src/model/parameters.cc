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


#include "pnc/model/parameters.h"

#include <cmath>
#include <random>

namespace pnc {

Parameters Parameters::Zeros(const ModelConfig& c) {
  const int h = c.hidden_dim;
  const int v1 = c.vocab_size + 1;
  const int p = c.predictor_dim;
  const int d = static_cast<int>(c.durations.size());
  Parameters out;
  out.subsample = Mat::Zero(h, c.subsample_factor * c.feature_dim);
  out.subsample_bias = Mat::Zero(1, h);
  out.blocks.resize(c.num_blocks);
  for (BlockParameters& b : out.blocks) {
    b.query = b.key = b.value = b.output = Mat::Zero(h, h);
    b.mlp_in = Mat::Zero(4 * h, h);
    b.mlp_in_bias = Mat::Zero(1, 4 * h);
    b.mlp_out = Mat::Zero(h, 4 * h);
    b.mlp_out_bias = Mat::Zero(1, h);
  }
  out.ctc = Mat::Zero(v1, h);
  out.ctc_bias = Mat::Zero(1, v1);
  out.embedding = Mat::Zero(v1, p);
  out.predictor = Mat::Zero(p, p);
  out.predictor_bias = Mat::Zero(1, p);
  out.joint_encoder = Mat::Zero(h, h);
  out.joint_predictor = Mat::Zero(h, p);
  out.joint_bias = Mat::Zero(1, h);
  out.token = Mat::Zero(v1, h);
  out.token_bias = Mat::Zero(1, v1);
  out.duration = Mat::Zero(d, h);
  out.duration_bias = Mat::Zero(1, d);
  return out;
}

Parameters Parameters::Initialize(const ModelConfig& c) {
  c.Validate();
  Parameters out = Zeros(c);
  std::mt19937_64 rng(c.seed);
  out.ForEach([&](const std::string&, Mat& m) {
    if (m.rows() == 1) return;  // bias
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  });
  return out;
}

void Parameters::SetZero() {
  ForEach([](const std::string&, Mat& m) { m.setZero(); });
}

void Parameters::Axpy(double scale, const Parameters& other) {
  std::vector<const Mat*> src;
  other.ForEach([&](const std::string&, const Mat& m) { src.push_back(&m); });
  std::size_t k = 0;
  ForEach([&](const std::string&, Mat& m) { m += scale * *src[k++]; });
}

void Parameters::Scale(double factor) {
  ForEach([&](const std::string&, Mat& m) { m *= factor; });
}

double Parameters::SquaredNorm() const {
  double total = 0.0;
  ForEach([&](const std::string&, const Mat& m) { total += m.squaredNorm(); });
  return total;
}

bool Parameters::AllFinite() const {
  bool ok = true;
  ForEach([&](const std::string&, const Mat& m) { ok = ok && m.allFinite(); });
  return ok;
}

std::size_t Parameters::NumValues() const {
  std::size_t n = 0;
  ForEach([&](const std::string&, const Mat& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

bool Parameters::operator==(const Parameters& other) const {
  std::vector<const Mat*> mine, theirs;
  ForEach([&](const std::string&, const Mat& m) { mine.push_back(&m); });
  other.ForEach([&](const std::string&, const Mat& m) { theirs.push_back(&m); });
  if (mine.size() != theirs.size()) return false;
  for (std::size_t k = 0; k < mine.size(); ++k) {
    if (mine[k]->rows() != theirs[k]->rows() || mine[k]->cols() != theirs[k]->cols()) return false;
    if (*mine[k] != *theirs[k]) return false;
  }
  return true;
}

}  // namespace pnc
