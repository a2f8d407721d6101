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

#include "pnc/tensor.h"

#include <cmath>
#include <functional>
#include <numeric>

#include "pnc/error.h"

namespace pnc {

Tensor::Tensor(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
  if (shape_.empty() || shape_.size() > 3) {
    throw InputError("tensor rank must be 1..3");
  }
  std::size_t n = 1;
  for (int d : shape_) {
    if (d < 0) throw InputError("negative tensor dimension");
    n *= static_cast<std::size_t>(d);
  }
  data_.assign(n, fill);
}

std::span<double> Tensor::Row(int i) {
  return std::span<double>(data_).subspan(Offset(i, 0), shape_[1]);
}

std::span<const double> Tensor::Row(int i) const {
  return std::span<const double>(data_).subspan(Offset(i, 0), shape_[1]);
}

std::span<double> Tensor::Row(int i, int j) {
  return std::span<double>(data_).subspan(Offset(i, j, 0), shape_[2]);
}

std::span<const double> Tensor::Row(int i, int j) const {
  return std::span<const double>(data_).subspan(Offset(i, j, 0), shape_[2]);
}

bool Tensor::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace pnc
