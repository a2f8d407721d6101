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

#ifndef PNC_TENSOR_H_
#define PNC_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace pnc {

// Dense row-major array of doubles with rank 1 to 3. Used for loss lattices
// where the last axis is always the distribution axis.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int axis) const { return shape_[axis]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) { return data_[Offset(i, j)]; }
  double operator()(int i, int j) const { return data_[Offset(i, j)]; }
  double& operator()(int i, int j, int k) { return data_[Offset(i, j, k)]; }
  double operator()(int i, int j, int k) const {
    return data_[Offset(i, j, k)];
  }

  // Contiguous slice along the last axis.
  std::span<double> Row(int i);
  std::span<const double> Row(int i) const;
  std::span<double> Row(int i, int j);
  std::span<const double> Row(int i, int j) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool AllFinite() const;
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }

 private:
  std::size_t Offset(int i, int j) const {
    return static_cast<std::size_t>(i) * shape_[1] + j;
  }
  std::size_t Offset(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * shape_[1] + j) * shape_[2] + k;
  }

  std::vector<int> shape_;
  std::vector<double> data_;
};

}  // namespace pnc

#endif  // PNC_TENSOR_H_
