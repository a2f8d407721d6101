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

#ifndef PNC_LOG_MATH_H_
#define PNC_LOG_MATH_H_

#include <cmath>
#include <limits>
#include <span>

namespace pnc {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double LogAdd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// In-place numerically stable log-softmax.
inline void LogSoftmaxInPlace(std::span<double> row) {
  double max = kLogZero;
  for (double v : row) max = v > max ? v : max;
  double sum = 0.0;
  for (double v : row) sum += std::exp(v - max);
  const double log_norm = max + std::log(sum);
  for (double& v : row) v -= log_norm;
}

}  // namespace pnc

#endif  // PNC_LOG_MATH_H_
