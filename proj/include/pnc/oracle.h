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

// Brute-force reference computations used to check the dynamic-programming
// losses. Everything here is exponential in the input size and shares no code
// with the forward-backward implementations.

#ifndef PNC_ORACLE_H_
#define PNC_ORACLE_H_

#include <functional>
#include <span>
#include <vector>

#include "pnc/tensor.h"

namespace pnc::oracle {

// Removes repeats then blanks.
std::vector<int> CollapseCtcPath(std::span<const int> path, int blank);

// -log of the summed probability of every length-T frame path that collapses
// to the target. logits: [T][V + 1], blank = V. Refuses (V+1)^T > 2^20.
double CtcLossByEnumeration(const Tensor& logits, std::span<const int> target);

// -log of the summed probability over every interleaving of the U tokens and
// T blanks that ends in a blank. logits: [T][U + 1][V + 1].
double RnntLossByEnumeration(const Tensor& logits, std::span<const int> target,
                             int blank_id);

// Central differences of f with respect to every entry of x.
Tensor FiniteDifferenceGradient(const std::function<double(const Tensor&)>& f,
                                const Tensor& x, double step);

// |a - b| / max(|a|, |b|, floor). The floor keeps near-zero entries from
// dominating the comparison.
double RelativeError(double a, double b, double floor = 1e-6);

}  // namespace pnc::oracle

#endif  // PNC_ORACLE_H_
