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


#ifndef PNC_APP_VERIFY_H_
#define PNC_APP_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace pnc {

struct SuiteResult {
  std::string name;
  bool passed = false;
  int instances = 0;
  double worst = 0.0;  // largest observed error
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;  // first failure, if any
};

// CTC, RNN-T and TDT losses against exhaustive enumeration on random small
// lattices (T <= 6, U <= 3, V <= 3, D a subset of {0, 1, 2}); absolute error.
SuiteResult VerifyLossOracles(std::uint64_t seed, int instances = 200);

// Analytic loss gradients against central differences; relative error.
SuiteResult VerifyLossGradients(std::uint64_t seed, int instances = 20);

// Every parameter of a tiny hybrid model (F=4, H=8, B=1, V=3) against
// central differences of L_TDT + 0.3 L_CTC; relative error.
SuiteResult VerifyModelGradients(std::uint64_t seed, int instances = 20);

// Sum over all targets of exp(-loss) equals one for CTC and TDT.
SuiteResult VerifyNormalization(std::uint64_t seed, int instances = 10);

// which: "losses" (oracles + normalization), "gradients", or "all".
std::vector<SuiteResult> RunVerifySuites(const std::string& which, std::uint64_t seed = 1);

std::string FormatSuiteResult(const SuiteResult& result);

}  // namespace pnc

#endif  // PNC_APP_VERIFY_H_
