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


#ifndef PNC_PARALLEL_H_
#define PNC_PARALLEL_H_

#include <functional>

namespace pnc {

// Hardware concurrency, capped by the PNC_NUM_THREADS environment variable.
int WorkerThreads();

// Runs fn(i) for i in [0, n) on up to WorkerThreads() threads with a static
// partition. Rethrows the first exception after all workers finish.
void ParallelFor(int n, const std::function<void(int)>& fn);

}  // namespace pnc

#endif  // PNC_PARALLEL_H_
