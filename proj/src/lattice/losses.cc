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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pnc/error.h"
#include "pnc/lattice.h"
#include "pnc/log_math.h"

namespace pnc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-softmax of every row along the last axis.
Tensor LogSoftmaxRows(const Tensor& logits) {
  Tensor out = logits;
  const int width = out.dim(out.rank() - 1);
  std::span<double> all = out.data();
  for (std::size_t off = 0; off < all.size(); off += width) {
    LogSoftmaxInPlace(all.subspan(off, width));
  }
  return out;
}

LossResult Infeasible(const Tensor& token_logits, const Tensor* duration) {
  LossResult r;
  r.loss = kInf;
  r.feasible = false;
  r.grad_token_logits = Tensor(token_logits.shape());
  if (duration != nullptr) r.grad_duration_logits = Tensor(duration->shape());
  return r;
}

void CheckFinite(const Tensor& t, const char* what) {
  if (!t.AllFinite()) {
    throw InputError(std::string(what) + " contains non-finite values");
  }
}

void CheckTarget(std::span<const int> target, int num_symbols, int blank) {
  for (int y : target) {
    if (y < 0 || y >= num_symbols || y == blank) {
      throw InputError("target token " + std::to_string(y) +
                       " outside the non-blank vocabulary");
    }
  }
}

// Grid of log-probabilities indexed [row][col], -inf initialised.
class LogGrid {
 public:
  LogGrid(int rows, int cols)
      : cols_(cols), data_(static_cast<std::size_t>(rows) * cols, kLogZero) {}
  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

 private:
  int cols_;
  std::vector<double> data_;
};

}  // namespace

void TdtConfig::Validate() const {
  if (durations.empty()) throw InputError("duration set is empty");
  for (std::size_t i = 0; i < durations.size(); ++i) {
    if (durations[i] < 0) throw InputError("negative duration");
    if (i > 0 && durations[i] <= durations[i - 1]) {
      throw InputError("duration set must be strictly ascending");
    }
  }
  if (durations.back() < 1) {
    throw InputError("duration set needs at least one duration >= 1");
  }
  if (blank_id < 0) throw InputError("negative blank id");
}

TdtConfig TdtConfig::WithBlank(int blank_id, std::vector<int> durations) {
  TdtConfig c;
  c.blank_id = blank_id;
  c.durations = std::move(durations);
  return c;
}

bool CtcTargetInfeasible(int num_frames, std::span<const int> target) {
  int needed = static_cast<int>(target.size());
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++needed;
  }
  return num_frames < needed;
}

LossResult CtcLoss(const CtcLogits& logits, std::span<const int> target) {
  const Tensor& x = logits.values;
  if (x.rank() != 2 || x.dim(0) < 1 || x.dim(1) < 2) {
    throw InputError("CTC logits must be [T >= 1][V + 1 >= 2]");
  }
  CheckFinite(x, "CTC logits");
  const int num_frames = x.dim(0);
  const int num_symbols = x.dim(1);
  const int blank = num_symbols - 1;
  CheckTarget(target, num_symbols, blank);
  if (CtcTargetInfeasible(num_frames, target)) return Infeasible(x, nullptr);

  // Blank-augmented label sequence: blank y1 blank y2 ... yU blank.
  const int num_states = 2 * static_cast<int>(target.size()) + 1;
  std::vector<int> label(num_states, blank);
  for (std::size_t u = 0; u < target.size(); ++u) label[2 * u + 1] = target[u];
  auto can_skip = [&](int s) {
    return s >= 2 && label[s] != blank && label[s] != label[s - 2];
  };

  const Tensor logp = LogSoftmaxRows(x);

  // alpha includes the emission at frame t; beta excludes it.
  LogGrid alpha(num_frames, num_states);
  alpha.at(0, 0) = logp(0, label[0]);
  if (num_states > 1) alpha.at(0, 1) = logp(0, label[1]);
  for (int t = 1; t < num_frames; ++t) {
    for (int s = 0; s < num_states; ++s) {
      double a = alpha.at(t - 1, s);
      if (s >= 1) a = LogAdd(a, alpha.at(t - 1, s - 1));
      if (can_skip(s)) a = LogAdd(a, alpha.at(t - 1, s - 2));
      if (a != kLogZero) alpha.at(t, s) = a + logp(t, label[s]);
    }
  }
  double log_z = alpha.at(num_frames - 1, num_states - 1);
  if (num_states > 1) log_z = LogAdd(log_z, alpha.at(num_frames - 1, num_states - 2));
  if (log_z == kLogZero) return Infeasible(x, nullptr);

  LogGrid beta(num_frames, num_states);
  beta.at(num_frames - 1, num_states - 1) = 0.0;
  if (num_states > 1) beta.at(num_frames - 1, num_states - 2) = 0.0;
  for (int t = num_frames - 2; t >= 0; --t) {
    for (int s = 0; s < num_states; ++s) {
      double b = beta.at(t + 1, s) + logp(t + 1, label[s]);
      if (s + 1 < num_states) {
        b = LogAdd(b, beta.at(t + 1, s + 1) + logp(t + 1, label[s + 1]));
      }
      if (s + 2 < num_states && can_skip(s + 2)) {
        b = LogAdd(b, beta.at(t + 1, s + 2) + logp(t + 1, label[s + 2]));
      }
      beta.at(t, s) = b;
    }
  }

  LossResult r;
  r.loss = -log_z;
  r.grad_token_logits = Tensor({num_frames, num_symbols});
  for (int t = 0; t < num_frames; ++t) {
    std::span<double> g = r.grad_token_logits.Row(t);
    for (int k = 0; k < num_symbols; ++k) g[k] = std::exp(logp(t, k));
    for (int s = 0; s < num_states; ++s) {
      const double occ = alpha.at(t, s) + beta.at(t, s) - log_z;
      if (occ != kLogZero) g[label[s]] -= std::exp(occ);
    }
  }
  return r;
}

LossResult TdtLoss(const TdtLatticeLogits& logits, std::span<const int> target,
                   const TdtConfig& config) {
  config.Validate();
  const Tensor& tok = logits.token;
  const Tensor& dur = logits.duration;
  if (tok.rank() != 3 || dur.rank() != 3) {
    throw InputError("TDT logits must be rank-3 grids");
  }
  const int num_frames = tok.dim(0);
  const int num_tokens = static_cast<int>(target.size());
  const int num_symbols = tok.dim(2);
  const int num_durations = static_cast<int>(config.durations.size());
  if (num_frames < 1) throw InputError("TDT needs at least one frame");
  if (tok.dim(1) != num_tokens + 1) {
    throw InputError("token grid prefix axis must be U + 1");
  }
  if (dur.dim(0) != num_frames || dur.dim(1) != num_tokens + 1 ||
      dur.dim(2) != num_durations) {
    throw InputError("duration grid shape does not match [T][U + 1][|D|]");
  }
  if (config.blank_id >= num_symbols) throw InputError("blank id out of range");
  CheckFinite(tok, "TDT token logits");
  CheckFinite(dur, "TDT duration logits");
  CheckTarget(target, num_symbols, config.blank_id);
  const std::vector<int>& durations = config.durations;
  const int blank = config.blank_id;

  const Tensor logp_tok = LogSoftmaxRows(tok);
  const Tensor logp_dur = LogSoftmaxRows(dur);

  LogGrid alpha(num_frames + 1, num_tokens + 1);
  alpha.at(0, 0) = 0.0;
  for (int t = 0; t < num_frames; ++t) {
    for (int u = 0; u <= num_tokens; ++u) {
      const double a = alpha.at(t, u);
      if (a == kLogZero) continue;
      for (int j = 0; j < num_durations; ++j) {
        const int d = durations[j];
        if (t + d > num_frames) break;
        if (u < num_tokens) {
          double& next = alpha.at(t + d, u + 1);
          next = LogAdd(next, a + logp_tok(t, u, target[u]) + logp_dur(t, u, j));
        }
        if (d >= 1) {
          double& next = alpha.at(t + d, u);
          next = LogAdd(next, a + logp_tok(t, u, blank) + logp_dur(t, u, j));
        }
      }
    }
  }
  const double log_z = alpha.at(num_frames, num_tokens);
  if (log_z == kLogZero) return Infeasible(tok, &dur);

  LogGrid beta(num_frames + 1, num_tokens + 1);
  beta.at(num_frames, num_tokens) = 0.0;
  for (int t = num_frames - 1; t >= 0; --t) {
    for (int u = num_tokens; u >= 0; --u) {
      double b = kLogZero;
      for (int j = 0; j < num_durations; ++j) {
        const int d = durations[j];
        if (t + d > num_frames) break;
        if (u < num_tokens) {
          b = LogAdd(b, logp_tok(t, u, target[u]) + logp_dur(t, u, j) +
                            beta.at(t + d, u + 1));
        }
        if (d >= 1) {
          b = LogAdd(b, logp_tok(t, u, blank) + logp_dur(t, u, j) +
                            beta.at(t + d, u));
        }
      }
      beta.at(t, u) = b;
    }
  }

  LossResult r;
  r.loss = -log_z;
  r.grad_token_logits = Tensor(tok.shape());
  r.grad_duration_logits = Tensor(dur.shape());
  std::vector<double> occ_tok(num_symbols);
  std::vector<double> occ_dur(num_durations);
  for (int t = 0; t < num_frames; ++t) {
    for (int u = 0; u <= num_tokens; ++u) {
      const double a = alpha.at(t, u);
      if (a == kLogZero) continue;
      std::fill(occ_tok.begin(), occ_tok.end(), 0.0);
      std::fill(occ_dur.begin(), occ_dur.end(), 0.0);
      double node = 0.0;
      for (int j = 0; j < num_durations; ++j) {
        const int d = durations[j];
        if (t + d > num_frames) break;
        if (u < num_tokens) {
          const double lw = a + logp_tok(t, u, target[u]) + logp_dur(t, u, j) +
                            beta.at(t + d, u + 1) - log_z;
          const double w = lw == kLogZero ? 0.0 : std::exp(lw);
          occ_tok[target[u]] += w;
          occ_dur[j] += w;
          node += w;
        }
        if (d >= 1) {
          const double lw = a + logp_tok(t, u, blank) + logp_dur(t, u, j) +
                            beta.at(t + d, u) - log_z;
          const double w = lw == kLogZero ? 0.0 : std::exp(lw);
          occ_tok[blank] += w;
          occ_dur[j] += w;
          node += w;
        }
      }
      if (node == 0.0) continue;
      std::span<double> gt = r.grad_token_logits.Row(t, u);
      for (int k = 0; k < num_symbols; ++k) {
        gt[k] = std::exp(logp_tok(t, u, k)) * node - occ_tok[k];
      }
      std::span<double> gd = r.grad_duration_logits.Row(t, u);
      for (int j = 0; j < num_durations; ++j) {
        gd[j] = std::exp(logp_dur(t, u, j)) * node - occ_dur[j];
      }
    }
  }
  return r;
}

LossResult RnntLoss(const Tensor& token_logits, std::span<const int> target,
                    int blank_id) {
  const Tensor& x = token_logits;
  if (x.rank() != 3) throw InputError("RNN-T logits must be [T][U + 1][V + 1]");
  const int num_frames = x.dim(0);
  const int num_tokens = static_cast<int>(target.size());
  const int num_symbols = x.dim(2);
  if (num_frames < 1) throw InputError("RNN-T needs at least one frame");
  if (x.dim(1) != num_tokens + 1) {
    throw InputError("token grid prefix axis must be U + 1");
  }
  if (blank_id < 0 || blank_id >= num_symbols) {
    throw InputError("blank id out of range");
  }
  CheckFinite(x, "RNN-T logits");
  CheckTarget(target, num_symbols, blank_id);

  const Tensor logp = LogSoftmaxRows(x);
  LogGrid alpha(num_frames, num_tokens + 1);
  for (int t = 0; t < num_frames; ++t) {
    for (int u = 0; u <= num_tokens; ++u) {
      if (t == 0 && u == 0) {
        alpha.at(0, 0) = 0.0;
        continue;
      }
      double a = kLogZero;
      if (t > 0) a = alpha.at(t - 1, u) + logp(t - 1, u, blank_id);
      if (u > 0) a = LogAdd(a, alpha.at(t, u - 1) + logp(t, u - 1, target[u - 1]));
      alpha.at(t, u) = a;
    }
  }
  const double log_z =
      alpha.at(num_frames - 1, num_tokens) + logp(num_frames - 1, num_tokens, blank_id);

  // beta(t, u): log-probability of finishing from (t, u), final blank included.
  LogGrid beta(num_frames, num_tokens + 1);
  for (int t = num_frames - 1; t >= 0; --t) {
    for (int u = num_tokens; u >= 0; --u) {
      double b = kLogZero;
      if (t == num_frames - 1) {
        if (u == num_tokens) b = logp(t, u, blank_id);
      } else {
        b = beta.at(t + 1, u) + logp(t, u, blank_id);
      }
      if (u < num_tokens) b = LogAdd(b, beta.at(t, u + 1) + logp(t, u, target[u]));
      beta.at(t, u) = b;
    }
  }

  LossResult r;
  r.loss = -log_z;
  r.grad_token_logits = Tensor(x.shape());
  for (int t = 0; t < num_frames; ++t) {
    for (int u = 0; u <= num_tokens; ++u) {
      const double node_log = alpha.at(t, u) + beta.at(t, u) - log_z;
      if (node_log == kLogZero) continue;
      const double node = std::exp(node_log);
      std::span<double> g = r.grad_token_logits.Row(t, u);
      for (int k = 0; k < num_symbols; ++k) g[k] = std::exp(logp(t, u, k)) * node;
      double blank_next = kLogZero;
      if (t == num_frames - 1) {
        if (u == num_tokens) blank_next = 0.0;
      } else {
        blank_next = beta.at(t + 1, u);
      }
      if (blank_next != kLogZero) {
        g[blank_id] -= std::exp(alpha.at(t, u) + logp(t, u, blank_id) + blank_next - log_z);
      }
      if (u < num_tokens) {
        g[target[u]] -= std::exp(alpha.at(t, u) + logp(t, u, target[u]) +
                                 beta.at(t, u + 1) - log_z);
      }
    }
  }
  return r;
}

double HybridLoss(const LossResult& tdt, const LossResult& ctc,
                  const HybridLossConfig& config) {
  if (config.lambda < 0.0) throw InputError("CTC weight must be non-negative");
  if (!tdt.feasible || !ctc.feasible) return kInf;
  if (config.lambda == 0.0) return tdt.loss;
  return tdt.loss + config.lambda * ctc.loss;
}

}  // namespace pnc
