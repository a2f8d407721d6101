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


#include "pnc/app/verify.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "pnc/error.h"
#include "pnc/lattice.h"
#include "pnc/model/network.h"
#include "pnc/oracle.h"

namespace pnc {

namespace {

using Clock = std::chrono::steady_clock;

Tensor RandomTensor(std::vector<int> shape, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> normal(0.0, 1.5);
  for (double& v : t.data()) v = normal(rng);
  return t;
}

std::vector<int> RandomTarget(int length, int vocab, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, vocab - 1);
  std::vector<int> y(length);
  for (int& v : y) v = pick(rng);
  return y;
}

std::vector<int> RandomDurations(std::mt19937_64& rng) {
  static const std::vector<std::vector<int>> kSets = {{1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  return kSets[std::uniform_int_distribution<int>(0, 5)(rng)];
}

// Tracks the worst error and the first failure of a suite.
class Tally {
 public:
  Tally(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
    result_.passed = true;
  }

  void Check(double error, const std::string& where) {
    if (std::isnan(error)) error = std::numeric_limits<double>::infinity();
    result_.worst = std::max(result_.worst, error);
    if (!(error <= result_.tolerance) && result_.passed) {
      result_.passed = false;
      result_.detail = fmt::format("{}: error {:.3e}", where, error);
    }
  }

  void Fail(const std::string& why) {
    if (result_.passed) result_.detail = why;
    result_.passed = false;
  }

  void Instance() { ++result_.instances; }
  double tolerance() const { return result_.tolerance; }

  SuiteResult Finish(Clock::time_point start) {
    result_.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result_;
  }

 private:
  SuiteResult result_;
};

// Agreement of two losses that may both be infinite.
double LossGap(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0.0;
  return std::abs(a - b);
}

double MaxRelativeError(std::span<const double> analytic, const Tensor& numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    worst = std::max(worst, oracle::RelativeError(analytic[i], numeric.data()[i]));
  }
  return worst;
}

}  // namespace

SuiteResult VerifyLossOracles(std::uint64_t seed, int instances) {
  const auto start = Clock::now();
  Tally tally("losses.oracle", 1e-9);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> frames(1, 6), tokens(0, 3), vocab(1, 3);
  for (int n = 0; n < instances; ++n) {
    const int T = frames(rng), U = tokens(rng), V = vocab(rng);
    const std::vector<int> y = RandomTarget(U, V, rng);
    const std::string where = fmt::format("instance {} (T={}, U={}, V={})", n, T, U, V);

    const CtcLogits ctc{RandomTensor({T, V + 1}, rng)};
    tally.Check(LossGap(CtcLoss(ctc, y).loss, oracle::CtcLossByEnumeration(ctc.values, y)),
                "ctc " + where);

    const Tensor rnnt = RandomTensor({T, U + 1, V + 1}, rng);
    tally.Check(LossGap(RnntLoss(rnnt, y, V).loss, oracle::RnntLossByEnumeration(rnnt, y, V)),
                "rnnt " + where);

    const TdtConfig config = TdtConfig::WithBlank(V, RandomDurations(rng));
    const TdtLatticeLogits tdt{
        RandomTensor({T, U + 1, V + 1}, rng),
        RandomTensor({T, U + 1, static_cast<int>(config.durations.size())}, rng)};
    double mass = 0.0;
    for (const Alignment& a : EnumerateAlignments(tdt, y, config)) mass += a.probability;
    const double expected = mass > 0.0 ? -std::log(mass) : std::numeric_limits<double>::infinity();
    tally.Check(LossGap(TdtLoss(tdt, y, config).loss, expected), "tdt " + where);
    tally.Instance();
  }
  return tally.Finish(start);
}

SuiteResult VerifyLossGradients(std::uint64_t seed, int instances) {
  const auto start = Clock::now();
  Tally tally("losses.gradient", 1e-4);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> frames(2, 6), tokens(0, 3), vocab(1, 3);
  const double h = 1e-4;
  for (int n = 0; n < instances; ++n) {
    const int T = frames(rng), V = vocab(rng);
    const int U = std::min(tokens(rng), T / 2);
    const std::vector<int> y = RandomTarget(U, V, rng);
    const std::string where = fmt::format("instance {} (T={}, U={}, V={})", n, T, U, V);

    const CtcLogits ctc{RandomTensor({T, V + 1}, rng)};
    const LossResult c = CtcLoss(ctc, y);
    if (c.feasible) {
      const Tensor fd = oracle::FiniteDifferenceGradient(
          [&](const Tensor& x) { return CtcLoss(CtcLogits{x}, y).loss; }, ctc.values, h);
      tally.Check(MaxRelativeError(c.grad_token_logits.data(), fd), "ctc " + where);
    }

    const Tensor rnnt = RandomTensor({T, U + 1, V + 1}, rng);
    const LossResult r = RnntLoss(rnnt, y, V);
    const Tensor fd_r = oracle::FiniteDifferenceGradient(
        [&](const Tensor& x) { return RnntLoss(x, y, V).loss; }, rnnt, h);
    tally.Check(MaxRelativeError(r.grad_token_logits.data(), fd_r), "rnnt " + where);

    const TdtConfig config = TdtConfig::WithBlank(V, {0, 1, 2});
    const TdtLatticeLogits tdt{RandomTensor({T, U + 1, V + 1}, rng),
                               RandomTensor({T, U + 1, 3}, rng)};
    const LossResult t = TdtLoss(tdt, y, config);
    if (!t.feasible) {
      tally.Fail("tdt " + where + ": unexpectedly infeasible");
      continue;
    }
    const Tensor fd_tok = oracle::FiniteDifferenceGradient(
        [&](const Tensor& x) { return TdtLoss({x, tdt.duration}, y, config).loss; }, tdt.token, h);
    const Tensor fd_dur = oracle::FiniteDifferenceGradient(
        [&](const Tensor& x) { return TdtLoss({tdt.token, x}, y, config).loss; }, tdt.duration, h);
    tally.Check(MaxRelativeError(t.grad_token_logits.data(), fd_tok), "tdt token " + where);
    tally.Check(MaxRelativeError(t.grad_duration_logits.data(), fd_dur), "tdt duration " + where);
    tally.Instance();
  }
  return tally.Finish(start);
}

SuiteResult VerifyModelGradients(std::uint64_t seed, int instances) {
  const auto start = Clock::now();
  Tally tally("model.gradient", 1e-3);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> frames(16, 24), tokens(0, 3);
  std::normal_distribution<double> normal;
  const double h = 1e-5;
  for (int n = 0; n < instances; ++n) {
    ModelConfig c;
    c.feature_dim = 4;
    c.hidden_dim = 8;
    c.num_blocks = 1;
    c.subsample_factor = 4;
    c.vocab_size = 3;
    c.durations = {0, 1, 2};
    c.predictor_dim = 5;
    c.seed = seed * 7919u + static_cast<std::uint64_t>(n);
    if (n % 2 == 1) c.attention_window = 1;

    const int t_in = frames(rng);
    Mat x(t_in, c.feature_dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    // Redraw until CTC can align the target (T = 4..6 here).
    std::vector<int> y = RandomTarget(tokens(rng), c.vocab_size, rng);
    while (CtcTargetInfeasible(c.EncodedFrames(t_in), y)) y = RandomTarget(tokens(rng), c.vocab_size, rng);
    const LossWeights weights{1.0, 0.3};

    Parameters p = Parameters::Initialize(c);
    Parameters grad = Parameters::Zeros(c);
    if (!ForwardBackward(p, c, x, t_in, y, weights, &grad).feasible) {
      tally.Fail(fmt::format("instance {}: infeasible sample", n));
      continue;
    }
    std::vector<Mat*> values;
    std::vector<const Mat*> grads;
    std::vector<std::string> names;
    p.ForEach([&](const std::string& name, Mat& m) {
      values.push_back(&m);
      names.push_back(name);
    });
    grad.ForEach([&](const std::string&, const Mat& m) { grads.push_back(&m); });
    for (std::size_t k = 0; k < values.size(); ++k) {
      Mat& m = *values[k];
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        auto central = [&](double step) {
          const double saved = m.data()[i];
          m.data()[i] = saved + step;
          const double up = ForwardBackward(p, c, x, t_in, y, weights, nullptr).total;
          m.data()[i] = saved - step;
          const double down = ForwardBackward(p, c, x, t_in, y, weights, nullptr).total;
          m.data()[i] = saved;
          return (up - down) / (2 * step);
        };
        double error = oracle::RelativeError(grads[k]->data()[i], central(h));
        // A ReLU input within h of zero puts a kink inside the stencil; a
        // much smaller step steps off it.
        if (error >= tally.tolerance()) {
          error = std::min(error, oracle::RelativeError(grads[k]->data()[i], central(h / 100)));
        }
        tally.Check(error, fmt::format("instance {} {}[{}]", n, names[k], i));
      }
    }
    tally.Instance();
  }
  return tally.Finish(start);
}

SuiteResult VerifyNormalization(std::uint64_t seed, int instances) {
  const auto start = Clock::now();
  Tally tally("losses.normalization", 1e-9);
  std::mt19937_64 rng(seed);
  const int V = 2;
  // All label sequences over {0, 1} up to a length.
  auto targets = [](int max_len) {
    std::vector<std::vector<int>> out;
    for (int len = 0; len <= max_len; ++len) {
      for (int code = 0; code < (1 << len); ++code) {
        std::vector<int> y(len);
        for (int i = 0; i < len; ++i) y[i] = (code >> i) & 1;
        out.push_back(y);
      }
    }
    return out;
  };
  for (int n = 0; n < instances; ++n) {
    const int T = 2 + n % 3;
    const CtcLogits ctc{RandomTensor({T, V + 1}, rng)};
    double ctc_mass = 0.0;
    for (const auto& y : targets(T)) {
      const LossResult r = CtcLoss(ctc, y);
      if (r.feasible) ctc_mass += std::exp(-r.loss);
    }
    tally.Check(std::abs(ctc_mass - 1.0), fmt::format("ctc instance {} (T={})", n, T));

    // Logits depend on (t, u) only, so slicing one grid by target length
    // gives a proper distribution over sequences. Durations that would pass
    // the last frame get a logit low enough to carry no mass in double
    // precision; every step that remains lands inside the lattice.
    const std::vector<int> durations = n % 2 == 0 ? std::vector<int>{1} : std::vector<int>{1, 2};
    const TdtConfig config = TdtConfig::WithBlank(V, durations);
    const int nd = static_cast<int>(durations.size());
    const Tensor tok = RandomTensor({T, T + 1, V + 1}, rng);
    Tensor dur = RandomTensor({T, T + 1, nd}, rng);
    for (int t = 0; t < T; ++t) {
      for (int u = 0; u <= T; ++u) {
        for (int j = 0; j < nd; ++j) {
          if (t + durations[j] > T) dur(t, u, j) = -800.0;
        }
      }
    }
    double tdt_mass = 0.0;
    for (const auto& y : targets(T)) {
      const int len = static_cast<int>(y.size());
      TdtLatticeLogits logits{Tensor({T, len + 1, V + 1}), Tensor({T, len + 1, nd})};
      for (int t = 0; t < T; ++t) {
        for (int u = 0; u <= len; ++u) {
          for (int k = 0; k <= V; ++k) logits.token(t, u, k) = tok(t, u, k);
          for (int j = 0; j < nd; ++j) logits.duration(t, u, j) = dur(t, u, j);
        }
      }
      const LossResult r = TdtLoss(logits, y, config);
      if (r.feasible) tdt_mass += std::exp(-r.loss);
    }
    tally.Check(std::abs(tdt_mass - 1.0),
                fmt::format("tdt instance {} (T={}, |D|={})", n, T, nd));
    tally.Instance();
  }
  return tally.Finish(start);
}

std::vector<SuiteResult> RunVerifySuites(const std::string& which, std::uint64_t seed) {
  const bool losses = which == "losses" || which == "all";
  const bool gradients = which == "gradients" || which == "all";
  if (!losses && !gradients) {
    throw InputError("verify target must be losses, gradients or all");
  }
  std::vector<SuiteResult> out;
  if (losses) {
    out.push_back(VerifyLossOracles(seed));
    out.push_back(VerifyNormalization(seed));
  }
  if (gradients) {
    out.push_back(VerifyLossGradients(seed));
    out.push_back(VerifyModelGradients(seed));
  }
  return out;
}

std::string FormatSuiteResult(const SuiteResult& r) {
  std::string line = fmt::format("{} {:<22} {:>4} instances  worst {:.2e}  tol {:.0e}  {:.2f}s",
                                 r.passed ? "PASS" : "FAIL", r.name, r.instances, r.worst,
                                 r.tolerance, r.seconds);
  if (!r.passed) line += "  [" + r.detail + "]";
  return line;
}

}  // namespace pnc
