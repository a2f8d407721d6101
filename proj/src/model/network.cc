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


#include "pnc/model/network.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>

#include "pnc/error.h"

namespace pnc {

namespace {

struct BlockCache {
  Mat input, query, key, value, attention, context, residual, hidden_pre;
};

struct EncoderCache {
  Mat stacked, subsample_pre;
  std::vector<BlockCache> blocks;
  Mat output;
};

Mat Relu(const Mat& m) { return m.cwiseMax(0.0); }

Mat ReluMask(const Mat& pre) { return (pre.array() > 0.0).cast<double>().matrix(); }

Mat ColumnSum(const Mat& m) { return m.colwise().sum(); }

// Groups of subsample_factor consecutive frames laid side by side; frames at
// or past num_frames read as zero.
Mat StackFrames(const Mat& features, int num_frames, int factor) {
  const int frames_out = (num_frames + factor - 1) / factor;
  const Eigen::Index dim = features.cols();
  Mat out = Mat::Zero(frames_out, factor * dim);
  for (int t = 0; t < frames_out; ++t) {
    for (int k = 0; k < factor; ++k) {
      const int src = t * factor + k;
      if (src >= num_frames) break;
      out.block(t, k * dim, 1, dim) = features.row(src);
    }
  }
  return out;
}

void SoftmaxRows(Mat& scores, const std::optional<int>& window) {
  const Eigen::Index n = scores.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index lo = 0, hi = n - 1;
    if (window) {
      lo = std::max<Eigen::Index>(0, i - *window);
      hi = std::min<Eigen::Index>(n - 1, i + *window);
    }
    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = lo; j <= hi; ++j) peak = std::max(peak, scores(i, j));
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j < lo || j > hi) {
        scores(i, j) = 0.0;
      } else {
        scores(i, j) = std::exp(scores(i, j) - peak);
        total += scores(i, j);
      }
    }
    scores.row(i) /= total;
  }
}

EncoderCache RunEncoder(const Parameters& p, const ModelConfig& c, const Mat& features,
                        int num_frames) {
  if (num_frames < 1 || num_frames > features.rows()) {
    throw InputError("num_frames must be in [1, rows of the feature matrix]");
  }
  if (features.cols() != c.feature_dim) {
    throw InputError("feature dimension does not match the model");
  }
  EncoderCache cache;
  cache.stacked = StackFrames(features, num_frames, c.subsample_factor);
  cache.subsample_pre = cache.stacked * p.subsample.transpose();
  cache.subsample_pre.rowwise() += p.subsample_bias.row(0);
  Mat h = Relu(cache.subsample_pre);

  const double scale = 1.0 / std::sqrt(static_cast<double>(c.hidden_dim));
  for (const BlockParameters& bp : p.blocks) {
    BlockCache bc;
    bc.input = h;
    bc.query = h * bp.query.transpose();
    bc.key = h * bp.key.transpose();
    bc.value = h * bp.value.transpose();
    bc.attention = scale * (bc.query * bc.key.transpose());
    SoftmaxRows(bc.attention, c.attention_window);
    bc.context = bc.attention * bc.value;
    bc.residual = h + bc.context * bp.output.transpose();
    bc.hidden_pre = bc.residual * bp.mlp_in.transpose();
    bc.hidden_pre.rowwise() += bp.mlp_in_bias.row(0);
    h = bc.residual + Relu(bc.hidden_pre) * bp.mlp_out.transpose();
    h.rowwise() += bp.mlp_out_bias.row(0);
    cache.blocks.push_back(std::move(bc));
  }
  cache.output = std::move(h);
  return cache;
}

void BackpropEncoder(const Parameters& p, const ModelConfig& c, const EncoderCache& cache,
                     Mat d_out, Parameters& g) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(c.hidden_dim));
  for (int b = static_cast<int>(p.blocks.size()) - 1; b >= 0; --b) {
    const BlockParameters& bp = p.blocks[b];
    const BlockCache& bc = cache.blocks[b];
    BlockParameters& gb = g.blocks[b];

    const Mat hidden = Relu(bc.hidden_pre);
    gb.mlp_out.noalias() += d_out.transpose() * hidden;
    gb.mlp_out_bias += ColumnSum(d_out);
    const Mat d_hidden_pre = (d_out * bp.mlp_out).cwiseProduct(ReluMask(bc.hidden_pre));
    gb.mlp_in.noalias() += d_hidden_pre.transpose() * bc.residual;
    gb.mlp_in_bias += ColumnSum(d_hidden_pre);
    const Mat d_residual = d_out + d_hidden_pre * bp.mlp_in;

    gb.output.noalias() += d_residual.transpose() * bc.context;
    const Mat d_context = d_residual * bp.output;
    const Mat d_attention = d_context * bc.value.transpose();
    const Mat d_value = bc.attention.transpose() * d_context;
    const Eigen::VectorXd row_dot = d_attention.cwiseProduct(bc.attention).rowwise().sum();
    const Mat d_scores =
        scale * bc.attention.cwiseProduct(d_attention - row_dot.replicate(1, d_attention.cols()));
    const Mat d_query = d_scores * bc.key;
    const Mat d_key = d_scores.transpose() * bc.query;
    gb.query.noalias() += d_query.transpose() * bc.input;
    gb.key.noalias() += d_key.transpose() * bc.input;
    gb.value.noalias() += d_value.transpose() * bc.input;
    d_out = d_residual + d_query * bp.query + d_key * bp.key + d_value * bp.value;
  }
  const Mat d_pre = d_out.cwiseProduct(ReluMask(cache.subsample_pre));
  g.subsample.noalias() += d_pre.transpose() * cache.stacked;
  g.subsample_bias += ColumnSum(d_pre);
}

std::vector<int> PredictorInputs(const ModelConfig& c, std::span<const int> target) {
  std::vector<int> inputs = {c.vocab_size};
  for (int y : target) {
    if (y < 0 || y >= c.vocab_size) throw InputError("target token out of range");
    inputs.push_back(y);
  }
  return inputs;
}

struct JointCache {
  std::vector<int> inputs;
  Mat embedded, predicted, combined;  // combined: T(U+1) x H after tanh
  Mat token_logits, duration_logits;
};

JointCache RunJoint(const Parameters& p, const ModelConfig& c, const Mat& encoded,
                    std::span<const int> target) {
  JointCache jc;
  jc.inputs = PredictorInputs(c, target);
  const int t_len = static_cast<int>(encoded.rows());
  const int u_len = static_cast<int>(jc.inputs.size());
  jc.embedded.resize(u_len, p.embedding.cols());
  for (int u = 0; u < u_len; ++u) jc.embedded.row(u) = p.embedding.row(jc.inputs[u]);
  jc.predicted = jc.embedded * p.predictor.transpose();
  jc.predicted.rowwise() += p.predictor_bias.row(0);

  const Mat enc_proj = encoded * p.joint_encoder.transpose();
  Mat pred_proj = jc.predicted * p.joint_predictor.transpose();
  pred_proj.rowwise() += p.joint_bias.row(0);
  jc.combined.resize(static_cast<Eigen::Index>(t_len) * u_len, enc_proj.cols());
  for (int t = 0; t < t_len; ++t) {
    for (int u = 0; u < u_len; ++u) {
      jc.combined.row(t * u_len + u) = (enc_proj.row(t) + pred_proj.row(u)).array().tanh();
    }
  }
  jc.token_logits = jc.combined * p.token.transpose();
  jc.token_logits.rowwise() += p.token_bias.row(0);
  jc.duration_logits = jc.combined * p.duration.transpose();
  jc.duration_logits.rowwise() += p.duration_bias.row(0);
  return jc;
}

Tensor ToTensor(const Mat& m, int t_len, int u_len) {
  Tensor out({t_len, u_len, static_cast<int>(m.cols())});
  std::memcpy(out.data().data(), m.data(), sizeof(double) * m.size());
  return out;
}

using ConstMap = Eigen::Map<const Mat>;

}  // namespace

Mat FeaturesToMat(const FeatureMatrix& f) {
  Mat m(f.num_frames, f.dim);
  for (int t = 0; t < f.num_frames; ++t) {
    for (int d = 0; d < f.dim; ++d) m(t, d) = f.at(t, d);
  }
  return m;
}

Mat Encode(const Parameters& params, const ModelConfig& config, const Mat& features,
           int num_frames) {
  return RunEncoder(params, config, features, num_frames).output;
}

CtcLogits CtcHead(const Parameters& p, const Mat& encoded) {
  Mat logits = encoded * p.ctc.transpose();
  logits.rowwise() += p.ctc_bias.row(0);
  CtcLogits out{Tensor({static_cast<int>(logits.rows()), static_cast<int>(logits.cols())})};
  std::memcpy(out.values.data().data(), logits.data(), sizeof(double) * logits.size());
  return out;
}

TdtLatticeLogits JointLattice(const Parameters& p, const ModelConfig& c, const Mat& encoded,
                              std::span<const int> target) {
  const JointCache jc = RunJoint(p, c, encoded, target);
  const int t_len = static_cast<int>(encoded.rows());
  const int u_len = static_cast<int>(target.size()) + 1;
  return {ToTensor(jc.token_logits, t_len, u_len), ToTensor(jc.duration_logits, t_len, u_len)};
}

JointScorer MakeJointScorer(const Parameters& p, const ModelConfig& c, const Mat& encoded) {
  auto enc_proj = std::make_shared<Mat>(encoded * p.joint_encoder.transpose());
  // Context is one token, so every predictor state can be tabulated up front.
  auto pred_proj = std::make_shared<Mat>(
      (p.embedding * p.predictor.transpose()).rowwise() + p.predictor_bias.row(0));
  *pred_proj = *pred_proj * p.joint_predictor.transpose();
  pred_proj->rowwise() += p.joint_bias.row(0);
  const int start = c.vocab_size;
  const Parameters* params = &p;
  return [enc_proj, pred_proj, start, params](int t, std::span<const int> prefix) {
    const int last = prefix.empty() ? start : prefix.back();
    const Eigen::RowVectorXd combined =
        (enc_proj->row(t) + pred_proj->row(last)).array().tanh().matrix();
    const Eigen::RowVectorXd tok =
        combined * params->token.transpose() + params->token_bias.row(0);
    const Eigen::RowVectorXd dur =
        combined * params->duration.transpose() + params->duration_bias.row(0);
    JointOutput out;
    out.token_logits.assign(tok.data(), tok.data() + tok.size());
    out.duration_logits.assign(dur.data(), dur.data() + dur.size());
    return out;
  };
}

SampleLosses ForwardBackward(const Parameters& p, const ModelConfig& c, const Mat& features,
                             int num_frames, std::span<const int> target,
                             const LossWeights& weights, Parameters* grad, double scale) {
  const EncoderCache enc = RunEncoder(p, c, features, num_frames);
  const int t_len = static_cast<int>(enc.output.rows());
  const int u_len = static_cast<int>(target.size()) + 1;

  const CtcLogits ctc_logits = CtcHead(p, enc.output);
  const LossResult ctc = CtcLoss(ctc_logits, target);
  const JointCache jc = RunJoint(p, c, enc.output, target);
  const TdtLatticeLogits lattice{ToTensor(jc.token_logits, t_len, u_len),
                                 ToTensor(jc.duration_logits, t_len, u_len)};
  const LossResult tdt = TdtLoss(lattice, target, c.tdt());

  SampleLosses out;
  out.tdt = tdt.loss;
  out.ctc = ctc.loss;
  out.feasible = tdt.feasible && ctc.feasible;
  if (!out.feasible) {
    out.total = std::numeric_limits<double>::infinity();
    return out;
  }
  out.total = weights.tdt * tdt.loss + weights.ctc * ctc.loss;
  if (grad == nullptr) return out;

  Parameters& g = *grad;
  Mat d_encoded = Mat::Zero(enc.output.rows(), enc.output.cols());

  if (weights.ctc != 0.0) {
    const double s = scale * weights.ctc;
    const ConstMap g_ctc(ctc.grad_token_logits.data().data(), t_len, c.vocab_size + 1);
    g.ctc.noalias() += s * (g_ctc.transpose() * enc.output);
    g.ctc_bias += s * ColumnSum(g_ctc);
    d_encoded.noalias() += s * (g_ctc * p.ctc);
  }

  if (weights.tdt != 0.0) {
    const double s = scale * weights.tdt;
    const Eigen::Index cells = static_cast<Eigen::Index>(t_len) * u_len;
    const Mat g_tok = s * ConstMap(tdt.grad_token_logits.data().data(), cells, c.vocab_size + 1);
    const Mat g_dur = s * ConstMap(tdt.grad_duration_logits.data().data(), cells,
                                   static_cast<Eigen::Index>(c.durations.size()));
    g.token.noalias() += g_tok.transpose() * jc.combined;
    g.token_bias += ColumnSum(g_tok);
    g.duration.noalias() += g_dur.transpose() * jc.combined;
    g.duration_bias += ColumnSum(g_dur);

    Mat d_pre = g_tok * p.token + g_dur * p.duration;
    d_pre.array() *= 1.0 - jc.combined.array().square();
    Mat d_enc_proj = Mat::Zero(t_len, d_pre.cols());
    Mat d_pred_proj = Mat::Zero(u_len, d_pre.cols());
    for (int t = 0; t < t_len; ++t) {
      for (int u = 0; u < u_len; ++u) {
        d_enc_proj.row(t) += d_pre.row(t * u_len + u);
        d_pred_proj.row(u) += d_pre.row(t * u_len + u);
      }
    }
    g.joint_encoder.noalias() += d_enc_proj.transpose() * enc.output;
    d_encoded.noalias() += d_enc_proj * p.joint_encoder;
    g.joint_predictor.noalias() += d_pred_proj.transpose() * jc.predicted;
    g.joint_bias += ColumnSum(d_pred_proj);
    const Mat d_predicted = d_pred_proj * p.joint_predictor;
    g.predictor.noalias() += d_predicted.transpose() * jc.embedded;
    g.predictor_bias += ColumnSum(d_predicted);
    const Mat d_embedded = d_predicted * p.predictor;
    for (int u = 0; u < u_len; ++u) g.embedding.row(jc.inputs[u]) += d_embedded.row(u);
  }

  BackpropEncoder(p, c, enc, std::move(d_encoded), g);
  return out;
}

}  // namespace pnc
