// core/src/network_attention.cc

// Copyright 2026  The STT Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>

#include "network_internal.h"
#include "stt/error.h"
#include "stt/logmath.h"

namespace stt {
namespace internal {

RealMatrix location_conv(ConstMatView kernel, std::span<const double> alpha) {
  const int T = static_cast<int>(alpha.size());
  const int C = kernel.rows;
  const int K = kernel.cols;
  const int half = K / 2;
  RealMatrix feat(T, C);
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < C; ++c) {
      double acc = 0.0;
      for (int j = 0; j < K; ++j) {
        const int s = t + j - half;
        if (s >= 0 && s < T) acc += kernel(c, j) * alpha[s];
      }
      feat(t, c) = acc;
    }
  }
  return feat;
}

void location_conv_backward(ConstMatView kernel, std::span<const double> alpha,
                            const RealMatrix& d_feat, MatView g_kernel,
                            std::span<double> d_alpha) {
  const int T = static_cast<int>(alpha.size());
  const int C = kernel.rows;
  const int K = kernel.cols;
  const int half = K / 2;
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < C; ++c) {
      const double df = d_feat(t, c);
      if (df == 0.0) continue;
      for (int j = 0; j < K; ++j) {
        const int s = t + j - half;
        if (s >= 0 && s < T) {
          g_kernel(c, j) += df * alpha[s];
          d_alpha[s] += df * kernel(c, j);
        }
      }
    }
  }
}

void attn_step_core(const ModelSpec& spec, const Parameters& params, const RealMatrix& enc,
                    const RealMatrix& enc_proj, const AttentionState& state, int prev_token,
                    AttentionState* next_state, std::vector<double>* logits,
                    AttnStepCache* cache) {
  const int T = enc.rows();
  const int D = enc.cols();
  const int A = spec.attention.attn_dim;
  const int w = spec.decoder_width;

  const ConstMatView emb = params.view("att.emb");
  STT_CHECK(prev_token >= 0 && prev_token < emb.rows, "attention: bad previous token ", prev_token);

  if (cache != nullptr) {
    cache->prev_token = prev_token;
    cache->alpha_prev = state.prev_attn;
  }

  // AttentionRNN consumes the embedded previous token.
  const LstmParams arnn = lstm_params(params, "att.arnn");
  std::vector<double> h_attn(w), c_attn(w);
  lstm_step(arnn, emb.row(prev_token), state.attn_h, state.attn_c, h_attn, c_attn,
            cache != nullptr ? &cache->arnn : nullptr);

  // Hybrid energies: content (projected encoder), state, location features.
  const RealMatrix loc_feat = location_conv(params.view("att.loc.conv"), state.prev_attn);
  const ConstMatView w_state = params.view("att.state.w");
  const ConstMatView w_loc = params.view("att.loc.w");
  const ConstMatView bias = params.view("att.energy.b");
  const ConstMatView v = params.view("att.energy.v");

  std::vector<double> state_term(A);
  matvec(w_state, h_attn, state_term);

  std::vector<double> energies(T);
  RealMatrix tanh_energy(T, A);
  for (int t = 0; t < T; ++t) {
    auto th = tanh_energy.row(t);
    for (int a = 0; a < A; ++a) th[a] = enc_proj(t, a) + state_term[a] + bias(a, 0);
    matvec_acc(w_loc, loc_feat.row(t), th);
    double e = 0.0;
    for (int a = 0; a < A; ++a) {
      th[a] = std::tanh(th[a]);
      e += v(a, 0) * th[a];
    }
    energies[t] = e;
  }
  std::vector<double> alpha = log_softmax(energies);
  for (double& a : alpha) a = std::exp(a);

  std::vector<double> context(D, 0.0);
  for (int t = 0; t < T; ++t) axpy(alpha[t], enc.row(t), context);

  // DecoderRNN consumes [context; attention-rnn hidden].
  std::vector<double> dec_in(D + w);
  std::copy(context.begin(), context.end(), dec_in.begin());
  std::copy(h_attn.begin(), h_attn.end(), dec_in.begin() + D);
  const LstmParams drnn = lstm_params(params, "att.drnn");
  std::vector<double> h_dec(w), c_dec(w);
  lstm_step(drnn, dec_in, state.dec_h, state.dec_c, h_dec, c_dec,
            cache != nullptr ? &cache->drnn : nullptr);

  if (logits != nullptr) {
    const ConstMatView w_out = params.view("att.out.w");
    const ConstMatView b_out = params.view("att.out.b");
    logits->assign(w_out.rows, 0.0);
    for (int r = 0; r < w_out.rows; ++r) (*logits)[r] = b_out(r, 0);
    matvec_acc(w_out, h_dec, *logits);
  }

  if (cache != nullptr) {
    cache->loc_feat = loc_feat;
    cache->tanh_energy = tanh_energy;
    cache->alpha = alpha;
    cache->context = context;
    cache->dec_in = dec_in;
    cache->h_attn = h_attn;
    cache->h_dec = h_dec;
  }
  if (next_state != nullptr) {
    next_state->attn_h = std::move(h_attn);
    next_state->attn_c = std::move(c_attn);
    next_state->dec_h = std::move(h_dec);
    next_state->dec_c = std::move(c_dec);
    next_state->prev_attn = std::move(alpha);
  }
}

AttentionTrace attention_forward(const ModelSpec& spec, const Parameters& params,
                                 const RealMatrix& enc, const LabelSeq& labels,
                                 AttnSeqCache* cache) {
  const Alphabet alphabet = spec.alphabet();
  validate_labels(labels, alphabet.size());
  const int U = static_cast<int>(labels.size());
  const int T = enc.rows();

  // Content term, shared by every step.
  const ConstMatView w_enc = params.view("att.enc.w");
  RealMatrix enc_proj(T, w_enc.rows);
  for (int t = 0; t < T; ++t) matvec(w_enc, enc.row(t), enc_proj.row(t));

  if (cache != nullptr) {
    cache->enc_proj = enc_proj;
    cache->steps.resize(U + 1);
  }

  AttentionTrace trace;
  trace.step_logits = RealMatrix(U + 1, alphabet.num_attention_classes());
  trace.attention_rows = RealMatrix(U + 1, T);

  AttentionState state = attention_start(spec, T);
  std::vector<double> logits;
  for (int u = 0; u <= U; ++u) {
    const int prev_token = u == 0 ? alphabet.sos_id() : labels[u - 1];
    AttentionState next;
    attn_step_core(spec, params, enc, enc_proj, state, prev_token, &next, &logits,
                   cache != nullptr ? &cache->steps[u] : nullptr);
    std::copy(logits.begin(), logits.end(), trace.step_logits.row(u).begin());
    std::copy(next.prev_attn.begin(), next.prev_attn.end(), trace.attention_rows.row(u).begin());
    state = std::move(next);
  }
  return trace;
}

RealMatrix attention_backward(const ModelSpec& spec, const Parameters& params,
                              const RealMatrix& enc, const AttnSeqCache& cache,
                              const RealMatrix& d_logits, Parameters& grad) {
  const int T = enc.rows();
  const int D = enc.cols();
  const int A = spec.attention.attn_dim;
  const int w = spec.decoder_width;
  const int steps = static_cast<int>(cache.steps.size());

  const LstmParams arnn = lstm_params(params, "att.arnn");
  const LstmParams drnn = lstm_params(params, "att.drnn");
  const LstmGrads g_arnn = lstm_grads(grad, "att.arnn");
  const LstmGrads g_drnn = lstm_grads(grad, "att.drnn");
  const ConstMatView w_out = params.view("att.out.w");
  const ConstMatView w_state = params.view("att.state.w");
  const ConstMatView w_loc = params.view("att.loc.w");
  const ConstMatView w_enc = params.view("att.enc.w");
  const ConstMatView v = params.view("att.energy.v");
  const ConstMatView conv = params.view("att.loc.conv");
  const MatView g_out_w = grad.view("att.out.w");
  const MatView g_out_b = grad.view("att.out.b");
  const MatView g_state = grad.view("att.state.w");
  const MatView g_loc = grad.view("att.loc.w");
  const MatView g_enc_w = grad.view("att.enc.w");
  const MatView g_bias = grad.view("att.energy.b");
  const MatView g_v = grad.view("att.energy.v");
  const MatView g_conv = grad.view("att.loc.conv");
  const MatView g_emb = grad.view("att.emb");

  RealMatrix d_enc(T, D);
  RealMatrix d_enc_proj(T, A);

  std::vector<double> dh_attn(w, 0.0), dc_attn(w, 0.0), dh_dec(w, 0.0), dc_dec(w, 0.0);
  std::vector<double> d_alpha_next(T, 0.0);  // via the next step's location conv
  std::vector<double> dh_attn_prev(w), dc_attn_prev(w), dh_dec_prev(w), dc_dec_prev(w);

  for (int u = steps - 1; u >= 0; --u) {
    const AttnStepCache& sc = cache.steps[u];

    // Output projection.
    const auto dl = d_logits.row(u);
    outer_acc(g_out_w, dl, sc.h_dec);
    for (int r = 0; r < w_out.rows; ++r) g_out_b(r, 0) += dl[r];
    std::vector<double> dh_dec_step(dh_dec);
    matvec_transpose_acc(w_out, dl, dh_dec_step);

    // DecoderRNN.
    std::vector<double> d_dec_in(D + w);
    lstm_step_backward(drnn, sc.drnn, dh_dec_step, dc_dec, g_drnn, d_dec_in, dh_dec_prev,
                       dc_dec_prev);
    dh_dec = dh_dec_prev;
    dc_dec = dc_dec_prev;
    std::span<const double> d_context(d_dec_in.data(), D);
    for (int j = 0; j < w; ++j) dh_attn[j] += d_dec_in[D + j];

    // Context: c = sum_t alpha_t h_t.
    std::vector<double> d_alpha(T, 0.0);
    for (int t = 0; t < T; ++t) {
      const auto h_row = enc.row(t);
      double dot = 0.0;
      for (int j = 0; j < D; ++j) dot += d_context[j] * h_row[j];
      d_alpha[t] = dot + d_alpha_next[t];
      axpy(sc.alpha[t], d_context, d_enc.row(t));
    }

    // Softmax over energies.
    double dot_alpha = 0.0;
    for (int t = 0; t < T; ++t) dot_alpha += d_alpha[t] * sc.alpha[t];
    std::vector<double> d_energy(T);
    for (int t = 0; t < T; ++t) d_energy[t] = sc.alpha[t] * (d_alpha[t] - dot_alpha);

    // Energies e_t = v . tanh(z_t).
    std::vector<double> d_state_sum(A, 0.0);
    RealMatrix d_feat(T, spec.attention.conv_channels);
    for (int t = 0; t < T; ++t) {
      const auto th = sc.tanh_energy.row(t);
      const double de = d_energy[t];
      std::vector<double> dz(A);
      for (int a = 0; a < A; ++a) {
        g_v(a, 0) += de * th[a];
        dz[a] = de * v(a, 0) * (1.0 - th[a] * th[a]);
        d_enc_proj(t, a) += dz[a];
        d_state_sum[a] += dz[a];
        g_bias(a, 0) += dz[a];
      }
      outer_acc(g_loc, dz, sc.loc_feat.row(t));
      matvec_transpose_acc(w_loc, dz, d_feat.row(t));
    }
    // d(state term) -> attention hidden.
    std::vector<double> dh_from_energy(w, 0.0);
    matvec_transpose_acc(w_state, d_state_sum, dh_from_energy);
    outer_acc(g_state, d_state_sum, sc.h_attn);
    for (int j = 0; j < w; ++j) dh_attn[j] += dh_from_energy[j];

    // Location conv feeds this step from the previous step's weights.
    std::fill(d_alpha_next.begin(), d_alpha_next.end(), 0.0);
    location_conv_backward(conv, sc.alpha_prev, d_feat, g_conv, d_alpha_next);

    // AttentionRNN.
    std::vector<double> d_emb_in(arnn.w_ih.cols);
    lstm_step_backward(arnn, sc.arnn, dh_attn, dc_attn, g_arnn, d_emb_in, dh_attn_prev,
                       dc_attn_prev);
    dh_attn = dh_attn_prev;
    dc_attn = dc_attn_prev;
    axpy(1.0, d_emb_in, g_emb.row(sc.prev_token));
  }
  // The initial uniform attention row is a constant; its gradient is dropped.

  // Content projection: enc_proj = W_enc h.
  for (int t = 0; t < T; ++t) {
    outer_acc(g_enc_w, d_enc_proj.row(t), enc.row(t));
    matvec_transpose_acc(w_enc, d_enc_proj.row(t), d_enc.row(t));
  }
  return d_enc;
}

}  // namespace internal

AttentionState attention_start(const ModelSpec& spec, int num_encoder_steps) {
  STT_CHECK(num_encoder_steps >= 1, "attention: need at least one encoder step");
  AttentionState state;
  state.attn_h.assign(spec.decoder_width, 0.0);
  state.attn_c.assign(spec.decoder_width, 0.0);
  state.dec_h.assign(spec.decoder_width, 0.0);
  state.dec_c.assign(spec.decoder_width, 0.0);
  state.prev_attn.assign(num_encoder_steps, 1.0 / num_encoder_steps);
  return state;
}

AttentionStepResult attention_step(const ModelSpec& spec, const Parameters& params,
                                   const RealMatrix& encoder_out, const AttentionState& state,
                                   int prev_token) {
  STT_CHECK(static_cast<int>(state.prev_attn.size()) == encoder_out.rows(),
            "attention state does not match encoder length");
  const ConstMatView w_enc = params.view("att.enc.w");
  RealMatrix enc_proj(encoder_out.rows(), w_enc.rows);
  for (int t = 0; t < encoder_out.rows(); ++t) {
    matvec(w_enc, encoder_out.row(t), enc_proj.row(t));
  }
  AttentionStepResult result;
  internal::attn_step_core(spec, params, encoder_out, enc_proj, state, prev_token, &result.state,
                           &result.logits, nullptr);
  result.attn_row = result.state.prev_attn;
  return result;
}

AttentionTrace attention_teacher_forced(const ModelSpec& spec, const Parameters& params,
                                        const RealMatrix& encoder_out, const LabelSeq& labels) {
  return internal::attention_forward(spec, params, encoder_out, labels, nullptr);
}

}  // namespace stt
