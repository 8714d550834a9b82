// core/src/network_internal.h

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

#ifndef STT_NETWORK_INTERNAL_H_
#define STT_NETWORK_INTERNAL_H_

#include <span>
#include <string>
#include <vector>

#include "stt/matrix.h"
#include "stt/network.h"

namespace stt {
namespace internal {

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// ---------------------------------------------------------------------------
// LSTM cell (tanh activations), gates packed [input; forget; cell; output].

struct LstmParams {
  ConstMatView w_ih;  // 4w x in
  ConstMatView w_hh;  // 4w x w
  ConstMatView b;     // 4w x 1
  int width = 0;
};

struct LstmGrads {
  MatView w_ih, w_hh, b;
};

LstmParams lstm_params(const Parameters& p, const std::string& prefix);
LstmGrads lstm_grads(Parameters& g, const std::string& prefix);

struct LstmStepCache {
  std::vector<double> x, h_prev, c_prev;
  std::vector<double> gi, gf, gg, go, c, tanh_c;
};

// h_out/c_out may alias h_prev/c_prev.
void lstm_step(const LstmParams& p, std::span<const double> x, std::span<const double> h_prev,
               std::span<const double> c_prev, std::span<double> h_out, std::span<double> c_out,
               LstmStepCache* cache);

// dh, dc: gradient w.r.t. this step's h and c (dc carries the recurrence).
// Writes dx / dh_prev / dc_prev and accumulates parameter gradients.
void lstm_step_backward(const LstmParams& p, const LstmStepCache& cache,
                        std::span<const double> dh, std::span<const double> dc,
                        const LstmGrads& grads, std::span<double> dx, std::span<double> dh_prev,
                        std::span<double> dc_prev);

struct LstmSeqCache {
  std::vector<LstmStepCache> steps;
};

// Unrolls the cell over the rows of `input` (right to left when `reverse`);
// output row t always corresponds to input row t.
RealMatrix lstm_seq_forward(const LstmParams& p, const RealMatrix& input, bool reverse,
                            LstmSeqCache* cache);

RealMatrix lstm_seq_backward(const LstmParams& p, const LstmSeqCache& cache,
                             const RealMatrix& d_output, bool reverse, const LstmGrads& grads);

// ---------------------------------------------------------------------------
// Dense / downsample helpers

// y_t = W x_t + b for every row.
RealMatrix dense_forward(ConstMatView w, ConstMatView b, const RealMatrix& input);
// Accumulates dW/db, returns d_input.
RealMatrix dense_backward(ConstMatView w, const RealMatrix& input, const RealMatrix& d_output,
                          MatView gw, MatView gb);

// Stacks `factor` consecutive rows (zero padded past T) into ceil(T/factor)
// rows of width factor*cols.
RealMatrix stack_frames(const RealMatrix& input, int factor);
RealMatrix unstack_frames(const RealMatrix& d_stacked, int rows, int cols, int factor);

// ---------------------------------------------------------------------------
// Attention decoder internals

struct AttnStepCache {
  int prev_token = -1;
  LstmStepCache arnn, drnn;
  std::vector<double> alpha_prev;
  RealMatrix loc_feat;          // T' x C
  RealMatrix tanh_energy;       // T' x A
  std::vector<double> alpha;    // T'
  std::vector<double> context;  // D
  std::vector<double> dec_in;   // D + w
  std::vector<double> h_attn, h_dec;
};

struct AttnSeqCache {
  RealMatrix enc_proj;  // T' x A, content term, shared across steps
  std::vector<AttnStepCache> steps;
};

// One decoder step. enc_proj must hold att.enc.w * h_t rows.
void attn_step_core(const ModelSpec& spec, const Parameters& params, const RealMatrix& enc,
                    const RealMatrix& enc_proj, const AttentionState& state, int prev_token,
                    AttentionState* next_state, std::vector<double>* logits,
                    AttnStepCache* cache);

// Teacher-forced pass over sos-prefixed labels; fills `cache` when given.
AttentionTrace attention_forward(const ModelSpec& spec, const Parameters& params,
                                 const RealMatrix& enc, const LabelSeq& labels,
                                 AttnSeqCache* cache);

// Full backward through the teacher-forced pass. d_logits: (U+1) x (V+2).
// Returns the gradient w.r.t. the encoder output; accumulates into grad.
RealMatrix attention_backward(const ModelSpec& spec, const Parameters& params,
                              const RealMatrix& enc, const AttnSeqCache& cache,
                              const RealMatrix& d_logits, Parameters& grad);

// Location features: 1-D same-padded convolution of the attention weights.
RealMatrix location_conv(ConstMatView kernel, std::span<const double> alpha);
void location_conv_backward(ConstMatView kernel, std::span<const double> alpha,
                            const RealMatrix& d_feat, MatView g_kernel,
                            std::span<double> d_alpha);

// ---------------------------------------------------------------------------
// Transducer internals

struct RnntForwardCache {
  RealMatrix pred_in;   // (U+1) x E embedded sos-prefixed labels
  LstmSeqCache pred;
  RealMatrix pred_out;  // (U+1) x w
  RealMatrix frame_proj;   // T' x (V+1)
  RealMatrix prefix_proj;  // (U+1) x (V+1)
};

JointLogits rnnt_forward(const ModelSpec& spec, const Parameters& params, const RealMatrix& enc,
                         const LabelSeq& labels, RnntForwardCache* cache);

}  // namespace internal
}  // namespace stt

#endif  // STT_NETWORK_INTERNAL_H_
