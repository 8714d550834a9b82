// core/src/network_layers.cc

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

namespace stt {
namespace internal {

LstmParams lstm_params(const Parameters& p, const std::string& prefix) {
  LstmParams lp;
  lp.w_ih = p.view(prefix + ".w_ih");
  lp.w_hh = p.view(prefix + ".w_hh");
  lp.b = p.view(prefix + ".b");
  lp.width = lp.w_hh.cols;
  return lp;
}

LstmGrads lstm_grads(Parameters& g, const std::string& prefix) {
  return {g.view(prefix + ".w_ih"), g.view(prefix + ".w_hh"), g.view(prefix + ".b")};
}

void lstm_step(const LstmParams& p, std::span<const double> x, std::span<const double> h_prev,
               std::span<const double> c_prev, std::span<double> h_out, std::span<double> c_out,
               LstmStepCache* cache) {
  const int w = p.width;
  std::vector<double> z(p.b.data, p.b.data + 4 * w);
  matvec_acc(p.w_ih, x, z);
  matvec_acc(p.w_hh, h_prev, z);

  if (cache != nullptr) {
    cache->x.assign(x.begin(), x.end());
    cache->h_prev.assign(h_prev.begin(), h_prev.end());
    cache->c_prev.assign(c_prev.begin(), c_prev.end());
    cache->gi.resize(w);
    cache->gf.resize(w);
    cache->gg.resize(w);
    cache->go.resize(w);
    cache->c.resize(w);
    cache->tanh_c.resize(w);
  }

  for (int j = 0; j < w; ++j) {
    const double gi = sigmoid(z[j]);
    const double gf = sigmoid(z[w + j]);
    const double gg = std::tanh(z[2 * w + j]);
    const double go = sigmoid(z[3 * w + j]);
    const double c = gf * c_prev[j] + gi * gg;
    const double tc = std::tanh(c);
    if (cache != nullptr) {
      cache->gi[j] = gi;
      cache->gf[j] = gf;
      cache->gg[j] = gg;
      cache->go[j] = go;
      cache->c[j] = c;
      cache->tanh_c[j] = tc;
    }
    c_out[j] = c;
    h_out[j] = go * tc;
  }
}

void lstm_step_backward(const LstmParams& p, const LstmStepCache& cache,
                        std::span<const double> dh, std::span<const double> dc,
                        const LstmGrads& grads, std::span<double> dx, std::span<double> dh_prev,
                        std::span<double> dc_prev) {
  const int w = p.width;
  std::vector<double> dz(4 * w);
  for (int j = 0; j < w; ++j) {
    const double go = cache.go[j];
    const double tc = cache.tanh_c[j];
    const double d_o = dh[j] * tc;
    const double d_c = dc[j] + dh[j] * go * (1.0 - tc * tc);
    const double gi = cache.gi[j];
    const double gf = cache.gf[j];
    const double gg = cache.gg[j];
    dz[j] = d_c * gg * gi * (1.0 - gi);                 // input gate
    dz[w + j] = d_c * cache.c_prev[j] * gf * (1.0 - gf);  // forget gate
    dz[2 * w + j] = d_c * gi * (1.0 - gg * gg);         // cell candidate
    dz[3 * w + j] = d_o * go * (1.0 - go);              // output gate
    dc_prev[j] = d_c * gf;
  }
  outer_acc(grads.w_ih, dz, cache.x);
  outer_acc(grads.w_hh, dz, cache.h_prev);
  for (int j = 0; j < 4 * w; ++j) grads.b(j, 0) += dz[j];
  std::fill(dx.begin(), dx.end(), 0.0);
  std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
  matvec_transpose_acc(p.w_ih, dz, dx);
  matvec_transpose_acc(p.w_hh, dz, dh_prev);
}

RealMatrix lstm_seq_forward(const LstmParams& p, const RealMatrix& input, bool reverse,
                            LstmSeqCache* cache) {
  const int T = input.rows();
  const int w = p.width;
  RealMatrix out(T, w);
  std::vector<double> h(w, 0.0), c(w, 0.0);
  if (cache != nullptr) cache->steps.resize(T);
  for (int i = 0; i < T; ++i) {
    const int t = reverse ? T - 1 - i : i;
    lstm_step(p, input.row(t), h, c, out.row(t), std::span<double>(c),
              cache != nullptr ? &cache->steps[i] : nullptr);
    const auto out_row = out.row(t);
    std::copy(out_row.begin(), out_row.end(), h.begin());
  }
  return out;
}

RealMatrix lstm_seq_backward(const LstmParams& p, const LstmSeqCache& cache,
                             const RealMatrix& d_output, bool reverse, const LstmGrads& grads) {
  const int T = d_output.rows();
  const int w = p.width;
  const int in_dim = p.w_ih.cols;
  RealMatrix d_input(T, in_dim);
  std::vector<double> dh(w, 0.0), dc(w, 0.0), dh_step(w), dh_prev(w), dc_prev(w);
  for (int i = T - 1; i >= 0; --i) {
    const int t = reverse ? T - 1 - i : i;
    for (int j = 0; j < w; ++j) dh_step[j] = dh[j] + d_output(t, j);
    lstm_step_backward(p, cache.steps[i], dh_step, dc, grads, d_input.row(t), dh_prev, dc_prev);
    dh = dh_prev;
    dc = dc_prev;
  }
  return d_input;
}

RealMatrix dense_forward(ConstMatView w, ConstMatView b, const RealMatrix& input) {
  RealMatrix out(input.rows(), w.rows);
  for (int t = 0; t < input.rows(); ++t) {
    auto row = out.row(t);
    for (int r = 0; r < w.rows; ++r) row[r] = b(r, 0);
    matvec_acc(w, input.row(t), row);
  }
  return out;
}

RealMatrix dense_backward(ConstMatView w, const RealMatrix& input, const RealMatrix& d_output,
                          MatView gw, MatView gb) {
  RealMatrix d_input(input.rows(), input.cols());
  for (int t = 0; t < input.rows(); ++t) {
    const auto dy = d_output.row(t);
    outer_acc(gw, dy, input.row(t));
    for (int r = 0; r < w.rows; ++r) gb(r, 0) += dy[r];
    matvec_transpose_acc(w, dy, d_input.row(t));
  }
  return d_input;
}

RealMatrix stack_frames(const RealMatrix& input, int factor) {
  const int T = input.rows();
  const int cols = input.cols();
  const int out_rows = (T + factor - 1) / factor;
  RealMatrix out(out_rows, factor * cols);
  for (int g = 0; g < out_rows; ++g) {
    for (int j = 0; j < factor; ++j) {
      const int t = g * factor + j;
      if (t >= T) break;  // zero padding at the tail
      const auto src = input.row(t);
      std::copy(src.begin(), src.end(), out.row(g).begin() + static_cast<size_t>(j) * cols);
    }
  }
  return out;
}

RealMatrix unstack_frames(const RealMatrix& d_stacked, int rows, int cols, int factor) {
  RealMatrix d_input(rows, cols);
  for (int g = 0; g < d_stacked.rows(); ++g) {
    for (int j = 0; j < factor; ++j) {
      const int t = g * factor + j;
      if (t >= rows) break;
      const auto src = d_stacked.row(g).subspan(static_cast<size_t>(j) * cols, cols);
      std::copy(src.begin(), src.end(), d_input.row(t).begin());
    }
  }
  return d_input;
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Encoder stack

struct EncoderCache {
  std::vector<RealMatrix> inputs;  // input of each layer
  std::vector<internal::LstmSeqCache> fwd, bwd;
  std::vector<RealMatrix> stacked;  // downsample: stacked input per layer
};

namespace {

std::string enc_prefix(int layer) { return "enc" + std::to_string(layer); }

}  // namespace

RealMatrix encoder_forward(const ModelSpec& spec, const Parameters& params,
                           const RealMatrix& frames, std::shared_ptr<EncoderCache>* cache) {
  STT_CHECK(frames.rows() >= 1, "encoder: empty utterance");
  STT_CHECK(frames.cols() == spec.feature_dim, "encoder: feature dim ", frames.cols(),
            " does not match spec ", spec.feature_dim);
  STT_CHECK(frames.rows() >= spec.total_downsample_factor(),
            "encoder: utterance shorter than total downsampling factor");

  EncoderCache* c = nullptr;
  if (cache != nullptr) {
    *cache = std::make_shared<EncoderCache>();
    c = cache->get();
    c->fwd.resize(spec.encoder.size());
    c->bwd.resize(spec.encoder.size());
    c->stacked.resize(spec.encoder.size());
  }

  RealMatrix cur = frames;
  for (size_t li = 0; li < spec.encoder.size(); ++li) {
    const LayerSpec& layer = spec.encoder[li];
    if (c != nullptr) c->inputs.push_back(cur);
    const std::string prefix = enc_prefix(static_cast<int>(li));
    switch (layer.kind) {
      case LayerKind::kDense: {
        cur = internal::dense_forward(params.view(prefix + ".w"), params.view(prefix + ".b"), cur);
        break;
      }
      case LayerKind::kLstm: {
        const auto fwd =
            internal::lstm_seq_forward(internal::lstm_params(params, prefix + ".fwd"), cur,
                                       /*reverse=*/false, c != nullptr ? &c->fwd[li] : nullptr);
        if (!layer.bidirectional) {
          cur = fwd;
          break;
        }
        const auto bwd =
            internal::lstm_seq_forward(internal::lstm_params(params, prefix + ".bwd"), cur,
                                       /*reverse=*/true, c != nullptr ? &c->bwd[li] : nullptr);
        RealMatrix both(cur.rows(), 2 * layer.width);
        for (int t = 0; t < cur.rows(); ++t) {
          auto row = both.row(t);
          const auto f = fwd.row(t);
          const auto b = bwd.row(t);
          std::copy(f.begin(), f.end(), row.begin());
          std::copy(b.begin(), b.end(), row.begin() + layer.width);
        }
        cur = std::move(both);
        break;
      }
      case LayerKind::kDownsample: {
        RealMatrix stacked = internal::stack_frames(cur, layer.factor);
        if (c != nullptr) c->stacked[li] = stacked;
        cur = internal::dense_forward(params.view(prefix + ".proj.w"),
                                      params.view(prefix + ".proj.b"), stacked);
        break;
      }
    }
  }
  return cur;
}

RealMatrix encoder_backward(const ModelSpec& spec, const Parameters& params,
                            const EncoderCache& cache, const RealMatrix& d_output,
                            Parameters* grad) {
  RealMatrix d_cur = d_output;
  for (int li = static_cast<int>(spec.encoder.size()) - 1; li >= 0; --li) {
    const LayerSpec& layer = spec.encoder[li];
    const std::string prefix = enc_prefix(li);
    const RealMatrix& input = cache.inputs[li];
    switch (layer.kind) {
      case LayerKind::kDense: {
        d_cur = internal::dense_backward(params.view(prefix + ".w"), input, d_cur,
                                         grad->view(prefix + ".w"), grad->view(prefix + ".b"));
        break;
      }
      case LayerKind::kLstm: {
        if (!layer.bidirectional) {
          d_cur = internal::lstm_seq_backward(internal::lstm_params(params, prefix + ".fwd"),
                                              cache.fwd[li], d_cur, /*reverse=*/false,
                                              internal::lstm_grads(*grad, prefix + ".fwd"));
          break;
        }
        const int w = layer.width;
        RealMatrix d_fwd(d_cur.rows(), w), d_bwd(d_cur.rows(), w);
        for (int t = 0; t < d_cur.rows(); ++t) {
          const auto row = d_cur.row(t);
          std::copy(row.begin(), row.begin() + w, d_fwd.row(t).begin());
          std::copy(row.begin() + w, row.end(), d_bwd.row(t).begin());
        }
        RealMatrix d_in =
            internal::lstm_seq_backward(internal::lstm_params(params, prefix + ".fwd"),
                                        cache.fwd[li], d_fwd, /*reverse=*/false,
                                        internal::lstm_grads(*grad, prefix + ".fwd"));
        const RealMatrix d_in_bwd =
            internal::lstm_seq_backward(internal::lstm_params(params, prefix + ".bwd"),
                                        cache.bwd[li], d_bwd, /*reverse=*/true,
                                        internal::lstm_grads(*grad, prefix + ".bwd"));
        for (size_t i = 0; i < d_in.data().size(); ++i) d_in.data()[i] += d_in_bwd.data()[i];
        d_cur = std::move(d_in);
        break;
      }
      case LayerKind::kDownsample: {
        const RealMatrix d_stacked =
            internal::dense_backward(params.view(prefix + ".proj.w"), cache.stacked[li], d_cur,
                                     grad->view(prefix + ".proj.w"), grad->view(prefix + ".proj.b"));
        d_cur = internal::unstack_frames(d_stacked, input.rows(), input.cols(), layer.factor);
        break;
      }
    }
  }
  return d_cur;
}

}  // namespace stt
