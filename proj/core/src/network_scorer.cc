// core/src/network_scorer.cc

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

#include <memory>

#include "network_internal.h"
#include "stt/error.h"
#include "stt/logmath.h"

namespace stt {

namespace {

using internal::LstmParams;
using internal::lstm_params;
using internal::lstm_step;

// ---------------------------------------------------------------------------
// Transducer scorer: the state tracks the lattice position. Stepping a
// symbol advances the prediction network (same frame); stepping blank moves
// to the next frame with the prediction state unchanged.

struct RnntScorerShared {
  ModelSpec spec;
  Parameters params;
  RealMatrix frame_proj;  // T' x (V+1)
};

struct RnntStateImpl {
  int frame = 0;
  std::vector<double> pred_h, pred_c;
  std::vector<double> prefix_proj;  // g-side projection for the current prefix
};

class RnntScorer : public StepScorer {
 public:
  RnntScorer(const ModelSpec& spec, const Parameters& params, const RealMatrix& encoder_out) {
    shared_ = std::make_shared<RnntScorerShared>();
    shared_->spec = spec;
    shared_->params = params;
    shared_->frame_proj = internal::dense_forward(params.view("rnnt.hproj.w"),
                                                  params.view("rnnt.hproj.b"), encoder_out);
    num_classes_ = shared_->frame_proj.cols();
  }

  int num_classes() const override { return num_classes_; }

  ScorerState start() const override {
    auto impl = std::make_shared<RnntStateImpl>();
    impl->frame = 0;
    impl->pred_h.assign(shared_->spec.decoder_width, 0.0);
    impl->pred_c.assign(shared_->spec.decoder_width, 0.0);
    advance_prediction(*impl, shared_->spec.alphabet().sos_id());
    return make_state(std::move(impl));
  }

  ScorerState step(const ScorerState& state, int token) const override {
    const auto* prev = static_cast<const RnntStateImpl*>(state.impl.get());
    STT_CHECK(prev != nullptr, "rnnt scorer: foreign state");
    auto impl = std::make_shared<RnntStateImpl>(*prev);
    if (token == num_classes_ - 1) {
      impl->frame += 1;
      STT_CHECK(impl->frame < shared_->frame_proj.rows(),
                "rnnt scorer: stepped blank past the last frame");
    } else {
      STT_CHECK(token >= 0 && token < num_classes_ - 1, "rnnt scorer: bad token ", token);
      advance_prediction(*impl, token);
    }
    return make_state(std::move(impl));
  }

 private:
  void advance_prediction(RnntStateImpl& impl, int token) const {
    const ConstMatView emb = shared_->params.view("rnnt.emb");
    const LstmParams pred = lstm_params(shared_->params, "rnnt.pred");
    lstm_step(pred, emb.row(token), impl.pred_h, impl.pred_c,
              std::span<double>(impl.pred_h), std::span<double>(impl.pred_c), nullptr);
    impl.prefix_proj.assign(num_classes_, 0.0);
    const ConstMatView w = shared_->params.view("rnnt.gproj.w");
    const ConstMatView b = shared_->params.view("rnnt.gproj.b");
    for (int r = 0; r < num_classes_; ++r) impl.prefix_proj[r] = b(r, 0);
    matvec_acc(w, impl.pred_h, impl.prefix_proj);
  }

  ScorerState make_state(std::shared_ptr<RnntStateImpl> impl) const {
    std::vector<double> scores(num_classes_);
    const auto frame_row = shared_->frame_proj.row(impl->frame);
    for (int k = 0; k < num_classes_; ++k) scores[k] = frame_row[k] + impl->prefix_proj[k];
    ScorerState state;
    state.log_probs = log_softmax(scores);
    state.impl = std::move(impl);
    return state;
  }

  std::shared_ptr<RnntScorerShared> shared_;
  int num_classes_ = 0;
};

// ---------------------------------------------------------------------------
// Attention scorer: sos is consumed by start(); each state carries the
// distribution over the next token and the weights that produced it.

struct AttnScorerShared {
  ModelSpec spec;
  Parameters params;
  RealMatrix encoder_out;
};

struct AttnStateImpl {
  AttentionState state;
};

class AttentionScorer : public StepScorer {
 public:
  AttentionScorer(const ModelSpec& spec, const Parameters& params, const RealMatrix& encoder_out) {
    shared_ = std::make_shared<AttnScorerShared>();
    shared_->spec = spec;
    shared_->params = params;
    shared_->encoder_out = encoder_out;
    num_classes_ = spec.alphabet().num_attention_classes();
  }

  int num_classes() const override { return num_classes_; }

  ScorerState start() const override {
    const AttentionState init = attention_start(shared_->spec, shared_->encoder_out.rows());
    return advance(init, shared_->spec.alphabet().sos_id());
  }

  ScorerState step(const ScorerState& state, int token) const override {
    const auto* prev = static_cast<const AttnStateImpl*>(state.impl.get());
    STT_CHECK(prev != nullptr, "attention scorer: foreign state");
    STT_CHECK(token >= 0 && token < num_classes_ - 1,
              "attention scorer: cannot step token ", token);
    return advance(prev->state, token);
  }

 private:
  ScorerState advance(const AttentionState& from, int prev_token) const {
    const AttentionStepResult res =
        attention_step(shared_->spec, shared_->params, shared_->encoder_out, from, prev_token);
    auto impl = std::make_shared<AttnStateImpl>();
    impl->state = res.state;
    ScorerState state;
    state.log_probs = log_softmax(res.logits);
    state.attention_row = res.attn_row;
    state.impl = std::move(impl);
    return state;
  }

  std::shared_ptr<AttnScorerShared> shared_;
  int num_classes_ = 0;
};

}  // namespace

std::unique_ptr<StepScorer> make_step_scorer(const ModelSpec& spec, const Parameters& params,
                                             const RealMatrix& encoder_out) {
  switch (spec.kind) {
    case ModelKind::kRnnt:
      return std::make_unique<RnntScorer>(spec, params, encoder_out);
    case ModelKind::kAttention:
      return std::make_unique<AttentionScorer>(spec, params, encoder_out);
    case ModelKind::kCtc:
      throw ValidationError("ctc has no stepwise decoder; decode its frame logits directly");
  }
  throw ValidationError("unreachable model kind");
}

}  // namespace stt
