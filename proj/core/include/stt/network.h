// core/include/stt/network.h

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

#ifndef STT_NETWORK_H_
#define STT_NETWORK_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stt/alphabet.h"
#include "stt/decoders.h"
#include "stt/losses.h"
#include "stt/matrix.h"
#include "stt/rng.h"

namespace stt {

// ---------------------------------------------------------------------------
// Model specification

enum class LayerKind { kDense, kLstm, kDownsample };

// One encoder stage. LSTM cells use tanh activations; a bidirectional layer
// runs `width` cells in each direction and concatenates, so its output is
// 2*width wide. Downsample layers stack `factor` consecutive frames (zero
// padded at the tail) and project to `width`: the output length is
// ceil(T / factor).
struct LayerSpec {
  LayerKind kind = LayerKind::kLstm;
  int width = 32;
  int factor = 1;               // downsample only
  bool bidirectional = false;   // lstm only
};

// Compact layer notation used in config files and model headers:
//   "lstm:32", "bilstm:32", "dense:16", "ds:2:24", "2xbilstm:32".
LayerSpec parse_layer_spec(const std::string& text);
std::vector<LayerSpec> parse_encoder_spec(const std::vector<std::string>& texts);
std::string layer_spec_to_string(const LayerSpec& spec);

enum class ModelKind { kCtc, kRnnt, kAttention };
const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

struct AttentionConfig {
  int attn_dim = 16;      // energy MLP width
  int conv_channels = 4;  // location-feature channels
  int conv_width = 5;     // location-feature kernel size
};

struct ModelSpec {
  ModelKind kind = ModelKind::kCtc;
  std::string symbols;  // alphabet characters
  int feature_dim = 16;
  std::vector<LayerSpec> encoder;
  int embed_dim = 8;       // rnnt / attention token embedding
  int decoder_width = 16;  // rnnt prediction net & attention rnn width
  AttentionConfig attention;

  Alphabet alphabet() const { return Alphabet(symbols); }
  int encoder_output_dim() const;
  int total_downsample_factor() const;  // frames per encoder step
  void validate() const;

  std::string to_json() const;  // canonical (sorted keys, single line)
  static ModelSpec from_json(const std::string& text);
};

// ---------------------------------------------------------------------------
// Parameters

// Flat f64 vector plus a table mapping named tensors into it. The layout is
// a deterministic function of the spec, so two models with equal specs have
// interchangeable flats.
struct TensorInfo {
  std::string name;
  int rows = 0;
  int cols = 0;
  size_t offset = 0;
};

class ParameterLayout {
 public:
  void add(const std::string& name, int rows, int cols);
  const TensorInfo& info(const std::string& name) const;
  bool has(const std::string& name) const { return index_.count(name) != 0; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  size_t total_size() const { return total_; }

 private:
  std::vector<TensorInfo> tensors_;
  std::map<std::string, size_t> index_;
  size_t total_ = 0;
};

std::shared_ptr<const ParameterLayout> make_layout(const ModelSpec& spec);

struct Parameters {
  std::shared_ptr<const ParameterLayout> layout;
  std::vector<double> flat;

  MatView view(const std::string& name) {
    const TensorInfo& t = layout->info(name);
    return {flat.data() + t.offset, t.rows, t.cols};
  }
  ConstMatView view(const std::string& name) const {
    const TensorInfo& t = layout->info(name);
    return {flat.data() + t.offset, t.rows, t.cols};
  }
};

// Weights uniform in +/- 1/sqrt(fan_in), biases with the bound of the weight
// tensor they accompany. Deterministic in the seed.
Parameters init_parameters(const ModelSpec& spec, SeededRng& rng);
Parameters zero_parameters(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Encoder

struct EncoderCache;  // opaque; definition internal to the implementation

// Applies the encoder stack. Requires 1 <= total_downsample_factor <= T.
// Pass a cache to enable the backward pass.
RealMatrix encoder_forward(const ModelSpec& spec, const Parameters& params,
                           const RealMatrix& frames, std::shared_ptr<EncoderCache>* cache);

// d_output: gradient w.r.t. the encoder output. Accumulates parameter
// gradients into `grad` and returns the gradient w.r.t. the input frames.
RealMatrix encoder_backward(const ModelSpec& spec, const Parameters& params,
                            const EncoderCache& cache, const RealMatrix& d_output,
                            Parameters* grad);

// ---------------------------------------------------------------------------
// Attention decoder step

struct AttentionState {
  std::vector<double> attn_h, attn_c;  // AttentionRNN cell
  std::vector<double> dec_h, dec_c;    // DecoderRNN cell
  std::vector<double> prev_attn;       // previous weights over T', sums to 1
};

// Documented start procedure: zero cell states, uniform attention weights.
AttentionState attention_start(const ModelSpec& spec, int num_encoder_steps);

struct AttentionStepResult {
  std::vector<double> logits;     // over V+2 classes
  std::vector<double> attn_row;   // weights used for this prediction
  AttentionState state;
};

// One decode step: advance AttentionRNN on prev_token, compute hybrid
// content+location energies over the encoder output, soft-select a context,
// advance DecoderRNN, project to output logits.
AttentionStepResult attention_step(const ModelSpec& spec, const Parameters& params,
                                   const RealMatrix& encoder_out, const AttentionState& state,
                                   int prev_token);

// ---------------------------------------------------------------------------
// End-to-end loss and training

struct ModelLoss {
  double loss = 0.0;
  int num_target_steps = 0;       // U (+1 for the attention eos step)
  std::vector<double> param_grad; // layout-shaped, same indexing as Parameters
};

// Composes encoder, decoder-side networks and the matching objective;
// gradients flow to every parameter. CTC feasibility is checked after
// downsampling and reported as NoAlignmentError naming the utterance.
ModelLoss model_loss(const ModelSpec& spec, const Parameters& params, const RealMatrix& frames,
                     const LabelSeq& labels, const std::string& utterance_id = {});

struct TrainUtterance {
  std::string id;
  RealMatrix frames;
  LabelSeq labels;
};

struct TrainConfig {
  double lr = 0.1;
  double clip_norm = 5.0;  // global-norm clip; +inf disables
  int epochs = 10;
  int batch = 8;
  double anneal = 1.0;     // lr multiplier applied after each epoch
  uint64_t seed = 1;
  double weight_noise_sigma = 0.0;  // optional per-batch Gaussian weight noise
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double mean_loss_per_symbol = 0.0;
  double lr = 0.0;
  int skipped = 0;  // utterances without a feasible alignment
};

// Deterministic minibatch SGD: seeded shuffling, per-utterance gradients
// accumulated in utterance-id order, global-norm clipping, per-epoch
// annealing. A non-finite loss aborts with the offending utterance id.
std::vector<EpochStats> train(const ModelSpec& spec, Parameters& params,
                              const std::vector<TrainUtterance>& data, const TrainConfig& cfg);

// ---------------------------------------------------------------------------
// Inference adapters

// Incremental scorer over the decoder side of a trained model; the stepwise
// products equal the teacher-forced batch computation. CTC has no stepwise
// decoder and is rejected.
std::unique_ptr<StepScorer> make_step_scorer(const ModelSpec& spec, const Parameters& params,
                                             const RealMatrix& encoder_out);

// Projects encoder output to per-frame class logits (CTC head).
RealMatrix ctc_head(const ModelSpec& spec, const Parameters& params,
                    const RealMatrix& encoder_out);

// Teacher-forced attention pass returning the per-step logits and weights
// (labels rows plus the final eos row).
struct AttentionTrace {
  RealMatrix step_logits;     // (U+1) x (V+2)
  RealMatrix attention_rows;  // (U+1) x T'
};
AttentionTrace attention_teacher_forced(const ModelSpec& spec, const Parameters& params,
                                        const RealMatrix& encoder_out, const LabelSeq& labels);

// Transducer joint for a label sequence (projected encoder + prediction net).
JointLogits rnnt_joint(const ModelSpec& spec, const Parameters& params,
                       const RealMatrix& encoder_out, const LabelSeq& labels);

// ---------------------------------------------------------------------------
// Model file I/O

// Versioned container: text header with the spec (canonical JSON) and its
// hash, then the flat parameter vector as little-endian f64. The loader
// recomputes and validates the spec hash.
void save_model(const std::string& path, const ModelSpec& spec, const Parameters& params);
std::pair<ModelSpec, Parameters> load_model(const std::string& path);

uint64_t spec_hash(const ModelSpec& spec);

}  // namespace stt

#endif  // STT_NETWORK_H_
