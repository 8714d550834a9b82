// core/src/network_model.cc

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

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "network_internal.h"
#include "stt/error.h"
#include "stt/logmath.h"

namespace stt {

// ---------------------------------------------------------------------------
// Layer / model specs

LayerSpec parse_layer_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  STT_CHECK(!parts.empty(), "empty layer spec");
  LayerSpec spec;
  if (parts[0] == "lstm" || parts[0] == "bilstm") {
    STT_CHECK(parts.size() == 2, "layer spec '", text, "': expected <kind>:<width>");
    spec.kind = LayerKind::kLstm;
    spec.bidirectional = parts[0] == "bilstm";
    spec.width = std::stoi(parts[1]);
  } else if (parts[0] == "dense") {
    STT_CHECK(parts.size() == 2, "layer spec '", text, "': expected dense:<width>");
    spec.kind = LayerKind::kDense;
    spec.width = std::stoi(parts[1]);
  } else if (parts[0] == "ds") {
    STT_CHECK(parts.size() == 3, "layer spec '", text, "': expected ds:<factor>:<width>");
    spec.kind = LayerKind::kDownsample;
    spec.factor = std::stoi(parts[1]);
    spec.width = std::stoi(parts[2]);
    STT_CHECK(spec.factor >= 1, "downsample factor must be >= 1");
  } else {
    throw ValidationError(msg_cat("unknown layer kind '", parts[0], "'"));
  }
  STT_CHECK(spec.width >= 1, "layer width must be >= 1");
  return spec;
}

std::vector<LayerSpec> parse_encoder_spec(const std::vector<std::string>& texts) {
  std::vector<LayerSpec> layers;
  for (const std::string& raw : texts) {
    int repeat = 1;
    std::string body = raw;
    if (const auto x = raw.find('x'); x != std::string::npos && x > 0 &&
                                      raw.find_first_not_of("0123456789") == x) {
      repeat = std::stoi(raw.substr(0, x));
      body = raw.substr(x + 1);
      STT_CHECK(repeat >= 1, "layer repeat count must be >= 1");
    }
    const LayerSpec spec = parse_layer_spec(body);
    for (int i = 0; i < repeat; ++i) layers.push_back(spec);
  }
  return layers;
}

std::string layer_spec_to_string(const LayerSpec& spec) {
  switch (spec.kind) {
    case LayerKind::kDense:
      return msg_cat("dense:", spec.width);
    case LayerKind::kLstm:
      return msg_cat(spec.bidirectional ? "bilstm:" : "lstm:", spec.width);
    case LayerKind::kDownsample:
      return msg_cat("ds:", spec.factor, ":", spec.width);
  }
  throw ValidationError("unreachable layer kind");
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kCtc: return "ctc";
    case ModelKind::kRnnt: return "rnnt";
    case ModelKind::kAttention: return "attention";
  }
  throw ValidationError("unreachable model kind");
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "ctc") return ModelKind::kCtc;
  if (name == "rnnt") return ModelKind::kRnnt;
  if (name == "attention") return ModelKind::kAttention;
  throw ValidationError(msg_cat("unknown model kind '", name, "'"));
}

int ModelSpec::encoder_output_dim() const {
  int dim = feature_dim;
  for (const LayerSpec& layer : encoder) {
    switch (layer.kind) {
      case LayerKind::kDense:
      case LayerKind::kDownsample:
        dim = layer.width;
        break;
      case LayerKind::kLstm:
        dim = layer.bidirectional ? 2 * layer.width : layer.width;
        break;
    }
  }
  return dim;
}

int ModelSpec::total_downsample_factor() const {
  int factor = 1;
  for (const LayerSpec& layer : encoder) {
    if (layer.kind == LayerKind::kDownsample) factor *= layer.factor;
  }
  return factor;
}

void ModelSpec::validate() const {
  STT_CHECK(!symbols.empty(), "model spec: empty alphabet");
  Alphabet check(symbols);
  STT_CHECK(feature_dim >= 1, "model spec: feature_dim must be >= 1");
  STT_CHECK(!encoder.empty(), "model spec: empty encoder stack");
  STT_CHECK(embed_dim >= 1 && decoder_width >= 1, "model spec: bad decoder dims");
  if (kind == ModelKind::kAttention) {
    STT_CHECK(attention.attn_dim >= 1 && attention.conv_channels >= 1 &&
                  attention.conv_width >= 1,
              "model spec: bad attention config");
  }
}

std::string ModelSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = model_kind_name(kind);
  j["symbols"] = symbols;
  j["feature_dim"] = feature_dim;
  std::vector<std::string> layers;
  for (const LayerSpec& layer : encoder) layers.push_back(layer_spec_to_string(layer));
  j["encoder"] = layers;
  j["embed_dim"] = embed_dim;
  j["decoder_width"] = decoder_width;
  j["attn_dim"] = attention.attn_dim;
  j["conv_channels"] = attention.conv_channels;
  j["conv_width"] = attention.conv_width;
  return j.dump();  // object keys serialize sorted: canonical
}

ModelSpec ModelSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(msg_cat("model spec: bad json: ", e.what()));
  }
  ModelSpec spec;
  try {
    spec.kind = model_kind_from_name(j.at("kind").get<std::string>());
    spec.symbols = j.at("symbols").get<std::string>();
    spec.feature_dim = j.at("feature_dim").get<int>();
    spec.encoder = parse_encoder_spec(j.at("encoder").get<std::vector<std::string>>());
    spec.embed_dim = j.at("embed_dim").get<int>();
    spec.decoder_width = j.at("decoder_width").get<int>();
    spec.attention.attn_dim = j.at("attn_dim").get<int>();
    spec.attention.conv_channels = j.at("conv_channels").get<int>();
    spec.attention.conv_width = j.at("conv_width").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(msg_cat("model spec: missing field: ", e.what()));
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Parameter layout

void ParameterLayout::add(const std::string& name, int rows, int cols) {
  STT_CHECK(rows >= 1 && cols >= 1, "layout tensor '", name, "': bad shape");
  STT_CHECK(index_.count(name) == 0, "layout tensor '", name, "' added twice");
  index_[name] = tensors_.size();
  tensors_.push_back({name, rows, cols, total_});
  total_ += static_cast<size_t>(rows) * cols;
}

const TensorInfo& ParameterLayout::info(const std::string& name) const {
  const auto it = index_.find(name);
  STT_CHECK(it != index_.end(), "unknown tensor '", name, "'");
  return tensors_[it->second];
}

namespace {

void add_lstm(ParameterLayout& layout, const std::string& prefix, int in_dim, int width) {
  layout.add(prefix + ".w_ih", 4 * width, in_dim);
  layout.add(prefix + ".w_hh", 4 * width, width);
  layout.add(prefix + ".b", 4 * width, 1);
}

}  // namespace

std::shared_ptr<const ParameterLayout> make_layout(const ModelSpec& spec) {
  spec.validate();
  auto layout = std::make_shared<ParameterLayout>();
  const Alphabet alphabet = spec.alphabet();

  int dim = spec.feature_dim;
  for (size_t li = 0; li < spec.encoder.size(); ++li) {
    const LayerSpec& layer = spec.encoder[li];
    const std::string prefix = "enc" + std::to_string(li);
    switch (layer.kind) {
      case LayerKind::kDense:
        layout->add(prefix + ".w", layer.width, dim);
        layout->add(prefix + ".b", layer.width, 1);
        dim = layer.width;
        break;
      case LayerKind::kLstm:
        add_lstm(*layout, prefix + ".fwd", dim, layer.width);
        if (layer.bidirectional) add_lstm(*layout, prefix + ".bwd", dim, layer.width);
        dim = layer.bidirectional ? 2 * layer.width : layer.width;
        break;
      case LayerKind::kDownsample:
        layout->add(prefix + ".proj.w", layer.width, layer.factor * dim);
        layout->add(prefix + ".proj.b", layer.width, 1);
        dim = layer.width;
        break;
    }
  }

  switch (spec.kind) {
    case ModelKind::kCtc:
      layout->add("ctc.out.w", alphabet.num_lattice_classes(), dim);
      layout->add("ctc.out.b", alphabet.num_lattice_classes(), 1);
      break;
    case ModelKind::kRnnt:
      // Embedding rows: symbols plus sos (= blank slot, used only as input).
      layout->add("rnnt.emb", alphabet.size() + 1, spec.embed_dim);
      add_lstm(*layout, "rnnt.pred", spec.embed_dim, spec.decoder_width);
      layout->add("rnnt.hproj.w", alphabet.num_lattice_classes(), dim);
      layout->add("rnnt.hproj.b", alphabet.num_lattice_classes(), 1);
      layout->add("rnnt.gproj.w", alphabet.num_lattice_classes(), spec.decoder_width);
      layout->add("rnnt.gproj.b", alphabet.num_lattice_classes(), 1);
      break;
    case ModelKind::kAttention:
      layout->add("att.emb", alphabet.num_attention_classes(), spec.embed_dim);
      add_lstm(*layout, "att.arnn", spec.embed_dim, spec.decoder_width);
      layout->add("att.enc.w", spec.attention.attn_dim, dim);
      layout->add("att.state.w", spec.attention.attn_dim, spec.decoder_width);
      layout->add("att.loc.w", spec.attention.attn_dim, spec.attention.conv_channels);
      layout->add("att.loc.conv", spec.attention.conv_channels, spec.attention.conv_width);
      layout->add("att.energy.b", spec.attention.attn_dim, 1);
      layout->add("att.energy.v", spec.attention.attn_dim, 1);
      add_lstm(*layout, "att.drnn", dim + spec.decoder_width, spec.decoder_width);
      layout->add("att.out.w", alphabet.num_attention_classes(), spec.decoder_width);
      layout->add("att.out.b", alphabet.num_attention_classes(), 1);
      break;
  }
  return layout;
}

Parameters zero_parameters(const ModelSpec& spec) {
  Parameters params;
  params.layout = make_layout(spec);
  params.flat.assign(params.layout->total_size(), 0.0);
  return params;
}

Parameters init_parameters(const ModelSpec& spec, SeededRng& rng) {
  Parameters params = zero_parameters(spec);
  for (const TensorInfo& t : params.layout->tensors()) {
    // Bias vectors take the bound of the weight tensor they accompany
    // (their own fan-in is 1, which would leave them at +/- 1).
    int fan_in = t.cols;
    if (t.cols == 1) {
      const std::string stem = t.name.substr(0, t.name.size() - 2);  // strip ".b"
      if (params.layout->has(stem + ".w")) fan_in = params.layout->info(stem + ".w").cols;
      else if (params.layout->has(stem + ".w_ih")) fan_in = params.layout->info(stem + ".w_ih").cols;
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    double* data = params.flat.data() + t.offset;
    const size_t count = static_cast<size_t>(t.rows) * t.cols;
    for (size_t i = 0; i < count; ++i) data[i] = rng.uniform(-bound, bound);
  }
  return params;
}

// ---------------------------------------------------------------------------
// Heads

RealMatrix ctc_head(const ModelSpec& spec, const Parameters& params,
                    const RealMatrix& encoder_out) {
  STT_CHECK(spec.kind == ModelKind::kCtc, "ctc_head: not a ctc model");
  return internal::dense_forward(params.view("ctc.out.w"), params.view("ctc.out.b"), encoder_out);
}

namespace internal {

JointLogits rnnt_forward(const ModelSpec& spec, const Parameters& params, const RealMatrix& enc,
                         const LabelSeq& labels, RnntForwardCache* cache) {
  const Alphabet alphabet = spec.alphabet();
  validate_labels(labels, alphabet.size());
  const int U = static_cast<int>(labels.size());

  // Prediction network over the sos-prefixed labels; blanks never advance it.
  const ConstMatView emb = params.view("rnnt.emb");
  RealMatrix pred_in(U + 1, spec.embed_dim);
  for (int u = 0; u <= U; ++u) {
    const int token = u == 0 ? alphabet.sos_id() : labels[u - 1];
    const auto row = emb.row(token);
    std::copy(row.begin(), row.end(), pred_in.row(u).begin());
  }
  const LstmParams pred = lstm_params(params, "rnnt.pred");
  LstmSeqCache* seq_cache = cache != nullptr ? &cache->pred : nullptr;
  RealMatrix pred_out = lstm_seq_forward(pred, pred_in, /*reverse=*/false, seq_cache);

  RealMatrix frame_proj =
      dense_forward(params.view("rnnt.hproj.w"), params.view("rnnt.hproj.b"), enc);
  RealMatrix prefix_proj =
      dense_forward(params.view("rnnt.gproj.w"), params.view("rnnt.gproj.b"), pred_out);

  if (cache != nullptr) {
    cache->pred_in = pred_in;
    cache->pred_out = pred_out;
    cache->frame_proj = frame_proj;
    cache->prefix_proj = prefix_proj;
  }
  return joint_combine(frame_proj, prefix_proj);
}

}  // namespace internal

JointLogits rnnt_joint(const ModelSpec& spec, const Parameters& params,
                       const RealMatrix& encoder_out, const LabelSeq& labels) {
  STT_CHECK(spec.kind == ModelKind::kRnnt, "rnnt_joint: not a transducer model");
  return internal::rnnt_forward(spec, params, encoder_out, labels, nullptr);
}

// ---------------------------------------------------------------------------
// End-to-end loss

ModelLoss model_loss(const ModelSpec& spec, const Parameters& params, const RealMatrix& frames,
                     const LabelSeq& labels, const std::string& utterance_id) {
  spec.validate();
  const Alphabet alphabet = spec.alphabet();
  validate_labels(labels, alphabet.size());

  ModelLoss out;
  out.param_grad.assign(params.layout->total_size(), 0.0);
  Parameters grad{params.layout, std::move(out.param_grad)};

  std::shared_ptr<EncoderCache> cache;
  const RealMatrix enc = encoder_forward(spec, params, frames, &cache);

  RealMatrix d_enc;
  switch (spec.kind) {
    case ModelKind::kCtc: {
      const RealMatrix logits =
          internal::dense_forward(params.view("ctc.out.w"), params.view("ctc.out.b"), enc);
      MatrixLoss res;
      try {
        res = ctc_loss(logits, labels);
      } catch (const NoAlignmentError& e) {
        throw NoAlignmentError(msg_cat(e.what(), utterance_id.empty() ? "" : " (utterance ",
                                       utterance_id, utterance_id.empty() ? "" : ")"));
      }
      out.loss = res.loss;
      out.num_target_steps = static_cast<int>(labels.size());
      d_enc = internal::dense_backward(params.view("ctc.out.w"), enc, res.grad,
                                       grad.view("ctc.out.w"), grad.view("ctc.out.b"));
      break;
    }
    case ModelKind::kRnnt: {
      internal::RnntForwardCache rcache;
      const JointLogits joint = internal::rnnt_forward(spec, params, enc, labels, &rcache);
      const JointLoss res = rnnt_loss(joint, labels);
      out.loss = res.loss;
      out.num_target_steps = static_cast<int>(labels.size());

      const int T = joint.num_frames();
      const int rows = joint.num_prefix_rows();
      const int classes = joint.num_classes();
      RealMatrix d_frame_proj(T, classes);
      RealMatrix d_prefix_proj(rows, classes);
      for (int t = 0; t < T; ++t) {
        for (int u = 0; u < rows; ++u) {
          const auto g = res.grad.node(t, u);
          for (int k = 0; k < classes; ++k) {
            d_frame_proj(t, k) += g[k];
            d_prefix_proj(u, k) += g[k];
          }
        }
      }
      d_enc = internal::dense_backward(params.view("rnnt.hproj.w"), enc, d_frame_proj,
                                       grad.view("rnnt.hproj.w"), grad.view("rnnt.hproj.b"));
      const RealMatrix d_pred_out =
          internal::dense_backward(params.view("rnnt.gproj.w"), rcache.pred_out, d_prefix_proj,
                                   grad.view("rnnt.gproj.w"), grad.view("rnnt.gproj.b"));
      const RealMatrix d_pred_in = internal::lstm_seq_backward(
          internal::lstm_params(params, "rnnt.pred"), rcache.pred, d_pred_out,
          /*reverse=*/false, internal::lstm_grads(grad, "rnnt.pred"));
      const MatView g_emb = grad.view("rnnt.emb");
      for (int u = 0; u < rows; ++u) {
        const int token = u == 0 ? alphabet.sos_id() : labels[u - 1];
        axpy(1.0, d_pred_in.row(u), g_emb.row(token));
      }
      break;
    }
    case ModelKind::kAttention: {
      internal::AttnSeqCache acache;
      const AttentionTrace trace = internal::attention_forward(spec, params, enc, labels, &acache);
      const MatrixLoss res = attention_nll(trace.step_logits, labels);
      out.loss = res.loss;
      out.num_target_steps = static_cast<int>(labels.size()) + 1;  // + eos step
      d_enc = internal::attention_backward(spec, params, enc, acache, res.grad, grad);
      break;
    }
  }

  encoder_backward(spec, params, *cache, d_enc, &grad);
  out.param_grad = std::move(grad.flat);
  return out;
}

}  // namespace stt
