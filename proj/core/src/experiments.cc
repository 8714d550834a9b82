// core/src/experiments.cc

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

#include "stt/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stt/error.h"
#include "stt/logmath.h"

namespace stt {

// ---------------------------------------------------------------------------
// Config

ModelSpec ExperimentConfig::model_spec(ModelKind kind) const {
  ModelSpec spec;
  spec.kind = kind;
  spec.symbols = data.symbols;
  spec.feature_dim = data.feature_dim;
  const auto& layers = (kind == ModelKind::kAttention && !attention_encoder.empty())
                           ? attention_encoder
                           : encoder;
  spec.encoder = parse_encoder_spec(layers);
  spec.embed_dim = embed_dim;
  spec.decoder_width = decoder_width;
  spec.attention = attention;
  spec.validate();
  return spec;
}

TrainConfig ExperimentConfig::train_config(ModelKind kind) const {
  TrainConfig tc = train;
  if (const auto it = epochs_by_kind.find(model_kind_name(kind)); it != epochs_by_kind.end()) {
    tc.epochs = it->second;
  }
  return tc;
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["data"] = nlohmann::json::parse(data.to_json());
  j["encoder"] = encoder;
  j["attention_encoder"] = attention_encoder;
  j["embed_dim"] = embed_dim;
  j["decoder_width"] = decoder_width;
  j["attn_dim"] = attention.attn_dim;
  j["conv_channels"] = attention.conv_channels;
  j["conv_width"] = attention.conv_width;
  j["train"] = {{"lr", train.lr},
                {"clip_norm", train.clip_norm},
                {"epochs", train.epochs},
                {"batch", train.batch},
                {"anneal", train.anneal},
                {"seed", train.seed},
                {"weight_noise_sigma", train.weight_noise_sigma}};
  j["epochs_by_kind"] = epochs_by_kind;
  j["decode"] = {{"beam_width", decode.beam_width},
                 {"alpha", decode.alpha},
                 {"beta_wc", decode.beta_wc},
                 {"gamma", decode.gamma},
                 {"beta_cov", decode.beta_cov},
                 {"lambda", decode.lambda_lm},
                 {"max_symbols_per_step", decode.max_symbols_per_step},
                 {"max_output_len", decode.max_output_len}};
  j["lm_order"] = lm_order;
  j["lm_add_k"] = lm_add_k;
  j["sweep_factors"] = sweep_factors;
  j["sweep_seeds"] = sweep_seeds;
  j["sweep_epochs"] = sweep_epochs;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(msg_cat("experiment config: bad json: ", e.what()));
  }
  ExperimentConfig cfg;
  try {
    cfg.data = SyntheticSpec::from_json(j.at("data").dump());
    cfg.encoder = j.at("encoder").get<std::vector<std::string>>();
    if (j.contains("attention_encoder")) {
      cfg.attention_encoder = j.at("attention_encoder").get<std::vector<std::string>>();
    }
    cfg.embed_dim = j.at("embed_dim").get<int>();
    cfg.decoder_width = j.at("decoder_width").get<int>();
    cfg.attention.attn_dim = j.at("attn_dim").get<int>();
    cfg.attention.conv_channels = j.at("conv_channels").get<int>();
    cfg.attention.conv_width = j.at("conv_width").get<int>();
    const auto& t = j.at("train");
    cfg.train.lr = t.at("lr").get<double>();
    cfg.train.clip_norm = t.at("clip_norm").get<double>();
    cfg.train.epochs = t.at("epochs").get<int>();
    cfg.train.batch = t.at("batch").get<int>();
    cfg.train.anneal = t.at("anneal").get<double>();
    cfg.train.seed = t.at("seed").get<uint64_t>();
    cfg.train.weight_noise_sigma = t.at("weight_noise_sigma").get<double>();
    if (j.contains("epochs_by_kind")) {
      cfg.epochs_by_kind = j.at("epochs_by_kind").get<std::map<std::string, int>>();
    }
    const auto& d = j.at("decode");
    cfg.decode.beam_width = d.at("beam_width").get<int>();
    cfg.decode.alpha = d.at("alpha").get<double>();
    cfg.decode.beta_wc = d.at("beta_wc").get<double>();
    cfg.decode.gamma = d.at("gamma").get<double>();
    cfg.decode.beta_cov = d.at("beta_cov").get<double>();
    cfg.decode.lambda_lm = d.at("lambda").get<double>();
    cfg.decode.max_symbols_per_step = d.at("max_symbols_per_step").get<int>();
    cfg.decode.max_output_len = d.at("max_output_len").get<int>();
    cfg.lm_order = j.at("lm_order").get<int>();
    cfg.lm_add_k = j.at("lm_add_k").get<double>();
    cfg.sweep_factors = j.at("sweep_factors").get<std::vector<int>>();
    cfg.sweep_seeds = j.at("sweep_seeds").get<int>();
    cfg.sweep_epochs = j.at("sweep_epochs").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(msg_cat("experiment config: missing field: ", e.what()));
  }
  cfg.decode.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  STT_CHECK(is.good(), "cannot open config '", path, "'");
  std::stringstream buffer;
  buffer << is.rdbuf();
  return from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// Decoding

std::vector<DecodeVariant> standard_variants(ModelKind kind, const DecodeConfig& base) {
  DecodeConfig plain = base;
  plain.alpha = 0.0;
  plain.beta_wc = 0.0;
  plain.gamma = 0.0;
  plain.beta_cov = 0.0;
  plain.lambda_lm = 0.0;

  std::vector<DecodeVariant> variants;
  DecodeConfig greedy_cfg = plain;
  greedy_cfg.beam_width = 1;
  variants.push_back({"greedy", greedy_cfg, LmUse::kNone, true});
  variants.push_back({"beam", plain, LmUse::kNone, false});

  switch (kind) {
    case ModelKind::kCtc: {
      DecodeConfig fused = plain;
      fused.alpha = base.alpha;
      fused.beta_wc = base.beta_wc;
      variants.push_back({"beam_lm", fused, LmUse::kFusion, false});
      break;
    }
    case ModelKind::kRnnt: {
      DecodeConfig rescored = plain;
      rescored.lambda_lm = base.lambda_lm;
      variants.push_back({"beam_lm", rescored, LmUse::kRescore, false});
      break;
    }
    case ModelKind::kAttention: {
      DecodeConfig lennorm = plain;
      lennorm.gamma = 1.0;  // length-normalization-only preset
      variants.push_back({"beam_lennorm", lennorm, LmUse::kNone, false});
      DecodeConfig cov = plain;
      cov.beta_cov = base.beta_cov;
      variants.push_back({"beam_cov", cov, LmUse::kNone, false});
      DecodeConfig stacked = lennorm;
      stacked.beta_cov = base.beta_cov;
      variants.push_back({"beam_lennorm_cov", stacked, LmUse::kNone, false});
      DecodeConfig rescored = plain;
      rescored.lambda_lm = base.lambda_lm;
      variants.push_back({"beam_lm", rescored, LmUse::kRescore, false});
      // The full ladder: length normalization, coverage, then rescoring.
      DecodeConfig full = stacked;
      full.lambda_lm = base.lambda_lm;
      variants.push_back({"beam_lennorm_cov_lm", full, LmUse::kRescore, false});
      break;
    }
  }
  return variants;
}

namespace {

std::string decode_with_encoder(const ModelSpec& spec, const Parameters& params,
                                const RealMatrix& enc, const DecodeVariant& variant,
                                const NGramLM* lm) {
  const Alphabet alphabet = spec.alphabet();
  const DecodeConfig& cfg = variant.config;
  switch (spec.kind) {
    case ModelKind::kCtc: {
      const RealMatrix logits = ctc_head(spec, params, enc);
      if (variant.greedy) return alphabet.decode(ctc_greedy(logits));
      const NGramLM* fusion_lm = variant.lm_use == LmUse::kFusion ? lm : nullptr;
      STT_CHECK(variant.lm_use != LmUse::kFusion || lm != nullptr,
                "ctc fusion variant needs an LM");
      auto beam = ctc_prefix_beam(logits, alphabet, fusion_lm, cfg);
      return alphabet.decode(beam.front().tokens);
    }
    case ModelKind::kRnnt: {
      const auto scorer = make_step_scorer(spec, params, enc);
      auto beam = rnnt_beam(*scorer, enc.rows(), cfg);
      if (variant.lm_use == LmUse::kRescore) {
        STT_CHECK(lm != nullptr, "rescoring variant needs an LM");
        beam = rescore_with_lm(std::move(beam), alphabet, *lm, cfg);
      }
      return alphabet.decode(beam.front().tokens);
    }
    case ModelKind::kAttention: {
      const auto scorer = make_step_scorer(spec, params, enc);
      auto beam = attention_beam(*scorer, cfg);
      if (variant.lm_use == LmUse::kRescore) {
        STT_CHECK(lm != nullptr, "rescoring variant needs an LM");
        beam = rescore_with_lm(std::move(beam), alphabet, *lm, cfg);
      }
      return alphabet.decode(beam.front().tokens);
    }
  }
  throw ValidationError("unreachable model kind");
}

}  // namespace

std::string decode_utterance(const ModelSpec& spec, const Parameters& params,
                             const Utterance& utt, const DecodeVariant& variant,
                             const NGramLM* lm) {
  const RealMatrix enc = encoder_forward(spec, params, utt.frames, nullptr);
  return decode_with_encoder(spec, params, enc, variant, lm);
}

std::vector<UtteranceDecode> decode_dataset(const ModelSpec& spec, const Parameters& params,
                                            const std::vector<Utterance>& utts,
                                            const std::vector<DecodeVariant>& variants,
                                            const NGramLM* lm) {
  std::vector<UtteranceDecode> out;
  out.reserve(utts.size());
  for (const Utterance& utt : utts) {
    const RealMatrix enc = encoder_forward(spec, params, utt.frames, nullptr);
    UtteranceDecode dec;
    dec.id = utt.id;
    dec.reference = utt.reference;
    for (const DecodeVariant& variant : variants) {
      dec.by_variant[variant.name] = decode_with_encoder(spec, params, enc, variant, lm);
    }
    out.push_back(std::move(dec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV / PGM helpers

std::string metrics_csv_header() {
  return "kind,variant,utterances,ref_words,subs,ins,dels,wer,subs_pct,ins_pct,dels_pct,cer,"
         "config,seed,rng";
}

std::string metrics_csv_row(const std::string& kind, const std::string& variant,
                            const MetricsReport& report) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s,%s,%lld,%lld,%lld,%lld,%lld,%.4f,%.4f,%.4f,%.4f,%.4f,%s,%s,%s",
                kind.c_str(), variant.c_str(), static_cast<long long>(report.utterances),
                static_cast<long long>(report.ref_words), static_cast<long long>(report.subs),
                static_cast<long long>(report.ins), static_cast<long long>(report.dels),
                report.wer(), report.subs_pct(), report.ins_pct(), report.dels_pct(),
                report.cer(), report.config_echo.c_str(), report.seed_echo.c_str(),
                SeededRng::kAlgorithm);
  return buf;
}

void write_matrix_csv(const std::string& path, const RealMatrix& matrix) {
  std::ofstream os(path, std::ios::binary);
  STT_CHECK(os.good(), "cannot open '", path, "' for writing");
  char buf[64];
  for (int r = 0; r < matrix.rows(); ++r) {
    for (int c = 0; c < matrix.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.10g", matrix(r, c));
      os << (c == 0 ? "" : ",") << buf;
    }
    os << "\n";
  }
  STT_CHECK(os.good(), "failed writing '", path, "'");
}

void write_pgm(const std::string& path, const RealMatrix& matrix) {
  STT_CHECK(matrix.rows() >= 1 && matrix.cols() >= 1, "pgm: empty matrix");
  std::ofstream os(path, std::ios::binary);
  STT_CHECK(os.good(), "cannot open '", path, "' for writing");
  os << "P5\n" << matrix.cols() << " " << matrix.rows() << "\n255\n";
  std::vector<unsigned char> row(matrix.cols());
  for (int r = 0; r < matrix.rows(); ++r) {
    for (int c = 0; c < matrix.cols(); ++c) {
      const double v = std::clamp(matrix(r, c), 0.0, 1.0);
      row[c] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  STT_CHECK(os.good(), "failed writing '", path, "'");
}

std::pair<int, int> read_pgm_dims(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  STT_CHECK(is.good(), "cannot open '", path, "'");
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  is >> magic >> width >> height >> maxval;
  STT_CHECK(magic == "P5" && maxval == 255, "'", path, "' is not an 8-bit P5 graymap");
  return {height, width};
}

std::vector<TrainUtterance> to_train_utterances(const std::vector<Utterance>& utts,
                                                const Alphabet& alphabet) {
  std::vector<TrainUtterance> out;
  out.reserve(utts.size());
  for (const Utterance& utt : utts) {
    out.push_back({utt.id, utt.frames, alphabet.encode(utt.reference)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ablation

AblationResult run_decoder_ablation(const ExperimentConfig& cfg, const std::string& data_dir,
                                    const std::string& ctc_model, const std::string& rnnt_model,
                                    const std::string& attention_model, const std::string& lm_path,
                                    const std::string& out_dir) {
  for (const std::string& path : {ctc_model, rnnt_model, attention_model, lm_path}) {
    STT_CHECK(std::filesystem::exists(path), "missing input file '", path, "'");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  STT_CHECK(!ec, "cannot create '", out_dir, "'");

  const std::vector<Utterance> test = load_dataset(data_dir + "/test.dat");
  const NGramLM lm = NGramLM::load_file(lm_path);

  char config_echo[160];
  std::snprintf(config_echo, sizeof(config_echo),
                "beam=%d;alpha=%g;beta_wc=%g;gamma=%g;beta_cov=%g;lambda=%g",
                cfg.decode.beam_width, cfg.decode.alpha, cfg.decode.beta_wc, cfg.decode.gamma,
                cfg.decode.beta_cov, cfg.decode.lambda_lm);
  char seed_echo[48];
  std::snprintf(seed_echo, sizeof(seed_echo), "%llu",
                static_cast<unsigned long long>(cfg.train.seed));

  AblationResult result;
  std::ostringstream csv;
  csv << metrics_csv_header() << "\n";
  std::ostringstream table;
  table << "kind       variant               wer     subs    ins     dels\n";

  const std::vector<std::pair<std::string, ModelKind>> kinds = {
      {ctc_model, ModelKind::kCtc},
      {rnnt_model, ModelKind::kRnnt},
      {attention_model, ModelKind::kAttention}};
  for (const auto& [path, kind] : kinds) {
    const auto [spec, params] = load_model(path);
    STT_CHECK(spec.kind == kind, "model '", path, "' is a ", model_kind_name(spec.kind),
              " model, expected ", model_kind_name(kind));
    const auto variants = standard_variants(kind, cfg.decode);
    const auto decodes = decode_dataset(spec, params, test, variants, &lm);
    for (const DecodeVariant& variant : variants) {
      std::vector<std::string> refs, hyps;
      for (const auto& dec : decodes) {
        refs.push_back(dec.reference);
        hyps.push_back(dec.by_variant.at(variant.name));
      }
      MetricsReport report = wer_breakdown(refs, hyps);
      report.config_echo = config_echo;
      report.seed_echo = seed_echo;
      csv << metrics_csv_row(model_kind_name(kind), variant.name, report) << "\n";
      char line[160];
      std::snprintf(line, sizeof(line), "%-10s %-20s %7.2f %7.2f %7.2f %7.2f\n",
                    model_kind_name(kind), variant.name.c_str(), report.wer(),
                    report.subs_pct(), report.ins_pct(), report.dels_pct());
      table << line;
      result.rows.push_back({model_kind_name(kind), variant.name, report});
    }
  }

  result.csv_path = out_dir + "/ablation.csv";
  {
    std::ofstream os(result.csv_path, std::ios::binary);
    STT_CHECK(os.good(), "cannot write '", result.csv_path, "'");
    os << csv.str();
  }
  {
    std::ofstream os(out_dir + "/ablation.txt", std::ios::binary);
    os << table.str();
  }
  return result;
}

// ---------------------------------------------------------------------------
// Downsample sweep

namespace {

// Splices a downsampling stage after the first encoder layer (keeping its
// output width), or returns the stack unchanged for factor 1.
std::vector<std::string> encoder_with_factor(const std::vector<std::string>& base, int factor) {
  if (factor == 1) return base;
  const std::vector<LayerSpec> parsed = parse_encoder_spec(base);
  STT_CHECK(!parsed.empty(), "empty encoder spec");
  const LayerSpec& first = parsed.front();
  const int width = first.kind == LayerKind::kLstm && first.bidirectional ? 2 * first.width
                                                                          : first.width;
  std::vector<std::string> out;
  out.push_back(layer_spec_to_string(parsed.front()));
  out.push_back(msg_cat("ds:", factor, ":", width));
  for (size_t i = 1; i < parsed.size(); ++i) out.push_back(layer_spec_to_string(parsed[i]));
  return out;
}

double greedy_wer(const ModelSpec& spec, const Parameters& params,
                  const std::vector<Utterance>& utts, const DecodeConfig& decode) {
  DecodeVariant greedy{"greedy", decode, LmUse::kNone, true};
  greedy.config.beam_width = 1;
  greedy.config.alpha = 0.0;
  greedy.config.beta_wc = 0.0;
  greedy.config.gamma = 0.0;
  greedy.config.beta_cov = 0.0;
  greedy.config.lambda_lm = 0.0;
  std::vector<std::string> refs, hyps;
  for (const Utterance& utt : utts) {
    refs.push_back(utt.reference);
    hyps.push_back(decode_utterance(spec, params, utt, greedy, nullptr));
  }
  return wer_breakdown(refs, hyps).wer();
}

}  // namespace

std::vector<SweepRow> run_downsample_sweep(const ExperimentConfig& cfg,
                                           const std::string& data_dir,
                                           const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  STT_CHECK(!ec, "cannot create '", out_dir, "'");

  const std::vector<Utterance> train_utts = load_dataset(data_dir + "/train.dat");
  const std::vector<Utterance> dev_utts = load_dataset(data_dir + "/dev.dat");
  const int max_factor = *std::max_element(cfg.sweep_factors.begin(), cfg.sweep_factors.end());
  for (const auto* split : {&train_utts, &dev_utts}) {
    for (const Utterance& utt : *split) {
      STT_CHECK(utt.frames.rows() >= max_factor, "utterance ", utt.id,
                " shorter than the largest sweep factor");
    }
  }

  std::vector<SweepRow> rows;
  for (const ModelKind kind : {ModelKind::kCtc, ModelKind::kRnnt, ModelKind::kAttention}) {
    for (const int factor : cfg.sweep_factors) {
      for (int si = 0; si < cfg.sweep_seeds; ++si) {
        // Every kind gets the same base stack so the sweep factor IS the
        // total downsampling factor.
        ExperimentConfig run_cfg = cfg;
        run_cfg.encoder = encoder_with_factor(cfg.encoder, factor);
        run_cfg.attention_encoder.clear();
        const ModelSpec spec = run_cfg.model_spec(kind);
        STT_CHECK(spec.total_downsample_factor() == factor,
                  "sweep: base encoder must not downsample on its own");
        const Alphabet alphabet = spec.alphabet();

        // Drop and count train utterances the lattice cannot align after
        // downsampling.
        std::vector<TrainUtterance> train_set;
        int dropped = 0;
        for (const Utterance& utt : train_utts) {
          TrainUtterance tu{utt.id, utt.frames, alphabet.encode(utt.reference)};
          const int frames_out =
              (utt.frames.rows() + spec.total_downsample_factor() - 1) /
              spec.total_downsample_factor();
          if (kind == ModelKind::kCtc && frames_out < ctc_min_alignment_frames(tu.labels)) {
            ++dropped;
            continue;
          }
          train_set.push_back(std::move(tu));
        }
        STT_CHECK(!train_set.empty(), "sweep: every utterance dropped at factor ", factor);

        TrainConfig tc = cfg.train_config(kind);
        if (cfg.sweep_epochs > 0) tc.epochs = cfg.sweep_epochs;
        tc.seed = cfg.train.seed + 1000ULL * static_cast<uint64_t>(si);
        SeededRng init_rng(tc.seed);
        Parameters params = init_parameters(spec, init_rng);
        train(spec, params, train_set, tc);

        SweepRow row;
        row.kind = model_kind_name(kind);
        row.factor = factor;
        row.frames_per_step = spec.total_downsample_factor();
        row.seed = tc.seed;
        row.dropped = dropped;
        row.wer = greedy_wer(spec, params, dev_utts, cfg.decode);
        rows.push_back(row);
      }
    }
  }

  std::ofstream os(out_dir + "/downsample.csv", std::ios::binary);
  STT_CHECK(os.good(), "cannot write downsample.csv");
  os << "kind,factor,frames_per_step,seed,wer,dropped,rng\n";
  for (const SweepRow& row : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%llu,%.4f,%d,%s\n", row.kind.c_str(), row.factor,
                  row.frames_per_step, static_cast<unsigned long long>(row.seed), row.wer,
                  row.dropped, SeededRng::kAlgorithm);
    os << buf;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Forward-only comparison

std::vector<ForwardOnlyRow> run_forward_only(const ExperimentConfig& cfg,
                                             const std::string& data_dir,
                                             const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  STT_CHECK(!ec, "cannot create '", out_dir, "'");

  const std::vector<Utterance> train_utts = load_dataset(data_dir + "/train.dat");
  const std::vector<Utterance> dev_utts = load_dataset(data_dir + "/dev.dat");

  // Forward-only: every bidirectional layer of w cells becomes one
  // forward-only layer of 2w cells.
  const auto forwardize = [](const std::vector<std::string>& base) {
    std::vector<std::string> out;
    for (const LayerSpec& layer : parse_encoder_spec(base)) {
      LayerSpec fwd = layer;
      if (layer.kind == LayerKind::kLstm && layer.bidirectional) {
        fwd.bidirectional = false;
        fwd.width = 2 * layer.width;
      }
      out.push_back(layer_spec_to_string(fwd));
    }
    return out;
  };

  std::vector<ForwardOnlyRow> rows;
  for (const ModelKind kind : {ModelKind::kCtc, ModelKind::kRnnt, ModelKind::kAttention}) {
    for (const bool forward_only : {false, true}) {
      ExperimentConfig run_cfg = cfg;
      if (forward_only) {
        run_cfg.encoder = forwardize(cfg.encoder);
        if (!cfg.attention_encoder.empty()) {
          run_cfg.attention_encoder = forwardize(cfg.attention_encoder);
        }
      }
      const ModelSpec spec = run_cfg.model_spec(kind);
      const Alphabet alphabet = spec.alphabet();
      const TrainConfig tc = cfg.train_config(kind);
      SeededRng init_rng(tc.seed);
      Parameters params = init_parameters(spec, init_rng);
      train(spec, params, to_train_utterances(train_utts, alphabet), tc);

      ForwardOnlyRow row;
      row.kind = model_kind_name(kind);
      row.direction = forward_only ? "forward" : "bidirectional";
      row.param_count = params.layout->total_size();
      row.wer = greedy_wer(spec, params, dev_utts, cfg.decode);
      rows.push_back(row);
    }
  }

  std::ofstream os(out_dir + "/forward_only.csv", std::ios::binary);
  STT_CHECK(os.good(), "cannot write forward_only.csv");
  os << "kind,direction,params,wer,param_ratio_vs_bidir,within_15pct\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const ForwardOnlyRow& row = rows[i];
    const size_t bidir_params = rows[i - (i % 2)].param_count;
    const double ratio = static_cast<double>(row.param_count) / bidir_params;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.4f,%.4f,%s\n", row.kind.c_str(),
                  row.direction.c_str(), row.param_count, row.wer, ratio,
                  std::abs(ratio - 1.0) <= 0.15 ? "yes" : "no");
    os << buf;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Alignment export

AlignmentExport export_alignment(const ModelSpec& spec, const Parameters& params,
                                 const Utterance& utt, const std::string& out_dir) {
  STT_CHECK(!utt.reference.empty(), "alignment export needs a nonempty reference (utterance ",
            utt.id, ")");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  STT_CHECK(!ec, "cannot create '", out_dir, "'");

  const Alphabet alphabet = spec.alphabet();
  const LabelSeq labels = alphabet.encode(utt.reference);
  const RealMatrix enc = encoder_forward(spec, params, utt.frames, nullptr);
  const std::string prefix = out_dir + "/" + model_kind_name(spec.kind);

  AlignmentExport out;
  const auto emit = [&](const std::string& stem, const RealMatrix& matrix) {
    write_matrix_csv(stem + ".csv", matrix);
    write_pgm(stem + ".pgm", matrix);
    out.files.push_back(stem + ".csv");
    out.files.push_back(stem + ".pgm");
  };

  switch (spec.kind) {
    case ModelKind::kCtc: {
      const RealMatrix logits = ctc_head(spec, params, enc);
      const CtcAlignment path = ctc_best_alignment(logits, labels);
      RealMatrix mask(static_cast<int>(2 * labels.size() + 1), enc.rows());
      for (int t = 0; t < enc.rows(); ++t) mask(path.state_path[t], t) = 1.0;
      emit(prefix + "_path", mask);
      emit(prefix + "_posterior", ctc_state_posteriors(logits, labels));
      break;
    }
    case ModelKind::kRnnt: {
      const JointLogits joint = rnnt_joint(spec, params, enc, labels);
      const RnntAlignment path = rnnt_best_alignment(joint, labels);
      RealMatrix mask(static_cast<int>(labels.size()) + 1, enc.rows());
      for (const auto& [t, u] : path.nodes) mask(u, t) = 1.0;
      emit(prefix + "_path", mask);
      emit(prefix + "_posterior", rnnt_node_posteriors(joint, labels));
      break;
    }
    case ModelKind::kAttention: {
      const AttentionTrace trace = attention_teacher_forced(spec, params, enc, labels);
      // Ground-truth rows only (the eos row is not part of the transcript).
      RealMatrix rows(static_cast<int>(labels.size()), enc.rows());
      for (int u = 0; u < rows.rows(); ++u) {
        for (int t = 0; t < rows.cols(); ++t) rows(u, t) = trace.attention_rows(u, t);
      }
      emit(prefix + "_alpha", validate_attention_rows(rows));
      break;
    }
  }
  return out;
}

}  // namespace stt
