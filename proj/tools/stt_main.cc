// tools/stt_main.cc

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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "stt/dataset.h"
#include "stt/decoders.h"
#include "stt/error.h"
#include "stt/experiments.h"
#include "stt/lm.h"
#include "stt/metrics.h"
#include "stt/network.h"

namespace {

using namespace stt;

struct CommonArgs {
  std::string config_path = "configs/default.json";
  std::string out_dir = ".";
  std::optional<uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs* common) {
  cmd->add_option("--config", common->config_path, "Experiment config JSON");
  cmd->add_option("--out-dir", common->out_dir, "Output directory");
  cmd->add_option("--seed", common->seed, "Override the config seed");
}

ExperimentConfig load_config(const CommonArgs& common) {
  ExperimentConfig cfg = ExperimentConfig::load_file(common.config_path);
  if (common.seed.has_value()) {
    cfg.data.seed = *common.seed;
    cfg.train.seed = *common.seed;
  }
  return cfg;
}

int run_gen_data(const CommonArgs& common) {
  const ExperimentConfig cfg = load_config(common);
  generate_dataset(cfg.data, common.out_dir);
  std::printf("wrote train/dev/test/corpus under %s (seed %llu, rng %s)\n",
              common.out_dir.c_str(), static_cast<unsigned long long>(cfg.data.seed),
              SeededRng::kAlgorithm);
  return 0;
}

int run_train_lm(const std::string& corpus_path, int order, double add_k,
                 const std::string& out_path) {
  const auto lines = load_text_lines(corpus_path);
  const NGramLM lm = NGramLM::train(lines, order, add_k);
  lm.save_file(out_path);
  std::printf("trained %d-gram (k=%g) on %zu lines -> %s\n", order, add_k, lines.size(),
              out_path.c_str());
  return 0;
}

int run_train(const CommonArgs& common, const std::string& kind_name,
              const std::string& data_dir, const std::string& out_path, const TrainConfig& tc) {
  const ExperimentConfig cfg = load_config(common);
  const ModelKind kind = model_kind_from_name(kind_name);
  const ModelSpec spec = cfg.model_spec(kind);

  const auto utts = load_dataset(data_dir + "/train.dat");
  auto train_set = to_train_utterances(utts, spec.alphabet());
  if (kind == ModelKind::kCtc) {
    // Lattice feasibility after downsampling: drop and report.
    const int factor = spec.total_downsample_factor();
    int dropped = 0;
    std::erase_if(train_set, [&](const TrainUtterance& utt) {
      const int frames_out = (utt.frames.rows() + factor - 1) / factor;
      const bool drop = frames_out < ctc_min_alignment_frames(utt.labels);
      dropped += drop ? 1 : 0;
      return drop;
    });
    if (dropped > 0) std::printf("dropped %d unalignable utterances\n", dropped);
  }

  SeededRng init_rng(tc.seed);
  Parameters params = init_parameters(spec, init_rng);
  const auto curve = train(spec, params, train_set, tc);
  for (const EpochStats& stats : curve) {
    std::printf("epoch %3d  loss %8.4f  loss/sym %7.4f  lr %.5f%s\n", stats.epoch,
                stats.mean_loss, stats.mean_loss_per_symbol, stats.lr,
                stats.skipped > 0 ? msg_cat("  skipped ", stats.skipped).c_str() : "");
  }
  const auto parent = std::filesystem::path(out_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  save_model(out_path, spec, params);
  std::printf("saved %s model (%zu parameters, seed %llu) -> %s\n", kind_name.c_str(),
              params.layout->total_size(), static_cast<unsigned long long>(tc.seed),
              out_path.c_str());
  return 0;
}

int run_decode(const CommonArgs& common, const DecodeConfig& decode_cfg,
               const std::string& model_path, const std::string& data_path,
               const std::string& lm_path, bool qualitative) {
  const auto [spec, params] = load_model(model_path);
  const auto utts = load_dataset(data_path);
  std::optional<NGramLM> lm;
  if (!lm_path.empty()) lm = NGramLM::load_file(lm_path);

  auto variants = standard_variants(spec.kind, decode_cfg);
  if (!lm.has_value()) {
    std::erase_if(variants, [](const DecodeVariant& v) { return v.lm_use != LmUse::kNone; });
  }
  const auto decodes =
      decode_dataset(spec, params, utts, variants, lm.has_value() ? &*lm : nullptr);

  std::filesystem::create_directories(common.out_dir);
  const std::string jsonl_path = common.out_dir + "/decodes.jsonl";
  std::ofstream os(jsonl_path, std::ios::binary);
  STT_CHECK(os.good(), "cannot write '", jsonl_path, "'");
  for (const auto& dec : decodes) {
    nlohmann::json j;
    j["id"] = dec.id;
    j["reference"] = dec.reference;
    j["hyps"] = dec.by_variant;
    os << j.dump() << "\n";
  }
  std::printf("decoded %zu utterances x %zu variants -> %s\n", decodes.size(), variants.size(),
              jsonl_path.c_str());

  if (qualitative) {
    // Decode ladders for the pure-noise utterances: logged evidence of how
    // each stage behaves when there is nothing to transcribe.
    const std::string qual_path = common.out_dir + "/qualitative.txt";
    std::ofstream qs(qual_path, std::ios::binary);
    for (const auto& dec : decodes) {
      if (!dec.reference.empty()) continue;
      qs << dec.id << "\n  ground truth: <silence>\n";
      for (const auto& [variant, hyp] : dec.by_variant) {
        qs << "  " << variant << ": " << (hyp.empty() ? "<silence>" : hyp) << "\n";
      }
    }
    std::printf("qualitative silence log -> %s\n", qual_path.c_str());
  }
  return 0;
}

int run_score(const CommonArgs& common, const std::string& decodes_path,
              const std::string& variant) {
  std::ifstream is(decodes_path, std::ios::binary);
  STT_CHECK(is.good(), "cannot open '", decodes_path, "'");
  std::vector<std::string> refs, hyps;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    refs.push_back(j.at("reference").get<std::string>());
    const auto& by_variant = j.at("hyps");
    STT_CHECK(by_variant.contains(variant), "decodes file has no variant '", variant, "'");
    hyps.push_back(by_variant.at(variant).get<std::string>());
  }
  STT_CHECK(!refs.empty(), "no decode records in '", decodes_path, "'");
  MetricsReport report = wer_breakdown(refs, hyps);
  report.config_echo = variant;
  report.seed_echo = "-";

  std::filesystem::create_directories(common.out_dir);
  const std::string csv_path = common.out_dir + "/metrics.csv";
  std::ofstream os(csv_path, std::ios::binary);
  os << metrics_csv_header() << "\n" << metrics_csv_row("-", variant, report) << "\n";
  std::printf("%s: WER %.2f = S %.2f + I %.2f + D %.2f (CER %.2f) over %lld words -> %s\n",
              variant.c_str(), report.wer(), report.subs_pct(), report.ins_pct(),
              report.dels_pct(), report.cer(), static_cast<long long>(report.ref_words),
              csv_path.c_str());
  return 0;
}

int run_ablate(const CommonArgs& common, const std::string& data_dir, const std::string& ctc,
               const std::string& rnnt, const std::string& attention, const std::string& lm) {
  const ExperimentConfig cfg = load_config(common);
  const auto result =
      run_decoder_ablation(cfg, data_dir, ctc, rnnt, attention, lm, common.out_dir);
  std::ifstream table(common.out_dir + "/ablation.txt");
  std::cout << table.rdbuf();
  std::printf("-> %s\n", result.csv_path.c_str());
  return 0;
}

int run_sweep(const CommonArgs& common, const std::string& data_dir, int seeds_override) {
  ExperimentConfig cfg = load_config(common);
  if (seeds_override > 0) cfg.sweep_seeds = seeds_override;
  const auto rows = run_downsample_sweep(cfg, data_dir, common.out_dir);
  for (const SweepRow& row : rows) {
    std::printf("%-10s factor %d (frames/step %d, seed %llu): WER %.2f, dropped %d\n",
                row.kind.c_str(), row.factor, row.frames_per_step,
                static_cast<unsigned long long>(row.seed), row.wer, row.dropped);
  }
  return 0;
}

int run_fwd(const CommonArgs& common, const std::string& data_dir) {
  const ExperimentConfig cfg = load_config(common);
  const auto rows = run_forward_only(cfg, data_dir, common.out_dir);
  for (const ForwardOnlyRow& row : rows) {
    std::printf("%-10s %-14s params %zu  WER %.2f\n", row.kind.c_str(), row.direction.c_str(),
                row.param_count, row.wer);
  }
  return 0;
}

int run_align(const CommonArgs& common, const std::string& model_path,
              const std::string& data_path, const std::string& utt_id) {
  const auto [spec, params] = load_model(model_path);
  const auto utts = load_dataset(data_path);
  const Utterance* chosen = nullptr;
  for (const Utterance& utt : utts) {
    if (utt_id.empty() ? !utt.reference.empty() : utt.id == utt_id) {
      chosen = &utt;
      break;
    }
  }
  STT_CHECK(chosen != nullptr, utt_id.empty() ? "no utterance with a nonempty reference"
                                              : msg_cat("no utterance with id '", utt_id, "'"));
  const auto exported = export_alignment(spec, params, *chosen, common.out_dir);
  for (const std::string& file : exported.files) std::printf("wrote %s\n", file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence transduction toolkit: CTC, transducer and attention at toy scale"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* gen = app.add_subcommand("gen-data", "Generate the synthetic dataset splits");
  add_common(gen, &common);

  auto* trainlm = app.add_subcommand("train-lm", "Train the character n-gram LM");
  std::string corpus_path, lm_out = "lm.txt";
  int lm_order = 4;
  double lm_add_k = 0.1;
  trainlm->add_option("--corpus", corpus_path, "Text corpus, one sentence per line")->required();
  trainlm->add_option("--order", lm_order, "n-gram order");
  trainlm->add_option("--add-k", lm_add_k, "Additive smoothing constant");
  trainlm->add_option("--out", lm_out, "Output LM file");
  add_common(trainlm, &common);

  auto* traincmd = app.add_subcommand("train", "Train one model kind");
  std::string kind_name, data_dir = "data", model_out = "model.bin";
  TrainConfig train_flags;
  traincmd->add_option("--kind", kind_name, "ctc | rnnt | attention")->required();
  traincmd->add_option("--data-dir", data_dir, "Dataset directory (gen-data output)");
  traincmd->add_option("--out", model_out, "Output model file");
  traincmd->add_option("--lr", train_flags.lr);
  traincmd->add_option("--clip_norm", train_flags.clip_norm);
  traincmd->add_option("--epochs", train_flags.epochs);
  traincmd->add_option("--batch", train_flags.batch);
  traincmd->add_option("--anneal", train_flags.anneal);
  traincmd->add_option("--weight_noise_sigma", train_flags.weight_noise_sigma);
  add_common(traincmd, &common);

  auto* decode = app.add_subcommand("decode", "Decode a dataset file with one model");
  std::string model_path, data_path, lm_path;
  bool qualitative = false;
  DecodeConfig decode_flags;
  decode->add_option("--model", model_path, "Model file")->required();
  decode->add_option("--data", data_path, "Dataset file (.dat)")->required();
  decode->add_option("--lm", lm_path, "LM file (enables the +LM variants)");
  decode->add_flag("--qualitative", qualitative, "Dump decode ladders for pure-noise utterances");
  decode->add_option("--beam_width", decode_flags.beam_width);
  decode->add_option("--alpha", decode_flags.alpha);
  decode->add_option("--beta_wc", decode_flags.beta_wc);
  decode->add_option("--gamma", decode_flags.gamma);
  decode->add_option("--beta_cov", decode_flags.beta_cov);
  decode->add_option("--lambda", decode_flags.lambda_lm);
  decode->add_option("--max_symbols_per_step", decode_flags.max_symbols_per_step);
  decode->add_option("--max_output_len", decode_flags.max_output_len);
  add_common(decode, &common);

  auto* score = app.add_subcommand("score", "Score a decodes.jsonl file");
  std::string decodes_path, score_variant = "beam";
  score->add_option("--decodes", decodes_path, "decodes.jsonl from the decode command")
      ->required();
  score->add_option("--variant", score_variant, "Which hypothesis column to score");
  add_common(score, &common);

  auto* ablate = app.add_subcommand("ablate", "Greedy / beam / beam+LM comparison table");
  std::string ctc_model, rnnt_model, attention_model, ablate_lm;
  ablate->add_option("--data-dir", data_dir, "Dataset directory");
  ablate->add_option("--ctc", ctc_model, "CTC model file")->required();
  ablate->add_option("--rnnt", rnnt_model, "Transducer model file")->required();
  ablate->add_option("--attention", attention_model, "Attention model file")->required();
  ablate->add_option("--lm", ablate_lm, "LM file")->required();
  add_common(ablate, &common);

  auto* sweep = app.add_subcommand("sweep-downsample", "WER vs encoder downsampling factor");
  int sweep_seeds = 0;
  sweep->add_option("--data-dir", data_dir, "Dataset directory");
  sweep->add_option("--seeds", sweep_seeds, "Training seeds per cell");
  add_common(sweep, &common);

  auto* fwd = app.add_subcommand("forward-only", "Bidirectional vs forward-only encoders");
  fwd->add_option("--data-dir", data_dir, "Dataset directory");
  add_common(fwd, &common);

  auto* align = app.add_subcommand("align", "Export ground-truth alignment heatmaps");
  std::string utt_id;
  align->add_option("--model", model_path, "Model file")->required();
  align->add_option("--data", data_path, "Dataset file (.dat)")->required();
  align->add_option("--utt-id", utt_id, "Utterance id (default: first with a reference)");
  add_common(align, &common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen_data(common);
    if (trainlm->parsed()) return run_train_lm(corpus_path, lm_order, lm_add_k, lm_out);
    if (traincmd->parsed()) {
      const ExperimentConfig cfg = load_config(common);
      TrainConfig tc = cfg.train_config(model_kind_from_name(kind_name));
      if (common.seed.has_value()) tc.seed = *common.seed;
      if (traincmd->count("--lr")) tc.lr = train_flags.lr;
      if (traincmd->count("--clip_norm")) tc.clip_norm = train_flags.clip_norm;
      if (traincmd->count("--epochs")) tc.epochs = train_flags.epochs;
      if (traincmd->count("--batch")) tc.batch = train_flags.batch;
      if (traincmd->count("--anneal")) tc.anneal = train_flags.anneal;
      if (traincmd->count("--weight_noise_sigma")) {
        tc.weight_noise_sigma = train_flags.weight_noise_sigma;
      }
      return run_train(common, kind_name, data_dir, model_out, tc);
    }
    if (decode->parsed()) {
      DecodeConfig merged = load_config(common).decode;
      if (decode->count("--beam_width")) merged.beam_width = decode_flags.beam_width;
      if (decode->count("--alpha")) merged.alpha = decode_flags.alpha;
      if (decode->count("--beta_wc")) merged.beta_wc = decode_flags.beta_wc;
      if (decode->count("--gamma")) merged.gamma = decode_flags.gamma;
      if (decode->count("--beta_cov")) merged.beta_cov = decode_flags.beta_cov;
      if (decode->count("--lambda")) merged.lambda_lm = decode_flags.lambda_lm;
      if (decode->count("--max_symbols_per_step")) {
        merged.max_symbols_per_step = decode_flags.max_symbols_per_step;
      }
      if (decode->count("--max_output_len")) merged.max_output_len = decode_flags.max_output_len;
      merged.validate();
      return run_decode(common, merged, model_path, data_path, lm_path, qualitative);
    }
    if (score->parsed()) return run_score(common, decodes_path, score_variant);
    if (ablate->parsed()) {
      return run_ablate(common, data_dir, ctc_model, rnnt_model, attention_model, ablate_lm);
    }
    if (sweep->parsed()) return run_sweep(common, data_dir, sweep_seeds);
    if (fwd->parsed()) return run_fwd(common, data_dir);
    if (align->parsed()) return run_align(common, model_path, data_path, utt_id);
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
