// core/include/stt/experiments.h

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

#ifndef STT_EXPERIMENTS_H_
#define STT_EXPERIMENTS_H_

#include <optional>
#include <string>
#include <vector>

#include "stt/dataset.h"
#include "stt/decoders.h"
#include "stt/lm.h"
#include "stt/metrics.h"
#include "stt/network.h"

namespace stt {

// Every experiment budget lives in one JSON config file checked into the
// repo (configs/default.json); the CLI loads it and applies flag overrides.
struct ExperimentConfig {
  SyntheticSpec data;
  std::vector<std::string> encoder = {"bilstm:24"};
  std::vector<std::string> attention_encoder;  // empty: reuse `encoder`
  int embed_dim = 8;
  int decoder_width = 24;
  AttentionConfig attention;
  TrainConfig train;
  std::map<std::string, int> epochs_by_kind;  // optional per-kind override
  DecodeConfig decode;
  int lm_order = 4;
  double lm_add_k = 0.1;
  std::vector<int> sweep_factors = {1, 2, 4, 8};
  int sweep_seeds = 1;
  int sweep_epochs = 0;  // 0: use the per-kind budget

  ModelSpec model_spec(ModelKind kind) const;
  TrainConfig train_config(ModelKind kind) const;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load_file(const std::string& path);
};

// ---------------------------------------------------------------------------
// Decode/score plumbing

enum class LmUse { kNone, kFusion, kRescore };

struct DecodeVariant {
  std::string name;
  DecodeConfig config;
  LmUse lm_use = LmUse::kNone;
  bool greedy = false;
};

// Decodes one utterance under a variant. The LM pointer may be null when
// the variant does not use one.
std::string decode_utterance(const ModelSpec& spec, const Parameters& params,
                             const Utterance& utt, const DecodeVariant& variant,
                             const NGramLM* lm);

struct UtteranceDecode {
  std::string id;
  std::string reference;
  std::map<std::string, std::string> by_variant;
};

std::vector<UtteranceDecode> decode_dataset(const ModelSpec& spec, const Parameters& params,
                                            const std::vector<Utterance>& utts,
                                            const std::vector<DecodeVariant>& variants,
                                            const NGramLM* lm);

// The standard variant ladder for one model kind: greedy, beam, beam+LM
// (fusion for ctc, final-beam rescoring otherwise), plus the attention
// length-norm / coverage rows in both isolated and stacked form.
std::vector<DecodeVariant> standard_variants(ModelKind kind, const DecodeConfig& base);

// ---------------------------------------------------------------------------
// Experiment drivers (the CLI subcommands call straight into these)

struct AblationRow {
  std::string kind;
  std::string variant;
  MetricsReport metrics;
};

struct AblationResult {
  std::vector<AblationRow> rows;
  std::string csv_path;
};

// Expects trained model files and an LM file; writes ablation.csv and a
// readable table to out_dir.
AblationResult run_decoder_ablation(const ExperimentConfig& cfg, const std::string& data_dir,
                                    const std::string& ctc_model, const std::string& rnnt_model,
                                    const std::string& attention_model, const std::string& lm_path,
                                    const std::string& out_dir);

struct SweepRow {
  std::string kind;
  int factor = 0;
  int frames_per_step = 0;
  uint64_t seed = 0;
  double wer = 0.0;
  int dropped = 0;  // train utterances without a feasible alignment
};

// Trains each kind at each total downsampling factor (matched budgets) and
// greedy-decodes the dev set. Writes downsample.csv.
std::vector<SweepRow> run_downsample_sweep(const ExperimentConfig& cfg,
                                           const std::string& data_dir,
                                           const std::string& out_dir);

struct ForwardOnlyRow {
  std::string kind;
  std::string direction;  // "bidirectional" | "forward"
  size_t param_count = 0;
  double wer = 0.0;
};

// Bidirectional(w) vs forward-only(2w) comparison per kind, matched budgets.
// Writes forward_only.csv with parameter counts and their ratio.
std::vector<ForwardOnlyRow> run_forward_only(const ExperimentConfig& cfg,
                                             const std::string& data_dir,
                                             const std::string& out_dir);

// Ground-truth alignment export: the Viterbi path mask and per-node
// posterior for lattice models, the attention weight rows otherwise. Writes
// <kind>_path.csv/.pgm and <kind>_posterior.csv/.pgm (attention:
// <kind>_alpha.csv/.pgm).
struct AlignmentExport {
  std::vector<std::string> files;
};
AlignmentExport export_alignment(const ModelSpec& spec, const Parameters& params,
                                 const Utterance& utt, const std::string& out_dir);

// ---------------------------------------------------------------------------
// Small file helpers shared by drivers, CLI and tests

// 8-bit binary PGM ("P5"); values are clamped to [0, 1] and scaled to 255.
void write_pgm(const std::string& path, const RealMatrix& matrix);
std::pair<int, int> read_pgm_dims(const std::string& path);  // (rows, cols)

void write_matrix_csv(const std::string& path, const RealMatrix& matrix);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& kind, const std::string& variant,
                            const MetricsReport& report);

std::vector<TrainUtterance> to_train_utterances(const std::vector<Utterance>& utts,
                                                const Alphabet& alphabet);

}  // namespace stt

#endif  // STT_EXPERIMENTS_H_
