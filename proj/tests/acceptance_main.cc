// tests/acceptance_main.cc

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

// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// when anything fails. The synthetic pipeline (data generation, training,
// decoding, scoring) runs from the checked-in default config.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <vector>

#include "stt/dataset.h"
#include "stt/decoders.h"
#include "stt/error.h"
#include "stt/experiments.h"
#include "stt/grad_check.h"
#include "stt/lm.h"
#include "stt/logmath.h"
#include "stt/losses.h"
#include "stt/metrics.h"
#include "stt/network.h"

namespace {

using namespace stt;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, bool pass, const std::string& what) {
  std::printf("%s  %2d  %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

RealMatrix random_matrix(int rows, int cols, SeededRng& rng, double scale = 2.0) {
  RealMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-scale, scale);
  return m;
}

LabelSeq random_labels(int len, int num_symbols, SeededRng& rng) {
  LabelSeq labels(len);
  for (int& id : labels) id = rng.uniform_int(num_symbols);
  return labels;
}

// ---------------------------------------------------------------------------
// 1. Oracle equality: dynamic programs vs literal enumeration.

void criterion_1() {
  const auto start = Clock::now();
  SeededRng rng(20251);
  double worst = 0.0;
  int checked = 0;
  while (checked < 200) {
    const int T = 1 + rng.uniform_int(5);
    const int V = 1 + rng.uniform_int(3);
    const LabelSeq labels = random_labels(rng.uniform_int(4), V, rng);
    if (T < ctc_min_alignment_frames(labels)) continue;
    const RealMatrix logits = random_matrix(T, V + 1, rng);
    const double diff =
        std::abs(ctc_loss(logits, labels).loss - brute_force_ctc_loss(logits, labels));
    worst = std::max(worst, diff);
    ++checked;
  }
  for (int i = 0; i < 200; ++i) {
    const int T = 1 + rng.uniform_int(5);
    const int V = 1 + rng.uniform_int(3);
    const LabelSeq labels = random_labels(rng.uniform_int(4), V, rng);
    JointLogits joint(T, static_cast<int>(labels.size()) + 1, V + 1);
    for (double& v : joint.data()) v = rng.uniform(-2.0, 2.0);
    const double diff =
        std::abs(rnnt_loss(joint, labels).loss - brute_force_rnnt_loss(joint, labels));
    worst = std::max(worst, diff);
  }
  const double elapsed = seconds_since(start);
  report(1, worst < 1e-9 && elapsed < 30.0,
         msg_cat("oracle equality, 200 ctc + 200 transducer instances (max |diff| ", worst,
                 ", ", elapsed, " s)"));
}

// ---------------------------------------------------------------------------
// 2. Gradient suite: losses at 1e-5, whole networks at 1e-4.

// Every layer kind appears somewhere across the three checked models:
// dense, bidirectional and forward lstm, downsampling, embeddings, the
// projection heads and the attention decoder.
ModelSpec grad_spec(ModelKind kind) {
  ModelSpec spec;
  spec.kind = kind;
  spec.symbols = "ab";
  spec.feature_dim = 3;
  spec.encoder = parse_encoder_spec({"dense:3", "bilstm:2", "ds:2:3", "lstm:3"});
  spec.embed_dim = 2;
  spec.decoder_width = 3;
  spec.attention = {2, 2, 3};
  return spec;
}

void criterion_2() {
  const auto start = Clock::now();
  SeededRng rng(20252);
  double worst_loss = 0.0;

  for (int i = 0; i < 50; ++i) {
    const int T = 2 + rng.uniform_int(3);
    const int V = 1 + rng.uniform_int(2);
    LabelSeq labels = random_labels(rng.uniform_int(3), V, rng);
    if (T < ctc_min_alignment_frames(labels)) labels.clear();
    const RealMatrix logits = random_matrix(T, V + 1, rng);
    const auto res = ctc_loss(logits, labels);
    const auto f = [&](std::span<const double> x) {
      RealMatrix m(T, V + 1);
      std::copy(x.begin(), x.end(), m.data().begin());
      return ctc_loss(m, labels).loss;
    };
    worst_loss = std::max(worst_loss, max_rel_error(res.grad.data(),
                                                    finite_diff_grad(f, logits.data())));
  }
  for (int i = 0; i < 50; ++i) {
    const int T = 1 + rng.uniform_int(3);
    const int V = 1 + rng.uniform_int(2);
    const LabelSeq labels = random_labels(rng.uniform_int(3), V, rng);
    JointLogits joint(T, static_cast<int>(labels.size()) + 1, V + 1);
    for (double& v : joint.data()) v = rng.uniform(-2.0, 2.0);
    const auto res = rnnt_loss(joint, labels);
    const auto f = [&](std::span<const double> x) {
      JointLogits j(T, static_cast<int>(labels.size()) + 1, V + 1);
      std::copy(x.begin(), x.end(), j.data().begin());
      return rnnt_loss(j, labels).loss;
    };
    worst_loss = std::max(worst_loss, max_rel_error(res.grad.data(),
                                                    finite_diff_grad(f, joint.data())));
  }
  for (int i = 0; i < 50; ++i) {
    const int V = 2 + rng.uniform_int(2);
    const LabelSeq labels = random_labels(rng.uniform_int(4), V, rng);
    const RealMatrix logits = random_matrix(static_cast<int>(labels.size()) + 1, V + 2, rng);
    const auto res = attention_nll(logits, labels);
    const auto f = [&](std::span<const double> x) {
      RealMatrix m(logits.rows(), logits.cols());
      std::copy(x.begin(), x.end(), m.data().begin());
      return attention_nll(m, labels).loss;
    };
    worst_loss = std::max(worst_loss, max_rel_error(res.grad.data(),
                                                    finite_diff_grad(f, logits.data())));
  }

  double worst_net = 0.0;
  for (const ModelKind kind : {ModelKind::kCtc, ModelKind::kRnnt, ModelKind::kAttention}) {
    const ModelSpec spec = grad_spec(kind);
    SeededRng prng(31 + static_cast<int>(kind));
    Parameters params = init_parameters(spec, prng);
    const RealMatrix frames = random_matrix(6, spec.feature_dim, prng, 1.0);
    const LabelSeq labels = {0, 1};
    const ModelLoss res = model_loss(spec, params, frames, labels);
    const auto f = [&](std::span<const double> x) {
      Parameters p{params.layout, std::vector<double>(x.begin(), x.end())};
      return model_loss(spec, p, frames, labels).loss;
    };
    worst_net = std::max(worst_net, max_rel_error(res.param_grad,
                                                  finite_diff_grad(f, params.flat)));
  }

  const double elapsed = seconds_since(start);
  report(2, worst_loss < 1e-5 && worst_net < 1e-4 && elapsed < 120.0,
         msg_cat("gradient suite, 150 loss instances (max rel ", worst_loss,
                 ") + 3 full networks (max rel ", worst_net, ", ", elapsed, " s)"));
}

// ---------------------------------------------------------------------------
// 3. CTC normalization: mass over all label sequences is one.

void criterion_3() {
  SeededRng rng(20253);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int T = 1 + rng.uniform_int(4);
    const int V = 1 + rng.uniform_int(2);
    const RealMatrix logits = random_matrix(T, V + 1, rng);
    double total = 0.0;
    std::vector<LabelSeq> queue = {{}};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      LabelSeq y = queue[qi];
      try {
        total += std::exp(-ctc_loss(logits, y).loss);
      } catch (const NoAlignmentError&) {
      }
      if (static_cast<int>(y.size()) < T) {
        for (int s = 0; s < V; ++s) {
          LabelSeq next = y;
          next.push_back(s);
          queue.push_back(std::move(next));
        }
      }
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  report(3, worst < 1e-9,
         msg_cat("ctc normalization over all label sequences, 20 instances (max |sum-1| ",
                 worst, ")"));
}

// ---------------------------------------------------------------------------
// 4. Beam optimality with every weight zero and a saturating beam.

// Content-independent transducer scorer over additive tables (see the unit
// suite for the same construction).
struct TableState {
  int frame = 0, row = 0;
};

class TableRnntScorer : public StepScorer {
 public:
  TableRnntScorer(RealMatrix frame, RealMatrix prefix)
      : frame_(std::move(frame)), prefix_(std::move(prefix)) {}
  int num_classes() const override { return frame_.cols(); }
  ScorerState start() const override { return at(0, 0); }
  ScorerState step(const ScorerState& state, int token) const override {
    const auto* s = static_cast<const TableState*>(state.impl.get());
    if (token == num_classes() - 1) return at(s->frame + 1, s->row);
    return at(s->frame, s->row + 1);
  }

 private:
  ScorerState at(int t, int u) const {
    auto impl = std::make_shared<TableState>();
    impl->frame = t;
    impl->row = u;
    std::vector<double> scores(frame_.cols());
    for (int k = 0; k < frame_.cols(); ++k) scores[k] = frame_(t, k) + prefix_(u, k);
    ScorerState state;
    state.log_probs = log_softmax(scores);
    state.impl = std::move(impl);
    return state;
  }
  RealMatrix frame_, prefix_;
};

class TableAttnScorer : public StepScorer {
 public:
  explicit TableAttnScorer(RealMatrix step_logits) : logits_(std::move(step_logits)) {}
  int num_classes() const override { return logits_.cols(); }
  ScorerState start() const override { return at(0); }
  ScorerState step(const ScorerState& state, int) const override {
    const int step_index = *static_cast<const int*>(state.impl.get());
    return at(std::min(step_index + 1, logits_.rows() - 1));
  }

 private:
  ScorerState at(int step_index) const {
    ScorerState state;
    state.log_probs = log_softmax(logits_.row(step_index));
    state.impl = std::make_shared<int>(step_index);
    return state;
  }
  RealMatrix logits_;
};

void criterion_4() {
  SeededRng rng(20254);
  int pass = 0, total = 0;

  // CTC prefix beam vs exhaustive argmax.
  for (int i = 0; i < 30; ++i, ++total) {
    const int T = 1 + rng.uniform_int(4);
    const RealMatrix logits = random_matrix(T, 3, rng);
    const Alphabet alphabet("ab");
    DecodeConfig cfg;
    cfg.beam_width = 64;
    const auto beam = ctc_prefix_beam(logits, alphabet, nullptr, cfg);
    const auto oracle = exhaustive_search(
        [&](const LabelSeq& y) {
          try {
            return -ctc_loss(logits, y).loss;
          } catch (const NoAlignmentError&) {
            return kLogZero;
          }
        },
        2, T);
    if (beam.front().tokens == oracle.best) ++pass;
  }

  // Transducer beam vs exhaustive argmax of the transducer marginal.
  for (int i = 0; i < 30; ++i, ++total) {
    const int T = 1 + rng.uniform_int(3);
    const int V = 1 + rng.uniform_int(2);
    const int max_u = 2;
    const RealMatrix frame = random_matrix(T, V + 1, rng);
    const RealMatrix prefix = random_matrix(max_u + 1, V + 1, rng);
    const TableRnntScorer scorer(frame, prefix);
    DecodeConfig cfg;
    cfg.beam_width = 512;
    cfg.max_output_len = max_u;
    cfg.max_symbols_per_step = max_u;
    const auto beam = rnnt_beam(scorer, T, cfg);
    const auto oracle = exhaustive_search(
        [&](const LabelSeq& y) {
          RealMatrix rows(static_cast<int>(y.size()) + 1, V + 1);
          for (int u = 0; u <= static_cast<int>(y.size()); ++u) {
            for (int k = 0; k <= V; ++k) rows(u, k) = prefix(u, k);
          }
          return -rnnt_loss(joint_combine(frame, rows), y).loss;
        },
        V, max_u);
    if (beam.front().tokens == oracle.best) ++pass;
  }

  // Attention beam vs exhaustive argmax of the per-step product.
  for (int i = 0; i < 30; ++i, ++total) {
    const int V = 1 + rng.uniform_int(2);
    const RealMatrix table = random_matrix(4, V + 2, rng);
    const TableAttnScorer scorer(table);
    DecodeConfig cfg;
    cfg.beam_width = 1024;
    cfg.max_output_len = 3;
    const auto beam = attention_beam(scorer, cfg);
    const auto oracle = exhaustive_search(
        [&](const LabelSeq& y) {
          const int eos = table.cols() - 1;
          double acc = 0.0;
          for (size_t u = 0; u < y.size(); ++u) {
            acc += log_softmax(table.row(std::min<int>(static_cast<int>(u), 3)))[y[u]];
          }
          return acc + log_softmax(table.row(std::min<int>(static_cast<int>(y.size()), 3)))[eos];
        },
        V, 3);
    if (beam.front().tokens == oracle.best) ++pass;
  }

  report(4, pass == total,
         msg_cat("beam optimality vs exhaustive search (", pass, "/", total, " instances)"));
}

// ---------------------------------------------------------------------------
// Shared end-to-end pipeline (criteria 5, 7, 8, 9).

struct Pipeline {
  ExperimentConfig cfg;
  std::string work_dir;
  std::string data_dir;
  std::map<std::string, std::string> model_paths;
  std::string lm_path;
  bool ready = false;
};

Pipeline build_pipeline(const std::string& config_path) {
  Pipeline pipe;
  pipe.cfg = ExperimentConfig::load_file(config_path);
  pipe.work_dir = (fs::temp_directory_path() / "stt_acceptance").string();
  fs::remove_all(pipe.work_dir);
  fs::create_directories(pipe.work_dir);
  pipe.data_dir = pipe.work_dir + "/data";

  generate_dataset(pipe.cfg.data, pipe.data_dir);
  const NGramLM lm = NGramLM::train(load_text_lines(pipe.data_dir + "/corpus.txt"),
                                    pipe.cfg.lm_order, pipe.cfg.lm_add_k);
  pipe.lm_path = pipe.work_dir + "/lm.txt";
  lm.save_file(pipe.lm_path);

  const auto train_utts = load_dataset(pipe.data_dir + "/train.dat");
  for (const ModelKind kind : {ModelKind::kCtc, ModelKind::kRnnt, ModelKind::kAttention}) {
    const ModelSpec spec = pipe.cfg.model_spec(kind);
    auto train_set = to_train_utterances(train_utts, spec.alphabet());
    const TrainConfig tc = pipe.cfg.train_config(kind);
    SeededRng init_rng(tc.seed);
    Parameters params = init_parameters(spec, init_rng);
    train(spec, params, train_set, tc);
    const std::string path =
        pipe.work_dir + "/" + std::string(model_kind_name(kind)) + ".model";
    save_model(path, spec, params);
    pipe.model_paths[model_kind_name(kind)] = path;
  }
  pipe.ready = true;
  return pipe;
}

std::map<std::string, std::map<std::string, MetricsReport>> ablation_table(
    const AblationResult& result) {
  std::map<std::string, std::map<std::string, MetricsReport>> table;
  for (const AblationRow& row : result.rows) table[row.kind][row.variant] = row.metrics;
  return table;
}

void criterion_7(const AblationResult& result) {
  bool pass = true;
  for (const AblationRow& row : result.rows) {
    const MetricsReport& m = row.metrics;
    if (m.wer() != m.subs_pct() + m.ins_pct() + m.dels_pct()) pass = false;
  }
  MetricsReport spot;
  spot.ref_words = 200;
  spot.subs = 11;
  spot.ins = 5;
  spot.dels = 2;
  pass = pass && spot.wer() == 9.0 && spot.subs_pct() == 5.5 && spot.ins_pct() == 2.5 &&
         spot.dels_pct() == 1.0;
  report(7, pass,
         msg_cat("error-breakdown identity on ", result.rows.size(),
                 " scored runs plus the 9.0 = 5.5 + 2.5 + 1.0 spot check"));
}

void criterion_8(Pipeline& pipe) {
  bool pass = true;
  std::string detail;
  const auto test_utts = load_dataset(pipe.data_dir + "/test.dat");
  const Utterance* utt = nullptr;
  for (const Utterance& u : test_utts) {
    if (!u.reference.empty()) {
      utt = &u;
      break;
    }
  }
  if (utt == nullptr) {
    report(8, false, "alignment invariants: no utterance with a reference");
    return;
  }
  const std::string align_dir = pipe.work_dir + "/align";

  for (const auto& kind : {"ctc", "rnnt", "attention"}) {
    const auto [spec, params] = load_model(pipe.model_paths[kind]);
    const Alphabet alphabet = spec.alphabet();
    const LabelSeq labels = alphabet.encode(utt->reference);
    const RealMatrix enc = encoder_forward(spec, params, utt->frames, nullptr);
    const int T = enc.rows();
    const int U = static_cast<int>(labels.size());

    if (spec.kind == ModelKind::kCtc) {
      const auto path = ctc_best_alignment(ctc_head(spec, params, enc), labels);
      pass = pass && static_cast<int>(path.state_path.size()) == T;
      for (size_t t = 1; t < path.state_path.size(); ++t) {
        const int step = path.state_path[t] - path.state_path[t - 1];
        pass = pass && step >= 0 && step <= 2;
      }
    } else if (spec.kind == ModelKind::kRnnt) {
      const auto path = rnnt_best_alignment(rnnt_joint(spec, params, enc, labels), labels);
      pass = pass && static_cast<int>(path.nodes.size()) == T + U;
      for (size_t n = 1; n < path.nodes.size(); ++n) {
        const int dt = path.nodes[n].first - path.nodes[n - 1].first;
        const int du = path.nodes[n].second - path.nodes[n - 1].second;
        pass = pass && dt >= 0 && du >= 0 && dt + du == 1;
      }
    } else {
      const auto trace = attention_teacher_forced(spec, params, enc, labels);
      for (int u = 0; u < trace.attention_rows.rows(); ++u) {
        double sum = 0.0;
        for (int t = 0; t < trace.attention_rows.cols(); ++t) sum += trace.attention_rows(u, t);
        pass = pass && std::abs(sum - 1.0) <= 1e-6;
      }
    }

    // Exported heatmaps carry the matrix dimensions.
    const auto exported = export_alignment(spec, params, *utt, align_dir);
    for (const std::string& file : exported.files) {
      if (file.size() > 4 && file.substr(file.size() - 4) == ".pgm") {
        const auto [rows, cols] = read_pgm_dims(file);
        const std::string csv = file.substr(0, file.size() - 4) + ".csv";
        std::ifstream is(csv);
        int csv_rows = 0;
        std::string line;
        int csv_cols = -1;
        while (std::getline(is, line)) {
          ++csv_rows;
          const int commas = static_cast<int>(std::count(line.begin(), line.end(), ','));
          if (csv_cols < 0) csv_cols = commas + 1;
          pass = pass && commas + 1 == csv_cols;
        }
        pass = pass && rows == csv_rows && cols == csv_cols;
      }
    }
    detail += msg_cat(kind, " ok  ");
  }
  report(8, pass, msg_cat("alignment invariants and heatmap dimensions: ", detail));
}

void criterion_9(Pipeline& pipe, const AblationResult& first) {
  const auto second = run_decoder_ablation(pipe.cfg, pipe.data_dir, pipe.model_paths["ctc"],
                                           pipe.model_paths["rnnt"],
                                           pipe.model_paths["attention"],
                                           pipe.lm_path, pipe.work_dir + "/ablation2");
  const auto slurp = [](const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  };
  const std::string a = slurp(first.csv_path);
  const std::string b = slurp(second.csv_path);
  report(9, !a.empty() && a == b,
         msg_cat("determinism: two ablation runs produced byte-identical CSVs (",
                 a.size(), " bytes)"));
}

// ---------------------------------------------------------------------------
// 6. Downsampling trend, averaged over three seeds.

void criterion_6(const Pipeline& pipe) {
  const auto start = Clock::now();
  ExperimentConfig cfg = pipe.cfg;
  cfg.sweep_factors = {2, 8};
  cfg.sweep_seeds = 3;
  const auto rows = run_downsample_sweep(cfg, pipe.data_dir, pipe.work_dir + "/sweep");
  std::map<std::string, std::map<int, double>> mean;
  std::map<std::string, std::map<int, int>> count;
  for (const SweepRow& row : rows) {
    mean[row.kind][row.factor] += row.wer;
    count[row.kind][row.factor] += 1;
  }
  for (auto& [kind, factors] : mean) {
    for (auto& [factor, sum] : factors) sum /= count[kind][factor];
  }
  const double ctc_deg = mean["ctc"][8] - mean["ctc"][2];
  const double attn_deg = mean["attention"][8] - mean["attention"][2];
  const double elapsed = seconds_since(start);
  report(6, attn_deg <= ctc_deg,
         msg_cat("downsampling 2x->8x degradation (3-seed mean): attention ", attn_deg,
                 " <= ctc ", ctc_deg, " (", elapsed, " s)"));
}

// ---------------------------------------------------------------------------
// 10. Single-utterance overfit smoke.

void criterion_10(const Pipeline& pipe) {
  const auto utts = load_dataset(pipe.data_dir + "/train.dat");
  const Utterance* shortest = nullptr;
  for (const Utterance& utt : utts) {
    if (utt.reference.empty()) continue;
    if (shortest == nullptr || utt.reference.size() < shortest->reference.size()) {
      shortest = &utt;
    }
  }
  bool pass = shortest != nullptr;
  std::string detail;
  for (const ModelKind kind : {ModelKind::kCtc, ModelKind::kRnnt, ModelKind::kAttention}) {
    const auto start = Clock::now();
    const ModelSpec spec = pipe.cfg.model_spec(kind);
    std::vector<TrainUtterance> one = {
        {shortest->id, shortest->frames, spec.alphabet().encode(shortest->reference)}};
    TrainConfig tc = pipe.cfg.train_config(kind);
    tc.epochs = 500;  // one utterance per epoch: 500 sgd steps
    tc.batch = 1;
    tc.anneal = 1.0;
    SeededRng init_rng(tc.seed);
    Parameters params = init_parameters(spec, init_rng);
    const auto curve = train(spec, params, one, tc);
    double best = 1e300;
    for (const EpochStats& stats : curve) best = std::min(best, stats.mean_loss_per_symbol);
    const double elapsed = seconds_since(start);
    const bool ok = best < 0.1 && elapsed < 60.0;
    pass = pass && ok;
    detail += msg_cat(model_kind_name(kind), " ", best, " nats/sym in ",
                      static_cast<int>(elapsed), "s  ");
  }
  report(10, pass, msg_cat("single-utterance overfit within 500 steps: ", detail));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string config_path = argc > 1 ? argv[1] : "configs/default.json";
  std::printf("acceptance suite (config %s, rng %s)\n", config_path.c_str(),
              SeededRng::kAlgorithm);

  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();

    Pipeline pipe = build_pipeline(config_path);

    // Criterion 5 produces the ablation reused by 7 and 9.
    const auto start5 = Clock::now();
    const auto ablation = run_decoder_ablation(
        pipe.cfg, pipe.data_dir, pipe.model_paths["ctc"], pipe.model_paths["rnnt"],
        pipe.model_paths["attention"], pipe.lm_path, pipe.work_dir + "/ablation1");
    {
      const auto table = ablation_table(ablation);
      bool pass = true;
      std::string detail;
      for (const auto& kind : {"ctc", "rnnt", "attention"}) {
        const double greedy = table.at(kind).at("greedy").wer();
        const double beam_lm = table.at(kind).at("beam_lm").wer();
        pass = pass && beam_lm <= greedy;
        detail += msg_cat(kind, " ", greedy, "->", beam_lm, "  ");
      }
      const double ctc_greedy = table.at("ctc").at("greedy").wer();
      const double ctc_beam_lm = table.at("ctc").at("beam_lm").wer();
      const double rel_gain = ctc_greedy > 0.0 ? (ctc_greedy - ctc_beam_lm) / ctc_greedy : 0.0;
      pass = pass && rel_gain >= 0.10;
      const double elapsed = seconds_since(start5);
      pass = pass && elapsed < 900.0;
      report(5, pass,
             msg_cat("beam+LM vs greedy: ", detail, "(ctc relative gain ",
                     static_cast<int>(rel_gain * 100.0), "%, pipeline+decode ", elapsed, " s)"));
    }

    criterion_6(pipe);
    criterion_7(ablation);
    criterion_8(pipe);
    criterion_9(pipe, ablation);
    criterion_10(pipe);
  } catch (const Error& e) {
    std::printf("FAIL  --  unexpected toolkit error: %s\n", e.what());
    ++g_failures;
  }

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
