// tests/test_harness.cc

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

#include <filesystem>
#include <fstream>
#include <map>

#include "doctest.h"
#include "stt/dataset.h"
#include "stt/error.h"
#include "stt/experiments.h"
#include "stt/metrics.h"
#include "stt/rng.h"

using namespace stt;

namespace {

namespace fs = std::filesystem;

std::string tmp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

// Plain recursive edit distance (memoized), no backtrace: the independent
// oracle for the breakdown counts.
int64_t edit_distance_reference(const std::vector<std::string>& a,
                                const std::vector<std::string>& b, size_t i, size_t j,
                                std::map<std::pair<size_t, size_t>, int64_t>& memo) {
  if (i == a.size()) return static_cast<int64_t>(b.size() - j);
  if (j == b.size()) return static_cast<int64_t>(a.size() - i);
  const auto key = std::make_pair(i, j);
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  int64_t best;
  if (a[i] == b[j]) {
    best = edit_distance_reference(a, b, i + 1, j + 1, memo);
  } else {
    best = 1 + std::min({edit_distance_reference(a, b, i + 1, j + 1, memo),
                         edit_distance_reference(a, b, i + 1, j, memo),
                         edit_distance_reference(a, b, i, j + 1, memo)});
  }
  memo[key] = best;
  return best;
}

SyntheticSpec tiny_data_spec() {
  SyntheticSpec spec;
  spec.symbols = "abc ";
  spec.feature_dim = 5;
  spec.dmin = 1;
  spec.dmax = 2;
  spec.noise_sigma = 0.1;
  spec.silence_prob = 0.2;
  spec.min_symbols = 3;
  spec.max_symbols = 7;
  spec.train_count = 6;
  spec.dev_count = 3;
  spec.test_count = 4;
  spec.corpus_lines = 10;
  spec.seed = 77;
  return spec;
}

}  // namespace

TEST_SUITE("harness") {

// ---------------------------------------------------------------------------
// Dataset generator

TEST_CASE("dataset generation is byte-deterministic") {
  const SyntheticSpec spec = tiny_data_spec();
  const std::string dir_a = tmp_dir("stt_data_a");
  const std::string dir_b = tmp_dir("stt_data_b");
  generate_dataset(spec, dir_a);
  generate_dataset(spec, dir_b);
  for (const std::string name : {"train.dat", "dev.dat", "test.dat", "corpus.txt", "meta.json"}) {
    CHECK(slurp(dir_a + "/" + name) == slurp(dir_b + "/" + name));
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("noiseless rendering is separable by nearest prototype") {
  SyntheticSpec spec = tiny_data_spec();
  spec.noise_sigma = 0.0;
  spec.dmin = 1;
  spec.dmax = 1;
  const std::string dir = tmp_dir("stt_data_sep");
  generate_dataset(spec, dir);
  int checked = 0;
  for (const std::string name : {"train.dat", "dev.dat", "test.dat"}) {
    for (const Utterance& utt : load_dataset(dir + "/" + name)) {
      CHECK(nearest_prototype_decode(spec, utt.frames) == utt.reference);
      ++checked;
    }
  }
  CHECK(checked == spec.train_count + spec.dev_count + spec.test_count);
  fs::remove_all(dir);
}

TEST_CASE("pure-noise fraction one empties every reference") {
  SyntheticSpec spec = tiny_data_spec();
  spec.noise_utt_fraction = 1.0;
  const std::string dir = tmp_dir("stt_data_noise");
  generate_dataset(spec, dir);
  for (const Utterance& utt : load_dataset(dir + "/train.dat")) {
    CHECK(utt.reference.empty());
    CHECK(utt.frames.rows() >= 1);
  }
  fs::remove_all(dir);
}

TEST_CASE("dataset record round trip (f32 storage)") {
  const SyntheticSpec spec = tiny_data_spec();
  const std::string dir = tmp_dir("stt_data_rt");
  generate_dataset(spec, dir);
  const auto utts = load_dataset(dir + "/train.dat");
  REQUIRE(static_cast<int>(utts.size()) == spec.train_count);
  save_dataset(dir + "/again.dat", utts);
  CHECK(slurp(dir + "/train.dat") == slurp(dir + "/again.dat"));
  // Ids unique and tagged.
  for (const Utterance& utt : utts) CHECK(utt.id.rfind("train-", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("markov chains with different seeds produce different text") {
  SeededRng rng_a(1), rng_b(1);
  const MarkovTextSource a("abcd ", 11);
  const MarkovTextSource b("abcd ", 12);
  int differ = 0;
  for (int i = 0; i < 10; ++i) {
    if (a.sample(rng_a, 12) != b.sample(rng_b, 12)) ++differ;
  }
  CHECK(differ > 5);
}

// ---------------------------------------------------------------------------
// Metrics

TEST_CASE("identical transcripts score zero everywhere") {
  const std::vector<std::string> refs = {"a b c", "hello there"};
  const auto report = wer_breakdown(refs, refs);
  CHECK(report.wer() == 0.0);
  CHECK(report.subs == 0);
  CHECK(report.ins == 0);
  CHECK(report.dels == 0);
  CHECK(report.cer() == 0.0);
}

TEST_CASE("substitution-only pair from the qualitative table") {
  const auto report = wer_breakdown({"play the black eyed peas songs"},
                                    {"play the black eye piece songs"});
  CHECK(report.subs == 2);
  CHECK(report.ins == 0);
  CHECK(report.dels == 0);
  CHECK(report.ref_words == 6);
  CHECK(report.wer() == doctest::Approx(100.0 * 2.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("breakdown identity: wer equals subs + ins + dels exactly") {
  SeededRng rng(7);
  const std::string symbols = "ab ";
  for (int i = 0; i < 50; ++i) {
    std::string ref, hyp;
    for (int j = 0; j < 3 + rng.uniform_int(15); ++j) ref.push_back(symbols[rng.uniform_int(3)]);
    for (int j = 0; j < rng.uniform_int(18); ++j) hyp.push_back(symbols[rng.uniform_int(3)]);
    const auto report = wer_breakdown({ref}, {hyp});
    CHECK(report.wer() == report.subs_pct() + report.ins_pct() + report.dels_pct());
  }
  // The published identity this mirrors: 9.0 = 5.5 + 2.5 + 1.0 on 200 words.
  MetricsReport spot;
  spot.ref_words = 200;
  spot.subs = 11;
  spot.ins = 5;
  spot.dels = 2;
  CHECK(spot.subs_pct() == 5.5);
  CHECK(spot.ins_pct() == 2.5);
  CHECK(spot.dels_pct() == 1.0);
  CHECK(spot.wer() == 9.0);
}

TEST_CASE("backtrace counts reproduce the plain edit distance on random pairs") {
  SeededRng rng(11);
  const std::string symbols = "abc ";
  for (int i = 0; i < 500; ++i) {
    std::string ref, hyp;
    for (int j = 0; j < rng.uniform_int(12); ++j) ref.push_back(symbols[rng.uniform_int(4)]);
    for (int j = 0; j < rng.uniform_int(12); ++j) hyp.push_back(symbols[rng.uniform_int(4)]);
    const auto ref_words = split_words(ref);
    const auto hyp_words = split_words(hyp);
    const EditCounts counts = edit_counts(ref_words, hyp_words);
    std::map<std::pair<size_t, size_t>, int64_t> memo;
    CHECK(counts.distance() == edit_distance_reference(ref_words, hyp_words, 0, 0, memo));
  }
}

TEST_CASE("wer_breakdown validates list lengths") {
  CHECK_THROWS_AS(wer_breakdown({"a"}, {"a", "b"}), ValidationError);
}

// ---------------------------------------------------------------------------
// PGM / CSV

TEST_CASE("pgm files carry the matrix dimensions") {
  const std::string dir = tmp_dir("stt_pgm");
  RealMatrix m(3, 7, 0.0);
  m(1, 2) = 0.5;
  m(2, 6) = 1.0;
  write_pgm(dir + "/m.pgm", m);
  const auto [rows, cols] = read_pgm_dims(dir + "/m.pgm");
  CHECK(rows == 3);
  CHECK(cols == 7);
  write_matrix_csv(dir + "/m.csv", m);
  const std::string csv = slurp(dir + "/m.csv");
  CHECK(csv.find("0.5") != std::string::npos);
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Alignment export on tiny random models

TEST_CASE("alignment exports have the promised structure") {
  SyntheticSpec dspec = tiny_data_spec();
  const std::string dir = tmp_dir("stt_align");
  Utterance utt;
  utt.id = "t0";
  utt.reference = "ab a";
  SeededRng rng(123);
  utt.frames = RealMatrix(9, dspec.feature_dim);
  for (double& v : utt.frames.data()) v = rng.uniform(-1.0, 1.0);

  ExperimentConfig cfg;
  cfg.data = dspec;
  cfg.encoder = {"lstm:4"};
  cfg.embed_dim = 3;
  cfg.decoder_width = 4;

  const int U = 4;  // "ab a"
  const int T = 9;

  SUBCASE("ctc mask has one state per frame") {
    const ModelSpec spec = cfg.model_spec(ModelKind::kCtc);
    SeededRng prng(5);
    const Parameters params = init_parameters(spec, prng);
    const auto files = export_alignment(spec, params, utt, dir).files;
    REQUIRE(files.size() == 4);
    const auto [rows, cols] = read_pgm_dims(dir + "/ctc_path.pgm");
    CHECK(rows == 2 * U + 1);
    CHECK(cols == T);
    // Exactly T nonzero cells in the path mask CSV.
    int nonzero = 0;
    std::ifstream is(dir + "/ctc_path.csv");
    std::string line;
    while (std::getline(is, line)) {
      for (size_t p = 0; p < line.size(); ++p) {
        if (line[p] == '1') ++nonzero;
      }
    }
    CHECK(nonzero == T);
  }

  SUBCASE("rnnt mask is a staircase of T + U nodes") {
    const ModelSpec spec = cfg.model_spec(ModelKind::kRnnt);
    SeededRng prng(6);
    const Parameters params = init_parameters(spec, prng);
    export_alignment(spec, params, utt, dir);
    const auto [rows, cols] = read_pgm_dims(dir + "/rnnt_path.pgm");
    CHECK(rows == U + 1);
    CHECK(cols == T);
    int nonzero = 0;
    std::ifstream is(dir + "/rnnt_path.csv");
    std::string line;
    while (std::getline(is, line)) {
      for (size_t p = 0; p < line.size(); ++p) {
        if (line[p] == '1') ++nonzero;
      }
    }
    CHECK(nonzero == T + U);
  }

  SUBCASE("attention rows are normalized and shaped U x T") {
    const ModelSpec spec = cfg.model_spec(ModelKind::kAttention);
    SeededRng prng(7);
    const Parameters params = init_parameters(spec, prng);
    export_alignment(spec, params, utt, dir);
    const auto [rows, cols] = read_pgm_dims(dir + "/attention_alpha.pgm");
    CHECK(rows == U);
    CHECK(cols == T);
    std::ifstream is(dir + "/attention_alpha.csv");
    std::string line;
    int row_count = 0;
    while (std::getline(is, line)) {
      double sum = 0.0;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) sum += std::stod(cell);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
      ++row_count;
    }
    CHECK(row_count == U);
  }

  SUBCASE("empty reference is rejected") {
    const ModelSpec spec = cfg.model_spec(ModelKind::kCtc);
    SeededRng prng(8);
    const Parameters params = init_parameters(spec, prng);
    Utterance noise = utt;
    noise.reference = "";
    CHECK_THROWS_AS(export_alignment(spec, params, noise, dir), ValidationError);
  }

  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Config and variants

TEST_CASE("experiment config json round trip") {
  ExperimentConfig cfg;
  cfg.data = tiny_data_spec();
  cfg.encoder = {"bilstm:8", "lstm:4"};
  cfg.decode.beam_width = 6;
  cfg.decode.lambda_lm = 0.4;
  cfg.epochs_by_kind = {{"attention", 12}};
  const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
  CHECK(back.decode.beam_width == 6);
  CHECK(back.train_config(ModelKind::kAttention).epochs == 12);
  CHECK(back.train_config(ModelKind::kCtc).epochs == cfg.train.epochs);
}

TEST_CASE("standard variant ladders match the reporting structure") {
  DecodeConfig base;
  base.alpha = 0.5;
  base.lambda_lm = 0.3;
  base.beta_cov = 0.2;
  const auto ctc = standard_variants(ModelKind::kCtc, base);
  REQUIRE(ctc.size() == 3);
  CHECK(ctc[0].name == "greedy");
  CHECK(ctc[1].name == "beam");
  CHECK(ctc[2].name == "beam_lm");
  CHECK(ctc[2].lm_use == LmUse::kFusion);
  CHECK(ctc[1].config.alpha == 0.0);

  const auto rnnt = standard_variants(ModelKind::kRnnt, base);
  REQUIRE(rnnt.size() == 3);
  CHECK(rnnt[2].lm_use == LmUse::kRescore);
  CHECK(rnnt[2].config.gamma == 0.0);  // no length normalization

  const auto attn = standard_variants(ModelKind::kAttention, base);
  REQUIRE(attn.size() == 7);
  CHECK(attn[2].name == "beam_lennorm");
  CHECK(attn[2].config.gamma == 1.0);
  CHECK(attn[2].config.beta_cov == 0.0);  // isolated
  CHECK(attn[3].name == "beam_cov");
  CHECK(attn[3].config.gamma == 0.0);  // isolated
  CHECK(attn[4].name == "beam_lennorm_cov");
  CHECK(attn[4].config.beta_cov == 0.2);  // stacked
  CHECK(attn[4].config.gamma == 1.0);
  CHECK(attn[5].name == "beam_lm");
  CHECK(attn[5].config.gamma == 0.0);  // rescoring on the plain beam
  CHECK(attn[5].lm_use == LmUse::kRescore);
  CHECK(attn[6].name == "beam_lennorm_cov_lm");
  CHECK(attn[6].config.gamma == 1.0);
  CHECK(attn[6].config.beta_cov == 0.2);
  CHECK(attn[6].lm_use == LmUse::kRescore);
}

TEST_CASE("tiny end-to-end decode smoke across all kinds") {
  SyntheticSpec dspec = tiny_data_spec();
  dspec.noise_sigma = 0.05;
  const std::string dir = tmp_dir("stt_decode_smoke");
  generate_dataset(dspec, dir);
  const auto utts = load_dataset(dir + "/dev.dat");
  const NGramLM lm = NGramLM::train(load_text_lines(dir + "/corpus.txt"), 3, 0.1);

  ExperimentConfig cfg;
  cfg.data = dspec;
  cfg.encoder = {"lstm:4"};
  cfg.embed_dim = 3;
  cfg.decoder_width = 4;
  cfg.decode.beam_width = 3;
  cfg.decode.alpha = 0.3;
  cfg.decode.lambda_lm = 0.3;
  cfg.decode.max_output_len = 24;

  for (const ModelKind kind : {ModelKind::kCtc, ModelKind::kRnnt, ModelKind::kAttention}) {
    const ModelSpec spec = cfg.model_spec(kind);
    SeededRng prng(100 + static_cast<int>(kind));
    const Parameters params = init_parameters(spec, prng);
    const auto variants = standard_variants(kind, cfg.decode);
    const auto decodes = decode_dataset(spec, params, utts, variants, &lm);
    REQUIRE(decodes.size() == utts.size());
    for (const auto& dec : decodes) {
      for (const auto& variant : variants) {
        CHECK(dec.by_variant.count(variant.name) == 1);
      }
    }
  }
  fs::remove_all(dir);
}

}  // TEST_SUITE
