// tests/test_decoders.cc

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
#include <memory>
#include <vector>

#include "doctest.h"
#include "stt/decoders.h"
#include "stt/error.h"
#include "stt/logmath.h"
#include "stt/losses.h"
#include "stt/rng.h"

using namespace stt;

namespace {

RealMatrix random_matrix(int rows, int cols, SeededRng& rng, double scale = 2.0) {
  RealMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-scale, scale);
  return m;
}

// Transducer scorer over fixed additive tables: distribution at lattice node
// (t, u) is softmax(frame[t] + prefix[u]), independent of which symbols were
// emitted. Exactly the structure rnnt_loss scores, so enumeration oracles
// line up.
struct TableRnntState {
  int frame = 0;
  int row = 0;
};

class TableRnntScorer : public StepScorer {
 public:
  TableRnntScorer(RealMatrix frame, RealMatrix prefix)
      : frame_(std::move(frame)), prefix_(std::move(prefix)) {}

  int num_classes() const override { return frame_.cols(); }

  ScorerState start() const override { return at(0, 0); }

  ScorerState step(const ScorerState& state, int token) const override {
    const auto* s = static_cast<const TableRnntState*>(state.impl.get());
    if (token == num_classes() - 1) return at(s->frame + 1, s->row);
    REQUIRE(s->row + 1 < prefix_.rows());
    return at(s->frame, s->row + 1);
  }

 private:
  ScorerState at(int t, int u) const {
    auto impl = std::make_shared<TableRnntState>();
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

// Attention-style scorer whose distribution depends only on the step index.
class TableAttnScorer : public StepScorer {
 public:
  explicit TableAttnScorer(RealMatrix step_logits, RealMatrix attn_rows = {})
      : logits_(std::move(step_logits)), attn_(std::move(attn_rows)) {}

  int num_classes() const override { return logits_.cols(); }

  ScorerState start() const override { return at(0); }

  ScorerState step(const ScorerState& state, int token) const override {
    REQUIRE(token < num_classes() - 2);  // never sos/eos
    const int step_index = *static_cast<const int*>(state.impl.get());
    return at(std::min(step_index + 1, logits_.rows() - 1));
  }

 private:
  ScorerState at(int step_index) const {
    ScorerState state;
    state.log_probs = log_softmax(logits_.row(step_index));
    if (attn_.rows() > 0) {
      const auto row = attn_.row(std::min(step_index, attn_.rows() - 1));
      state.attention_row.assign(row.begin(), row.end());
    }
    state.impl = std::make_shared<int>(step_index);
    return state;
  }

  RealMatrix logits_, attn_;
};

double attn_sequence_score(const RealMatrix& step_logits, const LabelSeq& y) {
  const int eos = step_logits.cols() - 1;
  double acc = 0.0;
  for (size_t u = 0; u < y.size(); ++u) {
    const int row = std::min(static_cast<int>(u), step_logits.rows() - 1);
    acc += log_softmax(step_logits.row(row))[y[u]];
  }
  const int final_row = std::min(static_cast<int>(y.size()), step_logits.rows() - 1);
  return acc + log_softmax(step_logits.row(final_row))[eos];
}

}  // namespace

TEST_SUITE("decoders") {

// ---------------------------------------------------------------------------
// CTC greedy

TEST_CASE("ctc_greedy collapses repeats then blanks") {
  // argmax path a a b - b  ->  "abb"
  RealMatrix logits(5, 3, 0.0);
  logits(0, 0) = 5.0;
  logits(1, 0) = 5.0;
  logits(2, 1) = 5.0;
  logits(3, 2) = 5.0;
  logits(4, 1) = 5.0;
  CHECK(ctc_greedy(logits) == LabelSeq{0, 1, 1});
}

TEST_CASE("ctc_greedy on an all-blank path is empty") {
  RealMatrix logits(4, 3, 0.0);
  for (int t = 0; t < 4; ++t) logits(t, 2) = 3.0;
  CHECK(ctc_greedy(logits).empty());
}

TEST_CASE("ctc_greedy recovers a planted expanded path") {
  SeededRng rng(41);
  const LabelSeq labels = {1, 0, 0};
  const std::vector<int> planted = {1, 2, 0, 2, 0, 0};  // collapses to 1,0,0
  RealMatrix logits(static_cast<int>(planted.size()), 3, 0.0);
  for (size_t t = 0; t < planted.size(); ++t) logits(static_cast<int>(t), planted[t]) = 6.0;
  CHECK(ctc_greedy(logits) == labels);
}

TEST_CASE("ctc_greedy equals collapse of the per-frame argmax (property)") {
  SeededRng rng(43);
  for (int i = 0; i < 50; ++i) {
    const RealMatrix logits = random_matrix(1 + rng.uniform_int(8), 2 + rng.uniform_int(3), rng);
    // Direct reimplementation: argmax, dedupe consecutive, drop blank.
    const int blank = logits.cols() - 1;
    LabelSeq expected;
    int prev = -1;
    for (int t = 0; t < logits.rows(); ++t) {
      int arg = 0;
      for (int k = 1; k < logits.cols(); ++k) {
        if (logits(t, k) > logits(t, arg)) arg = k;
      }
      if (arg != prev && arg != blank) expected.push_back(arg);
      prev = arg;
    }
    CHECK(ctc_greedy(logits) == expected);
  }
}

// ---------------------------------------------------------------------------
// CTC prefix beam

TEST_CASE("ctc prefix beam with a huge beam finds the exact argmax") {
  SeededRng rng(47);
  const Alphabet alphabet("ab");
  for (int i = 0; i < 12; ++i) {
    const int T = 1 + rng.uniform_int(4);
    const RealMatrix logits = random_matrix(T, 3, rng);
    DecodeConfig cfg;
    cfg.beam_width = 64;  // larger than the whole prefix space
    const auto beam = ctc_prefix_beam(logits, alphabet, nullptr, cfg);
    REQUIRE(!beam.empty());

    const auto score_fn = [&](const LabelSeq& y) {
      try {
        return -ctc_loss(logits, y).loss;
      } catch (const NoAlignmentError&) {
        return kLogZero;
      }
    };
    const auto oracle = exhaustive_search(score_fn, 2, T);
    CHECK(beam.front().tokens == oracle.best);
    CHECK(beam.front().log_p_model == doctest::Approx(oracle.score).epsilon(1e-9));
  }
}

TEST_CASE("ctc prefix beam: width one is lossy but never beats the oracle") {
  SeededRng rng(53);
  const Alphabet alphabet("ab");
  const RealMatrix logits = random_matrix(4, 3, rng);
  DecodeConfig narrow;
  narrow.beam_width = 1;
  const auto beam = ctc_prefix_beam(logits, alphabet, nullptr, narrow);
  REQUIRE(!beam.empty());
  const auto score_fn = [&](const LabelSeq& y) {
    try {
      return -ctc_loss(logits, y).loss;
    } catch (const NoAlignmentError&) {
      return kLogZero;
    }
  };
  const auto oracle = exhaustive_search(score_fn, 2, 4);
  CHECK(beam.front().log_p_model <= oracle.score + 1e-12);
}

TEST_CASE("ctc prefix beam: the LM term breaks acoustic ties") {
  const Alphabet alphabet("ab");
  const RealMatrix logits(2, 3, 0.0);  // uniform: "a" and "b" tie acoustically
  const NGramLM lm = NGramLM::train({"b", "b", "b"}, 2, 0.5);
  DecodeConfig cfg;
  cfg.beam_width = 32;

  cfg.alpha = 0.0;
  auto beam = ctc_prefix_beam(logits, alphabet, &lm, cfg);
  const auto rank_of = [](const std::vector<Hypothesis>& hyps, const LabelSeq& tokens) {
    for (size_t i = 0; i < hyps.size(); ++i) {
      if (hyps[i].tokens == tokens) return static_cast<int>(i);
    }
    return -1;
  };
  // Without the LM the deterministic tie-break puts "a" first.
  CHECK(rank_of(beam, {0}) < rank_of(beam, {1}));

  cfg.alpha = 5.0;
  beam = ctc_prefix_beam(logits, alphabet, &lm, cfg);
  CHECK(rank_of(beam, {1}) >= 0);
  CHECK(rank_of(beam, {0}) >= 0);
  CHECK(rank_of(beam, {1}) < rank_of(beam, {0}));
}

TEST_CASE("ctc prefix beam: beam monotonicity in the width") {
  SeededRng rng(59);
  const Alphabet alphabet("ab");
  for (int i = 0; i < 10; ++i) {
    const RealMatrix logits = random_matrix(5, 3, rng);
    DecodeConfig cfg;
    double previous = -1e300;
    for (const int width : {1, 2, 4, 8, 32}) {
      cfg.beam_width = width;
      const auto beam = ctc_prefix_beam(logits, alphabet, nullptr, cfg);
      const double top = beam.front().total_score(cfg);
      CHECK(top >= previous - 1e-12);
      previous = top;
    }
  }
}

TEST_CASE("no beam width beats the saturating beam") {
  // The saturating beam prunes nothing, so its top-1 bounds every narrower
  // search (pairwise monotonicity between two lossy widths is not a theorem
  // for pruned beam search).
  SeededRng rng(60);
  for (int i = 0; i < 6; ++i) {
    const int V = 2;
    const RealMatrix frame = random_matrix(3, V + 1, rng);
    const RealMatrix prefix = random_matrix(4, V + 1, rng);
    const TableRnntScorer rnnt_scorer(frame, prefix);
    const RealMatrix table = random_matrix(4, V + 2, rng);
    const TableAttnScorer attn_scorer(table);

    DecodeConfig cfg;
    cfg.max_output_len = 3;
    cfg.max_symbols_per_step = 3;
    cfg.beam_width = 4096;
    const double rnnt_best = rnnt_beam(rnnt_scorer, 3, cfg).front().total_score(cfg);
    const double attn_best = attention_beam(attn_scorer, cfg).front().total_score(cfg);
    for (const int width : {1, 2, 4, 16}) {
      cfg.beam_width = width;
      CHECK(rnnt_beam(rnnt_scorer, 3, cfg).front().total_score(cfg) <= rnnt_best + 1e-12);
      CHECK(attention_beam(attn_scorer, cfg).front().total_score(cfg) <= attn_best + 1e-12);
    }
  }
}

TEST_CASE("hypothesis scores are recomputable from their components") {
  SeededRng rng(62);
  const Alphabet alphabet("ab ");
  const NGramLM lm = NGramLM::train({"ab a", "b ab", "aa b"}, 3, 0.2);
  const RealMatrix logits = random_matrix(4, 4, rng);
  DecodeConfig cfg;
  cfg.beam_width = 256;  // saturating: per-prefix masses are exact marginals
  cfg.alpha = 0.7;
  cfg.beta_wc = 0.3;
  const auto beam = ctc_prefix_beam(logits, alphabet, &lm, cfg);
  for (const Hypothesis& hyp : beam) {
    // Components rebuilt from scratch must reproduce the stored ones.
    CHECK(hyp.word_count == word_count_of(hyp.tokens, alphabet));
    CHECK(hyp.log_p_lm ==
          doctest::Approx(lm.score(alphabet.decode(hyp.tokens))).epsilon(1e-12));
    CHECK(hyp.log_p_model ==
          doctest::Approx(-ctc_loss(logits, hyp.tokens).loss).epsilon(1e-9));
    const double expected = hyp.log_p_model + cfg.alpha * hyp.log_p_lm +
                            cfg.beta_wc * hyp.word_count;
    CHECK(hyp.total_score(cfg) == doctest::Approx(expected).epsilon(1e-12));
  }
}

// ---------------------------------------------------------------------------
// Transducer beam

TEST_CASE("rnnt beam with a huge beam matches the enumeration oracle") {
  SeededRng rng(61);
  for (int i = 0; i < 10; ++i) {
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
    REQUIRE(!beam.empty());

    const auto score_fn = [&](const LabelSeq& y) {
      RealMatrix rows(static_cast<int>(y.size()) + 1, V + 1);
      for (int u = 0; u <= static_cast<int>(y.size()); ++u) {
        for (int k = 0; k <= V; ++k) rows(u, k) = prefix(u, k);
      }
      return -rnnt_loss(joint_combine(frame, rows), y).loss;
    };
    const auto oracle = exhaustive_search(score_fn, V, max_u);
    CHECK(beam.front().tokens == oracle.best);
    CHECK(beam.front().log_p_model == doctest::Approx(oracle.score).epsilon(1e-9));
  }
}

TEST_CASE("rnnt beam: certain blank yields the empty transcript") {
  RealMatrix frame(3, 3, 0.0);
  for (int t = 0; t < 3; ++t) frame(t, 2) = 60.0;
  const RealMatrix prefix(2, 3, 0.0);
  const TableRnntScorer scorer(frame, prefix);
  DecodeConfig cfg;
  cfg.beam_width = 4;
  cfg.max_output_len = 1;
  const auto beam = rnnt_beam(scorer, 3, cfg);
  CHECK(beam.front().tokens.empty());
}

TEST_CASE("rnnt beam: merged prefixes carry the full marginal") {
  SeededRng rng(67);
  const int T = 3, V = 1;
  const RealMatrix frame = random_matrix(T, V + 1, rng);
  const RealMatrix prefix = random_matrix(2, V + 1, rng);
  const TableRnntScorer scorer(frame, prefix);
  DecodeConfig cfg;
  cfg.beam_width = 128;
  cfg.max_output_len = 1;
  const auto beam = rnnt_beam(scorer, T, cfg);
  // The "a" hypothesis merges one lattice path per emission frame; its mass
  // must equal the transducer marginal.
  for (const Hypothesis& hyp : beam) {
    if (hyp.tokens == LabelSeq{0}) {
      RealMatrix rows(2, V + 1);
      for (int u = 0; u < 2; ++u) {
        for (int k = 0; k <= V; ++k) rows(u, k) = prefix(u, k);
      }
      const double marginal = -rnnt_loss(joint_combine(frame, rows), {0}).loss;
      CHECK(hyp.log_p_model == doctest::Approx(marginal).epsilon(1e-9));
    }
  }
}

TEST_CASE("rnnt beam: output cap freezes and flags the hypothesis") {
  RealMatrix frame(2, 3, 0.0);
  for (int t = 0; t < 2; ++t) frame(t, 0) = 30.0;  // symbol 'a' nearly certain
  const RealMatrix prefix(4, 3, 0.0);
  const TableRnntScorer scorer(frame, prefix);
  DecodeConfig cfg;
  cfg.beam_width = 4;
  cfg.max_output_len = 1;
  cfg.max_symbols_per_step = 3;
  const auto beam = rnnt_beam(scorer, 2, cfg);
  REQUIRE(!beam.empty());
  CHECK(static_cast<int>(beam.front().tokens.size()) <= 1);
  CHECK(beam.front().truncated);
}

// ---------------------------------------------------------------------------
// Attention beam

TEST_CASE("attention beam with a huge beam matches the enumeration oracle") {
  SeededRng rng(71);
  for (int i = 0; i < 10; ++i) {
    const int V = 1 + rng.uniform_int(2);
    const RealMatrix table = random_matrix(4, V + 2, rng);
    const TableAttnScorer scorer(table);
    DecodeConfig cfg;
    cfg.beam_width = 1024;
    cfg.max_output_len = 3;
    const auto beam = attention_beam(scorer, cfg);
    REQUIRE(!beam.empty());
    const auto oracle = exhaustive_search(
        [&](const LabelSeq& y) { return attn_sequence_score(table, y); }, V, 3);
    CHECK(beam.front().tokens == oracle.best);
    CHECK(beam.front().log_p_model == doctest::Approx(oracle.score).epsilon(1e-9));
  }
}

TEST_CASE("attention beam: immediate eos") {
  RealMatrix table(1, 4, 0.0);
  table(0, 3) = 80.0;
  const TableAttnScorer scorer(table);
  DecodeConfig cfg;
  cfg.beam_width = 8;
  const auto beam = attention_beam(scorer, cfg);
  REQUIRE(!beam.empty());
  CHECK(beam.front().tokens.empty());
  CHECK(!beam.front().alive);
}

TEST_CASE("attention beam: looping scorer returns the loop flagged truncated") {
  RealMatrix table(1, 4, 0.0);
  table(0, 0) = 40.0;  // symbol loop; eos stays deep below the beam
  table(0, 3) = -200.0;
  const TableAttnScorer scorer(table);
  DecodeConfig cfg;
  cfg.beam_width = 2;
  cfg.max_output_len = 5;
  const auto beam = attention_beam(scorer, cfg);
  REQUIRE(!beam.empty());
  // Nothing completes competitively; the cap forces the loop to finish and
  // the result carries the truncation flag.
  CHECK(beam.front().truncated);
  CHECK(beam.front().tokens == LabelSeq{0, 0, 0, 0, 0});
}

// A scorer whose eos probability is exactly zero: the only way a beam can
// end with no completed hypothesis at all.
class NoEosScorer : public StepScorer {
 public:
  int num_classes() const override { return 4; }
  ScorerState start() const override { return state(); }
  ScorerState step(const ScorerState&, int) const override { return state(); }

 private:
  static ScorerState state() {
    ScorerState s;
    s.log_probs = {std::log(0.5), std::log(0.5), kLogZero, kLogZero};  // sos, eos impossible
    s.impl = std::make_shared<int>(0);
    return s;
  }
};

TEST_CASE("attention beam: zero eos mass yields alive hypotheses") {
  const NoEosScorer scorer;
  DecodeConfig cfg;
  cfg.beam_width = 2;
  cfg.max_output_len = 4;
  const auto beam = attention_beam(scorer, cfg);
  REQUIRE(!beam.empty());
  CHECK(beam.front().alive);
  CHECK(beam.front().truncated);
  CHECK(beam.front().tokens.size() == 4);
}

TEST_CASE("length normalization favors the longer of two equal hypotheses") {
  Hypothesis shorter, longer;
  shorter.tokens = {0, 1};
  longer.tokens = {0, 1, 0, 1};
  shorter.log_p_model = -10.0;
  longer.log_p_model = -10.0;
  DecodeConfig cfg;
  cfg.gamma = 1.0;
  CHECK(longer.total_score(cfg) > shorter.total_score(cfg));
  cfg.gamma = 0.0;
  CHECK(longer.total_score(cfg) == shorter.total_score(cfg));
}

// ---------------------------------------------------------------------------
// Coverage

TEST_CASE("coverage: identity attention saturates every column") {
  RealMatrix rows(3, 3, 0.0);
  for (int i = 0; i < 3; ++i) rows(i, i) = 1.0;
  CHECK(coverage_score(rows) == doctest::Approx(0.0));
}

TEST_CASE("coverage: attending one step only floors the other columns") {
  RealMatrix rows(4, 4, 0.0);
  for (int u = 0; u < 4; ++u) rows(u, 0) = 1.0;
  CHECK(coverage_score(rows) == doctest::Approx(3.0 * std::log(1e-10)).epsilon(1e-9));
}

TEST_CASE("coverage: uniform 2x2 saturates") {
  RealMatrix rows(2, 2, 0.5);
  CHECK(coverage_score(rows) == doctest::Approx(0.0));
}

TEST_CASE("coverage: moving mass from an unsaturated to a saturated column never helps") {
  SeededRng rng(73);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> mass = {rng.uniform(0.0, 0.9), rng.uniform(1.0, 2.0),
                                rng.uniform(0.0, 2.0)};
    const double base = coverage_score(std::span<const double>(mass));
    const double delta = std::min(mass[0], rng.uniform(0.0, 0.5));
    mass[0] -= delta;  // unsaturated loses
    mass[1] += delta;  // saturated gains
    CHECK(coverage_score(std::span<const double>(mass)) <= base + 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Rescoring

TEST_CASE("rescoring with zero weight is a no-op on the order") {
  SeededRng rng(79);
  const Alphabet alphabet("ab");
  const NGramLM lm = NGramLM::train({"ab", "ba"}, 2, 0.5);
  std::vector<Hypothesis> beam(4);
  for (size_t i = 0; i < beam.size(); ++i) {
    beam[i].tokens = LabelSeq(i, static_cast<int>(i) % 2);
    beam[i].log_p_model = -static_cast<double>(i);
  }
  DecodeConfig cfg;
  cfg.lambda_lm = 0.0;
  const auto rescored = rescore_with_lm(beam, alphabet, lm, cfg);
  for (size_t i = 0; i < beam.size(); ++i) CHECK(rescored[i].tokens == beam[i].tokens);
}

TEST_CASE("a huge rescoring weight imposes the pure LM order") {
  const Alphabet alphabet("ab");
  const NGramLM lm = NGramLM::train({"aa", "aa", "ab"}, 2, 0.5);
  std::vector<Hypothesis> beam(2);
  beam[0].tokens = {0, 1};  // "ab", slightly better model score
  beam[0].log_p_model = -1.0;
  beam[1].tokens = {0, 0};  // "aa", much better LM score
  beam[1].log_p_model = -1.5;
  DecodeConfig cfg;
  cfg.lambda_lm = 1e6;
  const auto rescored = rescore_with_lm(beam, alphabet, lm, cfg);
  CHECK(rescored.front().tokens == LabelSeq{0, 0});
}

TEST_CASE("rescoring promotes the in-domain transcript over the sound-alike") {
  const Alphabet alphabet("abcdeghiklnopsty ");
  const std::string truth = "play the black eyed peas songs";
  const std::string soundalike = "play the black eye piece songs";
  std::vector<std::string> corpus = {truth, truth, "play the songs", "the black eyed peas"};
  const NGramLM lm = NGramLM::train(corpus, 4, 0.05);

  std::vector<Hypothesis> beam(2);
  beam[0].tokens = alphabet.encode(soundalike);
  beam[0].log_p_model = -10.00;  // marginally ahead on the model score
  beam[1].tokens = alphabet.encode(truth);
  beam[1].log_p_model = -10.05;
  DecodeConfig cfg;
  cfg.lambda_lm = 0.4;
  const auto rescored = rescore_with_lm(beam, alphabet, lm, cfg);
  CHECK(alphabet.decode(rescored.front().tokens) == truth);
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

TEST_CASE("exhaustive search enumerates exactly the sequences up to max_len") {
  int evaluations = 0;
  const auto score_fn = [&](const LabelSeq& y) {
    ++evaluations;
    return -static_cast<double>(y.size());
  };
  const auto result = exhaustive_search(score_fn, 1, 2);
  CHECK(evaluations == 3);  // "", "a", "aa"
  CHECK(result.best.empty());
  CHECK(result.score == 0.0);
}

TEST_CASE("exhaustive search enforces its size guard") {
  const auto score_fn = [](const LabelSeq&) { return 0.0; };
  CHECK_THROWS_AS(exhaustive_search(score_fn, 30, 8), ValidationError);
}

TEST_CASE("exhaustive search cross-checks the ctc beam on tiny instances") {
  SeededRng rng(83);
  const Alphabet alphabet("ab");
  for (int i = 0; i < 30; ++i) {
    const RealMatrix logits = random_matrix(1 + rng.uniform_int(3), 3, rng);
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
        2, logits.rows());
    CHECK(beam.front().tokens == oracle.best);
  }
}

}  // TEST_SUITE
