// core/include/stt/dataset.h

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

#ifndef STT_DATASET_H_
#define STT_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "stt/matrix.h"
#include "stt/rng.h"

namespace stt {

// Synthetic data: every symbol owns a fixed random prototype vector and is
// rendered as a run of noisy copies. A one-frame silence always separates
// repeated symbols (so a noiseless nearest-prototype decode recovers the
// text exactly), and extra silence is inserted at random. Train/dev text
// comes from one order-2 Markov chain, test text and the LM corpus from
// another: the train/test mismatch knob.
struct SyntheticSpec {
  std::string symbols = "abcdef ";
  int feature_dim = 16;
  int dmin = 2;  // frames per symbol, inclusive range
  int dmax = 4;
  double noise_sigma = 0.3;
  double silence_prob = 0.1;        // chance of a silence gap between symbols
  double noise_utt_fraction = 0.0;  // utterances that are pure noise ("")
  int min_symbols = 4;              // reference length range
  int max_symbols = 12;
  uint64_t text_seed_train = 101;
  uint64_t text_seed_test = 202;
  double text_divergence = 0.5;  // 0: test text = train text, 1: independent chains
  int train_count = 64;
  int dev_count = 16;
  int test_count = 32;
  int corpus_lines = 400;  // LM corpus size (test-side distribution)
  uint64_t seed = 7;

  void validate() const;
  std::string to_json() const;
  static SyntheticSpec from_json(const std::string& text);
};

struct Utterance {
  std::string id;
  RealMatrix frames;      // T x F
  std::string reference;  // may be empty (pure noise)
};

// Order-2 character Markov chain with seeded random transition tables.
// Spaces never start a line, repeat, or end one. The test-side chain blends
// the base tables with an independent set: transition weights are
// (1 - divergence) * base + divergence * alt.
class MarkovTextSource {
 public:
  MarkovTextSource(const std::string& symbols, uint64_t seed)
      : MarkovTextSource(symbols, seed, seed, 0.0) {}
  MarkovTextSource(const std::string& symbols, uint64_t base_seed, uint64_t alt_seed,
                   double divergence);
  std::string sample(SeededRng& rng, int length) const;

 private:
  std::string symbols_;
  std::vector<std::vector<double>> cumulative_;  // context id -> cdf over symbols
  int context_id(int prev2, int prev1) const;
};

// Writes train.dat / dev.dat / test.dat, corpus.txt (LM text, test
// distribution) and meta.json under out_dir. Deterministic per spec: the
// same spec yields byte-identical files.
void generate_dataset(const SyntheticSpec& spec, const std::string& out_dir);

// One record per line: id, T, F and reference in a tab-separated header,
// frames as base-64 little-endian f32.
void save_dataset(const std::string& path, const std::vector<Utterance>& utts);
std::vector<Utterance> load_dataset(const std::string& path);

std::vector<std::string> load_text_lines(const std::string& path);
void save_text_lines(const std::string& path, const std::vector<std::string>& lines);

// Nearest-prototype frame decode (prototypes + zero silence vector, runs
// collapsed, silence dropped): the separability anchor for the generator.
std::string nearest_prototype_decode(const SyntheticSpec& spec, const RealMatrix& frames);

}  // namespace stt

#endif  // STT_DATASET_H_
