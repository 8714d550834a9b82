// benchmarks/bench_decoders.cc

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

#include <benchmark/benchmark.h>

#include "stt/decoders.h"
#include "stt/lm.h"
#include "stt/rng.h"

namespace {

using namespace stt;

void BM_CtcGreedy(benchmark::State& state) {
  SeededRng rng(1);
  RealMatrix logits(static_cast<int>(state.range(0)), 29);
  for (double& v : logits.data()) v = rng.uniform(-2.0, 2.0);
  for (auto _ : state) {
    auto out = ctc_greedy(logits);
    benchmark::DoNotOptimize(out.size());
  }
}
BENCHMARK(BM_CtcGreedy)->RangeMultiplier(4)->Range(64, 1024);

void BM_CtcPrefixBeam(benchmark::State& state) {
  const Alphabet alphabet("abcdefgh ");
  SeededRng rng(2);
  RealMatrix logits(64, alphabet.num_lattice_classes());
  for (double& v : logits.data()) v = rng.uniform(-2.0, 2.0);
  std::vector<std::string> corpus;
  for (int i = 0; i < 50; ++i) {
    std::string line;
    for (int j = 0; j < 20; ++j) line.push_back("abcdefgh "[rng.uniform_int(9)]);
    corpus.push_back(line);
  }
  const NGramLM lm = NGramLM::train(corpus, 3, 0.1);
  DecodeConfig cfg;
  cfg.beam_width = static_cast<int>(state.range(0));
  cfg.alpha = 0.5;
  for (auto _ : state) {
    auto beam = ctc_prefix_beam(logits, alphabet, &lm, cfg);
    benchmark::DoNotOptimize(beam.front().log_p_model);
  }
}
BENCHMARK(BM_CtcPrefixBeam)->RangeMultiplier(2)->Range(4, 32);

}  // namespace
