// benchmarks/bench_losses.cc

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

#include "stt/losses.h"
#include "stt/rng.h"

namespace {

using namespace stt;

RealMatrix random_logits(int rows, int cols, uint64_t seed) {
  SeededRng rng(seed);
  RealMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-2.0, 2.0);
  return m;
}

void BM_CtcLoss(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  const int vocab = 28;
  const RealMatrix logits = random_logits(frames, vocab + 1, 1);
  SeededRng rng(2);
  LabelSeq labels(frames / 4);
  for (int& id : labels) id = rng.uniform_int(vocab);
  for (auto _ : state) {
    auto res = ctc_loss(logits, labels);
    benchmark::DoNotOptimize(res.loss);
  }
  state.SetComplexityN(frames);
}
BENCHMARK(BM_CtcLoss)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_RnntLoss(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  const int vocab = 28;
  const int targets = frames / 4;
  SeededRng rng(3);
  JointLogits joint(frames, targets + 1, vocab + 1);
  for (double& v : joint.data()) v = rng.uniform(-2.0, 2.0);
  LabelSeq labels(targets);
  for (int& id : labels) id = rng.uniform_int(vocab);
  for (auto _ : state) {
    auto res = rnnt_loss(joint, labels);
    benchmark::DoNotOptimize(res.loss);
  }
  state.SetComplexityN(frames);
}
BENCHMARK(BM_RnntLoss)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_CtcViterbi(benchmark::State& state) {
  const int frames = static_cast<int>(state.range(0));
  const RealMatrix logits = random_logits(frames, 29, 4);
  SeededRng rng(5);
  LabelSeq labels(frames / 4);
  for (int& id : labels) id = rng.uniform_int(28);
  for (auto _ : state) {
    auto path = ctc_best_alignment(logits, labels);
    benchmark::DoNotOptimize(path.log_prob);
  }
}
BENCHMARK(BM_CtcViterbi)->RangeMultiplier(2)->Range(16, 256);

}  // namespace
