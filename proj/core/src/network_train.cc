// core/src/network_train.cc

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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stt/error.h"
#include "stt/network.h"

namespace stt {

std::vector<EpochStats> train(const ModelSpec& spec, Parameters& params,
                              const std::vector<TrainUtterance>& data, const TrainConfig& cfg) {
  STT_CHECK(!data.empty(), "train: empty dataset");
  STT_CHECK(cfg.lr >= 0.0, "train: negative learning rate");
  STT_CHECK(cfg.batch >= 1, "train: batch must be >= 1");
  STT_CHECK(cfg.epochs >= 0, "train: epochs must be >= 0");
  spec.validate();

  SeededRng base_rng(cfg.seed);
  const size_t num_params = params.layout->total_size();
  std::vector<EpochStats> curve;
  double lr = cfg.lr;

  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fixed seeded shuffle per epoch.
    SeededRng shuffle_rng = base_rng.child(static_cast<uint64_t>(epoch));
    std::iota(order.begin(), order.end(), 0);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
      std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);
    }

    SeededRng noise_rng = base_rng.child(1000003ULL + static_cast<uint64_t>(epoch));

    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = lr;
    double loss_sum = 0.0;
    int64_t step_sum = 0;
    int counted = 0;

    for (size_t begin = 0; begin < order.size(); begin += cfg.batch) {
      const size_t end = std::min(order.size(), begin + cfg.batch);
      // Accumulate in utterance-id order for bit-reproducible sums.
      std::vector<int> batch(order.begin() + begin, order.begin() + end);
      std::sort(batch.begin(), batch.end(),
                [&data](int a, int b) { return data[a].id < data[b].id; });

      // Optional weight noise: gradients are taken at the perturbed point,
      // the update applies to the clean weights.
      Parameters noisy{params.layout, {}};
      const Parameters* eval_params = &params;
      if (cfg.weight_noise_sigma > 0.0) {
        noisy.flat = params.flat;
        for (double& v : noisy.flat) v += cfg.weight_noise_sigma * noise_rng.normal();
        eval_params = &noisy;
      }

      std::vector<double> grad_sum(num_params, 0.0);
      int batch_count = 0;
      for (int idx : batch) {
        const TrainUtterance& utt = data[idx];
        ModelLoss res;
        try {
          res = model_loss(spec, *eval_params, utt.frames, utt.labels, utt.id);
        } catch (const NoAlignmentError&) {
          ++stats.skipped;
          continue;
        }
        if (!std::isfinite(res.loss)) {
          throw NumericError(msg_cat("train: non-finite loss on utterance ", utt.id));
        }
        loss_sum += res.loss;
        step_sum += std::max(1, res.num_target_steps);
        ++counted;
        ++batch_count;
        for (size_t i = 0; i < num_params; ++i) grad_sum[i] += res.param_grad[i];
      }
      if (batch_count == 0) continue;

      const double scale = 1.0 / batch_count;
      double norm_sq = 0.0;
      for (size_t i = 0; i < num_params; ++i) {
        grad_sum[i] *= scale;
        norm_sq += grad_sum[i] * grad_sum[i];
      }
      const double norm = std::sqrt(norm_sq);
      double step_scale = lr;
      if (std::isfinite(cfg.clip_norm) && norm > cfg.clip_norm && norm > 0.0) {
        step_scale *= cfg.clip_norm / norm;
      }
      for (size_t i = 0; i < num_params; ++i) params.flat[i] -= step_scale * grad_sum[i];
    }

    stats.mean_loss = counted > 0 ? loss_sum / counted : 0.0;
    stats.mean_loss_per_symbol = step_sum > 0 ? loss_sum / static_cast<double>(step_sum) : 0.0;
    curve.push_back(stats);
    lr *= cfg.anneal;
  }
  return curve;
}

}  // namespace stt
