#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "gaitid/autodiff/adam.hpp"
#include "gaitid/metricnet/dataset.hpp"
#include "gaitid/metricnet/encoder.hpp"
#include "gaitid/metricnet/triplet.hpp"

namespace gaitid::metricnet {

struct TrainConfig {
  InputMode mode = InputMode::concat;
  EncoderConfig encoder;  // in_channels is derived from mode
  TripletConfig triplet;
  autodiff::AdamParams adam;
  int epochs = 50;
  int batches_per_epoch = 0;  // 0: ceil(n_train / (P*K))
  Exec exec = Exec::parallel;

  void validate() const;
};

struct EpochLoss {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;  // NaN without a usable validation set
};

struct TrainResult {
  Encoder<float> encoder;
  std::vector<EpochLoss> history;
};

// Batch-hard triplet training on balanced P x K batches. P and K shrink to
// what the data supports (P to the class count, K to the smallest class).
TrainResult train(const SliceSet& train_set, const SliceSet* val_set, const TrainConfig& cfg, std::uint64_t seed,
                  const std::function<void(const EpochLoss&)>& on_epoch = {});

// Mean batch-hard loss over balanced batches drawn with a fixed seed; NaN when
// the set cannot form a batch.
double validation_loss(Encoder<float>& enc, const SliceSet& set, const TrainConfig& cfg, std::uint64_t seed);

Tensor<float> embed(Encoder<float>& enc, const SliceSet& set, InputMode mode, Exec exec = Exec::parallel);

// Checkpoint directory: architecture.json, params/<name>.rten, history.csv.
void save_checkpoint(const std::filesystem::path& dir, const Encoder<float>& enc, const TrainConfig& cfg,
                     const std::vector<EpochLoss>& history);

struct Checkpoint {
  Encoder<float> encoder;
  TrainConfig config;
  std::vector<EpochLoss> history;
};
Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace gaitid::metricnet
