#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "chordlab/hip.hpp"
#include "chordlab/standardize.hpp"

namespace chordlab {

struct AdamParams {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamParams&) const = default;
};

struct MlpConfig {
  std::vector<int> layer_sizes = {2880, 1024, 512, 256, 19};
  int batch_size = 512;
  int patience_epochs = 20;
  int max_epochs = 100;
  uint64_t seed = 1;
  AdamParams adam;

  bool operator==(const MlpConfig&) const = default;
};

struct EpochStats {
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

/// Feed-forward rectifier network whose 19 output units are normalized by
/// a softmax per profile segment (13/3/3), so every prediction is a valid
/// per-segment distribution by construction.
struct MlpModel {
  MlpConfig config;
  StandardizerStats stats;
  std::vector<Eigen::MatrixXd> weights;  // weights[l]: sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> biases;
  std::vector<EpochStats> history;

  /// Forward pass on already-standardized feature columns.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& features) const;

  /// Convenience single-vector path: standardizes, then runs forward.
  Ship predict(const std::vector<double>& raw_features) const;
};

/// He-scaled seeded initialization, zero biases.
MlpModel init_model(const MlpConfig& config);

/// Sum over the three segments of cross-entropy against the target,
/// averaged over columns.
double mean_loss(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

/// Exact gradients of the mean batch loss via backpropagation. Optionally
/// reports the batch loss and predictions computed on the way.
Gradients gradients(const MlpModel& model, const Eigen::MatrixXd& features,
                    const Eigen::MatrixXd& targets, double* loss_out = nullptr);

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_biases, v_biases;
  long step = 0;

  static AdamState zeros_like(const MlpModel& model);
};

/// One bias-corrected Adam update; increments state.step.
void adam_step(MlpModel& model, AdamState& state, const Gradients& grads,
               const AdamParams& params);

/// Mean over frames of per-segment argmax agreement (each of the three
/// segments contributes 1/3; ties break to the lowest index).
double validation_accuracy(const MlpModel& model, const Eigen::MatrixXd& features,
                           const Eigen::MatrixXd& targets);

struct Dataset {
  Eigen::MatrixXd features;  // standardized, one column per frame
  Eigen::MatrixXd targets;   // 19 x frames
};

/// Mini-batch training with seeded shuffling, early stopping on validation
/// accuracy (patience window, >1e-6 improvement threshold) and best-epoch
/// parameter restoration. Throws TrainingError on divergence.
MlpModel train(const Dataset& train_set, const Dataset& val_set, const MlpConfig& config,
               const StandardizerStats& stats);

/// Binary model file, bitwise round-trip stable.
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace chordlab
