#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chordlab/corpus.hpp"
#include "chordlab/evaluation.hpp"
#include "chordlab/mlp.hpp"
#include "chordlab/synth.hpp"

namespace chordlab {

struct SynthOptions {
  std::filesystem::path out_dir;
  uint64_t seed = 42;
  int n_songs = 20;
  double song_seconds = 60.0;
  uint32_t sample_rate = 22050;
};

struct TrainOptions {
  std::filesystem::path manifest;
  std::filesystem::path model_out;
  std::optional<std::filesystem::path> history_out;
  std::vector<std::string> annotators;  // empty = all annotators
  std::optional<uint64_t> seed;         // default: manifest seed
  std::optional<std::array<double, 3>> ratios;
  int max_epochs = 30;
  int batch_size = 512;
  int patience_epochs = 20;
  std::optional<std::filesystem::path> cache_dir;  // default: <manifest dir>/cqt_cache
};

struct PersonalizeOptions {
  std::filesystem::path manifest;
  std::filesystem::path model;
  std::filesystem::path out_dir;
  std::string annotator;
  std::optional<std::filesystem::path> cache_dir;
};

struct EvaluateOptions {
  std::filesystem::path manifest;
  std::filesystem::path estimates_dir;  // <dir>/<annotator>/<song>.lab
  std::filesystem::path report_out;     // .tsv; a .json sibling is also written
  std::vector<std::string> annotators;  // empty = all
  std::vector<Metric> metrics = {kAllMetrics.begin(), kAllMetrics.end()};
};

struct ExperimentOptions {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::string baseline_annotator;  // empty = first annotator
  TrainOptions training;           // manifest/model paths filled in per arm
};

/// Per-annotator, per-metric accuracies for the three evaluation arms:
/// the model trained on all annotators, direct agreement with the
/// baseline annotator, and the model trained on the baseline alone.
struct ExperimentReport {
  std::vector<std::string> annotators;
  std::string baseline;
  // cells[arm][annotator][metric]; arms: 0=multi, 1=direct, 2=baseline
  std::array<std::map<std::string, std::array<ScoreCount, 5>>, 3> cells;
  ScoreCount baseline_self[5];  // baseline model scored on the baseline annotator

  std::string to_tsv() const;
};

std::filesystem::path run_synth(const SynthOptions& options);
void run_train(const TrainOptions& options);
void run_personalize(const PersonalizeOptions& options);
EvalReport run_evaluate(const EvaluateOptions& options);
ExperimentReport run_experiment(const ExperimentOptions& options);

/// Shared loading path: CQT per song (disk-cached), frame-aligned corpus
/// with split assignment from the manifest (or overrides).
Corpus load_corpus(const Manifest& manifest, const std::vector<std::string>& annotators,
                   const std::optional<std::array<double, 3>>& ratios,
                   std::optional<uint64_t> seed,
                   const std::optional<std::filesystem::path>& cache_dir,
                   const std::filesystem::path& manifest_path);

/// Standardized context-window features (columns) and targets for the
/// given split.
Dataset dataset_for_split(const Corpus& corpus, Split split, const StandardizerStats& stats);

}  // namespace chordlab
