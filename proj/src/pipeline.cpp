#include "chordlab/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chordlab/decoder.hpp"
#include "chordlab/errors.hpp"

namespace chordlab {
namespace {

namespace fs = std::filesystem;

uint64_t fnv1a64(const void* data, size_t n, uint64_t hash = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    hash ^= p[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

uint64_t content_key(const AudioBuffer& audio, const CqtConfig& config) {
  uint64_t h = fnv1a64(audio.samples.data(), audio.samples.size() * sizeof(double));
  h = fnv1a64(&audio.sample_rate, sizeof audio.sample_rate, h);
  h = fnv1a64(&config.hop, sizeof config.hop, h);
  h = fnv1a64(&config.f_min, sizeof config.f_min, h);
  h = fnv1a64(&config.n_bins, sizeof config.n_bins, h);
  h = fnv1a64(&config.bins_per_octave, sizeof config.bins_per_octave, h);
  return h;
}

CqtMatrix cached_cqt(const AudioBuffer& audio, const CqtConfig& config,
                     const fs::path& cache_dir, const std::string& song_id) {
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  std::ostringstream name;
  name << song_id << '_' << std::hex << std::setw(16) << std::setfill('0')
       << content_key(audio, config) << ".cqtf";
  const fs::path cache_path = cache_dir / name.str();

  CqtMatrix matrix;
  if (read_cqt_cache(cache_path, audio.sample_rate, config, matrix)) return matrix;
  matrix = compute_cqt(audio, config);
  write_cqt_cache(cache_path, audio.sample_rate, config, matrix);
  return matrix;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Per-song list of global indices that fall in `split`, in frame order.
std::vector<std::vector<size_t>> split_frames_by_song(const Corpus& corpus, Split split) {
  std::vector<std::vector<size_t>> result(corpus.songs.size());
  size_t global = 0;
  for (size_t s = 0; s < corpus.songs.size(); ++s)
    for (size_t n = 0; n < corpus.songs[s].cqt.num_frames; ++n, ++global)
      if (corpus.split[global] == split) result[s].push_back(n);
  return result;
}

size_t annotator_index(const Corpus& corpus, const std::string& id) {
  const auto it =
      std::find(corpus.annotator_ids.begin(), corpus.annotator_ids.end(), id);
  if (it == corpus.annotator_ids.end())
    throw ConfigError("unknown annotator '" + id + "'");
  return static_cast<size_t>(it - corpus.annotator_ids.begin());
}

MlpConfig make_config(const TrainOptions& options, uint64_t default_seed) {
  MlpConfig config;
  config.batch_size = options.batch_size;
  config.patience_epochs = options.patience_epochs;
  config.max_epochs = options.max_epochs;
  config.seed = options.seed.value_or(default_seed);
  return config;
}

void write_history(const MlpModel& model, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "epoch\ttrain_loss\tval_accuracy\n" << std::setprecision(10);
  for (size_t e = 0; e < model.history.size(); ++e)
    out << e + 1 << '\t' << model.history[e].train_loss << '\t'
        << model.history[e].val_accuracy << '\n';
}

// Raw (unstandardized) context-window features and targets for a split.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> raw_split_data(const Corpus& corpus, Split split) {
  size_t count = 0;
  for (Split s : corpus.split) count += s == split;
  const Eigen::Index dims = static_cast<Eigen::Index>(kContextFrames) *
                            (corpus.songs.empty() ? 192 : corpus.songs.front().cqt.n_bins);
  Eigen::MatrixXd features(dims, static_cast<Eigen::Index>(count));
  Eigen::MatrixXd targets(kHipSize, static_cast<Eigen::Index>(count));

  Eigen::Index col = 0;
  size_t global = 0;
  for (const auto& song : corpus.songs) {
    for (size_t n = 0; n < song.cqt.num_frames; ++n, ++global) {
      if (corpus.split[global] != split) continue;
      const auto window = context_window(song.cqt, n);
      features.col(col) =
          Eigen::Map<const Eigen::VectorXd>(window.data(), static_cast<Eigen::Index>(window.size()));
      for (int i = 0; i < kHipSize; ++i)
        targets(i, col) = song.targets[n][static_cast<size_t>(i)];
      ++col;
    }
  }
  return {std::move(features), std::move(targets)};
}

// Train on targets taken from `target_of_frame` (multi- or single-source).
MlpModel train_on_corpus(const Corpus& corpus, const MlpConfig& base_config,
                         const std::optional<size_t>& single_annotator) {
  auto [x_train, y_train] = raw_split_data(corpus, Split::train);
  auto [x_val, y_val] = raw_split_data(corpus, Split::val);
  if (x_train.cols() == 0 || x_val.cols() == 0)
    throw TrainingError("train: empty train or validation split");

  if (single_annotator) {
    // Replace averaged targets with the one annotator's one-hot profiles.
    size_t global = 0;
    Eigen::Index train_col = 0, val_col = 0;
    for (const auto& song : corpus.songs)
      for (size_t n = 0; n < song.cqt.num_frames; ++n, ++global) {
        const Split s = corpus.split[global];
        if (s != Split::train && s != Split::val) continue;
        const Hip hip = encode_hip(song.labels[*single_annotator][n]);
        auto& target = s == Split::train ? y_train : y_val;
        const Eigen::Index c = s == Split::train ? train_col++ : val_col++;
        for (int i = 0; i < kHipSize; ++i) target(i, c) = hip[static_cast<size_t>(i)];
      }
  }

  MlpConfig config = base_config;
  config.layer_sizes.front() = static_cast<int>(x_train.rows());

  const StandardizerStats stats = fit_standardizer(x_train);
  apply_standardizer_in_place(stats, x_train);
  apply_standardizer_in_place(stats, x_val);

  return train({std::move(x_train), std::move(y_train)},
               {std::move(x_val), std::move(y_val)}, config, stats);
}

// Decode the prediction columns into each annotator's vocabulary.
std::vector<ChordLabel> decode_columns(const Eigen::MatrixXd& predictions,
                                       const Vocabulary& vocabulary) {
  std::vector<ChordLabel> out(static_cast<size_t>(predictions.cols()));
  for (Eigen::Index c = 0; c < predictions.cols(); ++c) {
    Ship ship{};
    for (int i = 0; i < kHipSize; ++i) ship[static_cast<size_t>(i)] = predictions(i, c);
    out[static_cast<size_t>(c)] = decode(ship, vocabulary).chosen();
  }
  return out;
}

std::vector<ChordLabel> reference_labels(const Corpus& corpus, size_t annotator, Split split) {
  std::vector<ChordLabel> out;
  size_t global = 0;
  for (const auto& song : corpus.songs)
    for (size_t n = 0; n < song.cqt.num_frames; ++n, ++global)
      if (corpus.split[global] == split) out.push_back(song.labels[annotator][n]);
  return out;
}

void write_personalized_labs(const Corpus& corpus, const Eigen::MatrixXd& predictions,
                             const Vocabulary& vocabulary, const std::string& annotator,
                             const fs::path& out_dir) {
  const auto by_song = split_frames_by_song(corpus, Split::test);
  std::error_code ec;
  fs::create_directories(out_dir / annotator, ec);
  size_t cursor = 0;
  for (size_t s = 0; s < corpus.songs.size(); ++s) {
    std::vector<Ship> ships;
    std::vector<double> times;
    for (size_t n : by_song[s]) {
      Ship ship{};
      for (int i = 0; i < kHipSize; ++i)
        ship[static_cast<size_t>(i)] = predictions(i, static_cast<Eigen::Index>(cursor));
      ships.push_back(ship);
      times.push_back(corpus.songs[s].cqt.frame_times[n]);
      ++cursor;
    }
    AnnotationTrack track;
    track.annotator_id = annotator;
    track.song_id = corpus.songs[s].song_id;
    track.segments = personalize_sequence(ships, vocabulary, times);
    const fs::path lab = out_dir / annotator / (corpus.songs[s].song_id + ".lab");
    std::ofstream out(lab);
    if (!out) throw IoError("cannot write " + lab.string());
    out << to_lab(track);
  }
}

}  // namespace

Corpus load_corpus(const Manifest& manifest, const std::vector<std::string>& annotators,
                   const std::optional<std::array<double, 3>>& ratios,
                   std::optional<uint64_t> seed,
                   const std::optional<fs::path>& cache_dir,
                   const fs::path& manifest_path) {
  const std::vector<std::string> selected =
      annotators.empty() ? manifest.annotator_ids() : annotators;
  const fs::path cache =
      cache_dir.value_or(manifest_path.parent_path() / "cqt_cache");

  const CqtConfig config;
  std::vector<std::vector<AnnotationTrack>> tracks_by_song;
  std::vector<std::string> song_ids;
  std::vector<CqtMatrix> cqts;
  for (const auto& song : manifest.songs) {
    const AudioBuffer audio = load_wav(song.audio);
    cqts.push_back(cached_cqt(audio, config, cache, song.id));
    song_ids.push_back(song.id);
    std::vector<AnnotationTrack> tracks;
    for (const auto& id : selected) {
      const auto it = song.labs.find(id);
      if (it == song.labs.end())
        throw ConfigError("manifest: song " + song.id + " has no annotator '" + id + "'");
      tracks.push_back(parse_lab(read_file(it->second), id, song.id));
    }
    tracks_by_song.push_back(std::move(tracks));
  }

  Corpus corpus = build_corpus(tracks_by_song, std::move(song_ids), std::move(cqts));
  split_corpus(corpus, ratios.value_or(manifest.ratios), seed.value_or(manifest.seed));
  return corpus;
}

Dataset dataset_for_split(const Corpus& corpus, Split split, const StandardizerStats& stats) {
  auto [features, targets] = raw_split_data(corpus, split);
  apply_standardizer_in_place(stats, features);
  return {std::move(features), std::move(targets)};
}

fs::path run_synth(const SynthOptions& options) {
  SynthSpec spec = default_synth_spec(options.seed);
  spec.n_songs = options.n_songs;
  spec.song_seconds = options.song_seconds;
  spec.sample_rate = options.sample_rate;
  return write_synth_corpus(spec, options.out_dir);
}

void run_train(const TrainOptions& options) {
  const Manifest manifest = load_manifest(options.manifest);
  Corpus corpus = load_corpus(manifest, options.annotators, options.ratios, options.seed,
                              options.cache_dir, options.manifest);
  const MlpConfig config = make_config(options, manifest.seed);
  const MlpModel model = train_on_corpus(corpus, config, std::nullopt);
  save_model(model, options.model_out);
  if (options.history_out) write_history(model, *options.history_out);
}

void run_personalize(const PersonalizeOptions& options) {
  const Manifest manifest = load_manifest(options.manifest);
  Corpus corpus = load_corpus(manifest, {options.annotator}, std::nullopt, std::nullopt,
                              options.cache_dir, options.manifest);
  const MlpModel model = load_model(options.model);
  const size_t annot = annotator_index(corpus, options.annotator);
  const Vocabulary vocabulary = vocabulary_from_split(corpus, annot, Split::train);

  Dataset test = dataset_for_split(corpus, Split::test, model.stats);
  const Eigen::MatrixXd predictions = model.forward(test.features);
  write_personalized_labs(corpus, predictions, vocabulary, options.annotator, options.out_dir);
}

EvalReport run_evaluate(const EvaluateOptions& options) {
  const Manifest manifest = load_manifest(options.manifest);
  const std::vector<std::string> selected =
      options.annotators.empty() ? manifest.annotator_ids() : options.annotators;
  Corpus corpus = load_corpus(manifest, selected, std::nullopt, std::nullopt, std::nullopt,
                              options.manifest);

  std::map<std::string, std::vector<ChordLabel>> estimates, references;
  for (const auto& id : selected) {
    const size_t annot = annotator_index(corpus, id);
    references[id] = reference_labels(corpus, annot, Split::test);

    std::vector<ChordLabel> est;
    size_t global = 0;
    for (const auto& song : corpus.songs) {
      const fs::path lab = options.estimates_dir / id / (song.song_id + ".lab");
      const AnnotationTrack track = parse_lab(read_file(lab), id, song.song_id);
      for (size_t n = 0; n < song.cqt.num_frames; ++n, ++global)
        if (corpus.split[global] == Split::test)
          est.push_back(label_at(track, song.cqt.frame_times[n]));
    }
    estimates[id] = std::move(est);
  }

  const EvalReport report = build_report(estimates, references);

  // TSV restricted to the requested metrics; JSON always carries all five.
  std::ostringstream tsv;
  tsv << "annotator";
  for (Metric m : options.metrics) tsv << '\t' << metric_name(m);
  tsv << '\n' << std::fixed << std::setprecision(4);
  for (const auto& id : report.annotators) {
    tsv << id;
    for (Metric m : options.metrics)
      tsv << '\t' << report.cells.at(id)[static_cast<size_t>(m)].accuracy();
    tsv << '\n';
  }
  std::ofstream out(options.report_out);
  if (!out) throw IoError("cannot write " + options.report_out.string());
  out << tsv.str();
  fs::path json_path = options.report_out;
  json_path.replace_extension(".json");
  std::ofstream json_out(json_path);
  json_out << report_json(report);
  return report;
}

std::string ExperimentReport::to_tsv() const {
  static constexpr const char* kArmNames[3] = {"multi", "direct", "single"};
  std::ostringstream os;
  os << "metric";
  for (const auto& id : annotators)
    for (const auto* arm : kArmNames) os << '\t' << id << ':' << arm;
  os << '\t' << baseline << ":self\n";
  os << std::fixed << std::setprecision(4);
  for (size_t m = 0; m < kAllMetrics.size(); ++m) {
    os << metric_name(kAllMetrics[m]);
    for (const auto& id : annotators)
      for (const auto& arm : cells) os << '\t' << arm.at(id)[m].accuracy();
    os << '\t' << baseline_self[m].accuracy() << '\n';
  }
  return os.str();
}

ExperimentReport run_experiment(const ExperimentOptions& options) {
  const Manifest manifest = load_manifest(options.manifest);
  Corpus corpus = load_corpus(manifest, {}, options.training.ratios, options.training.seed,
                              options.training.cache_dir, options.manifest);
  const std::string baseline = options.baseline_annotator.empty()
                                   ? corpus.annotator_ids.front()
                                   : options.baseline_annotator;
  const size_t baseline_idx = annotator_index(corpus, baseline);

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);

  const MlpConfig config = make_config(options.training, manifest.seed);
  const MlpModel multi_model = train_on_corpus(corpus, config, std::nullopt);
  const MlpModel baseline_model = train_on_corpus(corpus, config, baseline_idx);
  save_model(multi_model, options.out_dir / "ship_model.bin");
  save_model(baseline_model, options.out_dir / "baseline_model.bin");
  write_history(multi_model, options.out_dir / "ship_history.tsv");
  write_history(baseline_model, options.out_dir / "baseline_history.tsv");

  Dataset test = dataset_for_split(corpus, Split::test, multi_model.stats);
  const Eigen::MatrixXd multi_pred = multi_model.forward(test.features);
  const Eigen::MatrixXd baseline_pred = baseline_model.forward(test.features);

  ExperimentReport report;
  report.annotators = corpus.annotator_ids;
  report.baseline = baseline;

  const std::vector<ChordLabel> baseline_ref =
      reference_labels(corpus, baseline_idx, Split::test);

  for (size_t a = 0; a < corpus.annotator_ids.size(); ++a) {
    const std::string& id = corpus.annotator_ids[a];
    const Vocabulary vocabulary = vocabulary_from_split(corpus, a, Split::train);
    const std::vector<ChordLabel> reference = reference_labels(corpus, a, Split::test);

    const std::vector<ChordLabel> est_multi = decode_columns(multi_pred, vocabulary);
    const std::vector<ChordLabel> est_single = decode_columns(baseline_pred, vocabulary);

    for (size_t m = 0; m < kAllMetrics.size(); ++m) {
      report.cells[0][id][m] = count_sequence(kAllMetrics[m], est_multi, reference);
      report.cells[1][id][m] = count_sequence(kAllMetrics[m], reference, baseline_ref);
      report.cells[2][id][m] = count_sequence(kAllMetrics[m], est_single, reference);
      if (a == baseline_idx)
        report.baseline_self[m] = count_sequence(kAllMetrics[m], est_single, reference);
    }

    write_personalized_labs(corpus, multi_pred, vocabulary, id,
                            options.out_dir / "personalized");
  }

  std::ofstream out(options.out_dir / "experiment_report.tsv");
  if (!out) throw IoError("cannot write experiment report");
  out << report.to_tsv();
  return report;
}

}  // namespace chordlab
