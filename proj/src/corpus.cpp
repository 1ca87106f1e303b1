#include "chordlab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "chordlab/errors.hpp"

namespace chordlab {

size_t Corpus::total_frames() const {
  size_t n = 0;
  for (const auto& song : songs) n += song.cqt.num_frames;
  return n;
}

Corpus build_corpus(const std::vector<std::vector<AnnotationTrack>>& tracks_by_song,
                    std::vector<std::string> song_ids, std::vector<CqtMatrix> cqts) {
  if (tracks_by_song.empty() || tracks_by_song.size() != song_ids.size() ||
      song_ids.size() != cqts.size())
    throw ConfigError("build_corpus: song/track/cqt counts do not match");

  // The annotator set is taken from the first song; every song must match.
  std::vector<std::string> annotators;
  for (const auto& track : tracks_by_song.front()) annotators.push_back(track.annotator_id);
  std::sort(annotators.begin(), annotators.end());
  if (annotators.empty()) throw ConfigError("build_corpus: no annotators");

  Corpus corpus;
  corpus.annotator_ids = annotators;
  for (size_t s = 0; s < song_ids.size(); ++s) {
    SongData song;
    song.song_id = song_ids[s];
    song.cqt = std::move(cqts[s]);

    std::map<std::string, const AnnotationTrack*> by_id;
    for (const auto& track : tracks_by_song[s]) by_id[track.annotator_id] = &track;
    for (const auto& id : annotators)
      if (!by_id.count(id))
        throw ConfigError("build_corpus: song " + song.song_id + " missing annotator " + id);
    if (by_id.size() != annotators.size())
      throw ConfigError("build_corpus: song " + song.song_id + " has extra annotators");

    const size_t frames = song.cqt.num_frames;
    song.labels.assign(annotators.size(), std::vector<ChordLabel>(frames));
    song.targets.resize(frames);
    std::vector<ChordLabel> frame_labels(annotators.size());
    for (size_t n = 0; n < frames; ++n) {
      for (size_t a = 0; a < annotators.size(); ++a) {
        frame_labels[a] = label_at(*by_id[annotators[a]], song.cqt.frame_times[n]);
        song.labels[a][n] = frame_labels[a];
      }
      song.targets[n] = encode_ship(frame_labels);
    }
    corpus.songs.push_back(std::move(song));
  }
  return corpus;
}

std::array<size_t, 3> split_sizes(size_t n_frames, const std::array<double, 3>& ratios) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (!(ratios[0] > 0 && ratios[1] > 0 && ratios[2] > 0) || std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("split ratios must be positive and sum to 1");
  const auto n_train = static_cast<size_t>(std::llround(ratios[0] * static_cast<double>(n_frames)));
  const auto n_val = static_cast<size_t>(std::llround(ratios[1] * static_cast<double>(n_frames)));
  if (n_train + n_val > n_frames) throw ConfigError("split ratios leave no test frames");
  return {n_train, n_val, n_frames - n_train - n_val};
}

void split_corpus(Corpus& corpus, const std::array<double, 3>& ratios, uint64_t seed) {
  const size_t n = corpus.total_frames();
  const auto sizes = split_sizes(n, ratios);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  corpus.split.assign(n, Split::test);
  for (size_t i = 0; i < sizes[0]; ++i) corpus.split[order[i]] = Split::train;
  for (size_t i = sizes[0]; i < sizes[0] + sizes[1]; ++i) corpus.split[order[i]] = Split::val;
}

Vocabulary vocabulary_from_split(const Corpus& corpus, size_t annotator, Split split) {
  if (corpus.split.size() != corpus.total_frames())
    throw ConfigError("vocabulary_from_split: corpus has no split assignment");
  std::vector<ChordLabel> labels;
  size_t global = 0;
  for (const auto& song : corpus.songs)
    for (size_t n = 0; n < song.cqt.num_frames; ++n, ++global)
      if (corpus.split[global] == split) labels.push_back(song.labels[annotator][n]);
  return Vocabulary::from_labels(std::move(labels));
}

std::vector<std::string> Manifest::annotator_ids() const {
  std::set<std::string> ids;
  for (const auto& song : songs)
    for (const auto& [id, path] : song.labs) ids.insert(id);
  return {ids.begin(), ids.end()};
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("manifest: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest: " + std::string(e.what()));
  }
  Manifest m;
  const auto base = path.parent_path();
  try {
    m.seed = j.at("seed").get<uint64_t>();
    const auto& r = j.at("ratios");
    m.ratios = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
    for (const auto& js : j.at("songs")) {
      Manifest::Song song;
      song.id = js.at("id").get<std::string>();
      song.audio = base / js.at("audio").get<std::string>();
      for (const auto& [annot, lab] : js.at("labs").items())
        song.labs[annot] = base / lab.get<std::string>();
      m.songs.push_back(std::move(song));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest: " + std::string(e.what()));
  }
  if (m.songs.empty()) throw ParseError("manifest: no songs");
  return m;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  nlohmann::json j;
  j["seed"] = manifest.seed;
  j["ratios"] = manifest.ratios;
  j["songs"] = nlohmann::json::array();
  const auto base = path.parent_path();
  for (const auto& song : manifest.songs) {
    nlohmann::json js;
    js["id"] = song.id;
    js["audio"] = std::filesystem::proximate(song.audio, base).generic_string();
    for (const auto& [annot, lab] : song.labs)
      js["labs"][annot] = std::filesystem::proximate(lab, base).generic_string();
    j["songs"].push_back(std::move(js));
  }
  std::ofstream out(path);
  if (!out) throw IoError("manifest: cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace chordlab
