#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "chordlab/annotations.hpp"
#include "chordlab/corpus.hpp"
#include "chordlab/wav.hpp"

namespace chordlab {

/// A simulated annotator: a deterministic relabeling of the ground truth.
struct AnnotatorProfile {
  std::string id;
  std::function<ChordLabel(const ChordLabel&)> relabel;
};

/// Profile factories.
AnnotatorProfile identity_profile(std::string id);
/// Drops sevenths: maj7/7 -> maj, min7 -> min, hdim7/dim7 -> dim, ...
AnnotatorProfile triad_reducer_profile(std::string id);
/// Adds sevenths: maj -> maj7, min -> min7; existing sevenths kept.
AnnotatorProfile seventh_enthusiast_profile(std::string id);
/// Hears only major and minor triads (by third class; sus becomes maj).
AnnotatorProfile majmin_profile(std::string id);
/// Wraps a profile so the two qualities trade places at one root,
/// modeling a systematic preference inversion at that root.
AnnotatorProfile with_quality_swap(AnnotatorProfile base, int root, Quality a, Quality b);

struct PoolEntry {
  ChordLabel label;
  double weight = 1.0;
};

struct SynthSpec {
  uint64_t seed = 42;
  int n_songs = 20;
  double song_seconds = 60.0;
  uint32_t sample_rate = 22050;
  double min_segment_seconds = 2.0;
  double max_segment_seconds = 5.0;
  std::vector<PoolEntry> pool;
  std::vector<AnnotatorProfile> profiles;
};

/// The stock desk-scale corpus: 20 songs x 60 s, a pool with one
/// contested root (G carries both maj and maj7), and five profiles where
/// the four non-identity annotators invert the G preference.
SynthSpec default_synth_spec(uint64_t seed = 42);

/// Deterministic sinusoid-mixture rendering of a seeded chord sequence.
/// Pitch classes are placed in octaves 3-5 with one octave of harmonics at
/// -6 dB, peak-normalized to 0.5 with 5 ms edge ramps; no-chord is silence.
std::pair<AudioBuffer, AnnotationTrack> render_song(const SynthSpec& spec, int song_index);

/// Apply the profile's relabeling segment-wise; timing unchanged.
AnnotationTrack annotate(const AnnotationTrack& truth, const AnnotatorProfile& profile);

/// Write WAVs, per-annotator LABs and a manifest under out_dir; returns
/// the manifest path. Idempotent for a fixed spec.
std::filesystem::path write_synth_corpus(const SynthSpec& spec,
                                         const std::filesystem::path& out_dir);

}  // namespace chordlab
