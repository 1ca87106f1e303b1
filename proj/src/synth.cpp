#include "chordlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "chordlab/errors.hpp"

namespace chordlab {
namespace {

constexpr double kPeakAmplitude = 0.5;
constexpr double kRampSeconds = 0.005;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ChordLabel drop_seventh(const ChordLabel& label) {
  if (label.is_no_chord()) return label;
  ChordLabel out = label;
  out.extensions.clear();
  switch (label.quality.value_or(Quality::maj)) {
    case Quality::maj7:
    case Quality::dom7:
      out.quality = Quality::maj;
      break;
    case Quality::min7:
    case Quality::minmaj7:
      out.quality = Quality::min;
      break;
    case Quality::hdim7:
    case Quality::dim7:
      out.quality = Quality::dim;
      break;
    default:
      break;
  }
  return out;
}

ChordLabel add_seventh(const ChordLabel& label) {
  if (label.is_no_chord()) return label;
  ChordLabel out = label;
  switch (label.quality.value_or(Quality::maj)) {
    case Quality::maj:
      out.quality = Quality::maj7;
      break;
    case Quality::min:
      out.quality = Quality::min7;
      break;
    default:
      break;
  }
  return out;
}

ChordLabel to_majmin(const ChordLabel& label) {
  if (label.is_no_chord()) return label;
  return ChordLabel::make(label.root, third_class(label) == ThirdClass::flat3
                                          ? Quality::min
                                          : Quality::maj);
}

}  // namespace

AnnotatorProfile identity_profile(std::string id) {
  return {std::move(id), [](const ChordLabel& l) { return l; }};
}

AnnotatorProfile triad_reducer_profile(std::string id) {
  return {std::move(id), drop_seventh};
}

AnnotatorProfile seventh_enthusiast_profile(std::string id) {
  return {std::move(id), add_seventh};
}

AnnotatorProfile majmin_profile(std::string id) {
  return {std::move(id), to_majmin};
}

AnnotatorProfile with_quality_swap(AnnotatorProfile base, int root, Quality a, Quality b) {
  auto inner = std::move(base.relabel);
  base.relabel = [inner, root, a, b](const ChordLabel& label) {
    if (!label.is_no_chord() && label.root == root && label.extensions.empty()) {
      if (label.quality == a) return ChordLabel::make(root, b);
      if (label.quality == b) return ChordLabel::make(root, a);
    }
    return inner(label);
  };
  return base;
}

SynthSpec default_synth_spec(uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;

  auto add = [&](const char* text, double weight) {
    spec.pool.push_back({parse_label(text), weight});
  };
  add("C:maj", 1.0);
  add("D:min7", 0.8);
  add("E:min", 1.0);
  add("F:maj7", 0.8);
  add("G:maj", 0.4);
  add("G:maj7", 0.4);
  add("A:min", 1.0);
  add("A#:7", 0.8);
  add("B:dim", 0.6);
  add("N", 0.4);

  const int kSwapRoot = 7;  // G
  spec.profiles.push_back(identity_profile("a1"));
  spec.profiles.push_back(
      with_quality_swap(identity_profile("a2"), kSwapRoot, Quality::maj, Quality::maj7));
  spec.profiles.push_back(
      with_quality_swap(triad_reducer_profile("a3"), kSwapRoot, Quality::maj, Quality::maj7));
  spec.profiles.push_back(with_quality_swap(seventh_enthusiast_profile("a4"), kSwapRoot,
                                            Quality::maj, Quality::maj7));
  spec.profiles.push_back(
      with_quality_swap(majmin_profile("a5"), kSwapRoot, Quality::maj, Quality::maj7));
  return spec;
}

std::pair<AudioBuffer, AnnotationTrack> render_song(const SynthSpec& spec, int song_index) {
  if (spec.pool.empty()) throw ConfigError("render_song: empty chord pool");
  if (spec.min_segment_seconds <= 0 || spec.max_segment_seconds < spec.min_segment_seconds)
    throw ConfigError("render_song: bad segment duration range");

  std::mt19937_64 rng(splitmix64(spec.seed) ^ splitmix64(static_cast<uint64_t>(song_index)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double total_weight = 0.0;
  for (const auto& entry : spec.pool) total_weight += entry.weight;

  const auto pick_label = [&]() -> const ChordLabel& {
    double ticket = unit(rng) * total_weight;
    for (const auto& entry : spec.pool) {
      ticket -= entry.weight;
      if (ticket <= 0.0) return entry.label;
    }
    return spec.pool.back().label;
  };

  const double sr = spec.sample_rate;
  const auto total_samples = static_cast<size_t>(std::llround(spec.song_seconds * sr));
  AudioBuffer audio;
  audio.sample_rate = spec.sample_rate;
  audio.samples.assign(total_samples, 0.0);

  AnnotationTrack truth;
  truth.annotator_id = "truth";
  truth.song_id = "song_" + std::to_string(song_index);

  const auto ramp_samples = static_cast<size_t>(std::llround(kRampSeconds * sr));
  size_t cursor = 0;
  while (cursor < total_samples) {
    const double seconds = spec.min_segment_seconds +
                           unit(rng) * (spec.max_segment_seconds - spec.min_segment_seconds);
    const size_t length =
        std::min(total_samples - cursor, static_cast<size_t>(std::llround(seconds * sr)));
    if (length == 0) break;
    const ChordLabel label = pick_label();

    const auto pcs = pitch_classes(label);
    if (!pcs.empty()) {
      std::vector<double> freqs;
      for (int octave = 3; octave <= 5; ++octave)
        for (int pc : pcs) {
          const int midi = 12 * (octave + 1) + pc;
          freqs.push_back(440.0 * std::exp2((midi - 69) / 12.0));
        }
      double peak = 0.0;
      std::vector<double> segment(length);
      for (size_t n = 0; n < length; ++n) {
        const double t = static_cast<double>(n) / sr;
        double s = 0.0;
        for (double f : freqs) {
          s += std::sin(2.0 * std::numbers::pi * f * t);
          s += 0.5 * std::sin(2.0 * std::numbers::pi * 2.0 * f * t);  // -6 dB harmonic
        }
        segment[n] = s;
        peak = std::max(peak, std::abs(s));
      }
      const double gain = peak > 0.0 ? kPeakAmplitude / peak : 0.0;
      for (size_t n = 0; n < length; ++n) {
        double ramp = 1.0;
        if (ramp_samples > 0) {
          if (n < ramp_samples) ramp = static_cast<double>(n) / ramp_samples;
          const size_t from_end = length - 1 - n;
          if (from_end < ramp_samples)
            ramp = std::min(ramp, static_cast<double>(from_end) / ramp_samples);
        }
        audio.samples[cursor + n] = gain * ramp * segment[n];
      }
    }

    truth.segments.push_back(
        {static_cast<double>(cursor) / sr, static_cast<double>(cursor + length) / sr, label});
    cursor += length;
  }
  return {std::move(audio), std::move(truth)};
}

AnnotationTrack annotate(const AnnotationTrack& truth, const AnnotatorProfile& profile) {
  AnnotationTrack out;
  out.annotator_id = profile.id;
  out.song_id = truth.song_id;
  out.segments.reserve(truth.segments.size());
  for (const auto& seg : truth.segments)
    out.segments.push_back({seg.start, seg.end, profile.relabel(seg.label)});
  return out;
}

std::filesystem::path write_synth_corpus(const SynthSpec& spec,
                                         const std::filesystem::path& out_dir) {
  if (spec.profiles.empty()) throw ConfigError("write_synth_corpus: no annotator profiles");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "audio", ec);
  for (const auto& profile : spec.profiles) fs::create_directories(out_dir / "labs" / profile.id, ec);

  Manifest manifest;
  manifest.seed = spec.seed;
  manifest.ratios = kDefaultSplitRatios;

  for (int s = 0; s < spec.n_songs; ++s) {
    auto [audio, truth] = render_song(spec, s);
    Manifest::Song entry;
    entry.id = truth.song_id;
    entry.audio = out_dir / "audio" / (truth.song_id + ".wav");
    save_wav(entry.audio, audio);
    for (const auto& profile : spec.profiles) {
      const AnnotationTrack track = annotate(truth, profile);
      const fs::path lab = out_dir / "labs" / profile.id / (truth.song_id + ".lab");
      std::ofstream out(lab);
      if (!out) throw IoError("synth: cannot write " + lab.string());
      out << to_lab(track);
      entry.labs[profile.id] = lab;
    }
    manifest.songs.push_back(std::move(entry));
  }

  const fs::path manifest_path = out_dir / "manifest.json";
  save_manifest(manifest, manifest_path);
  return manifest_path;
}

}  // namespace chordlab
