#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "chordlab/wav.hpp"

namespace chordlab {

struct CqtConfig {
  uint32_t hop = 4096;       // samples per frame step
  double f_min = 32.7032;    // Hz, note C1
  uint32_t n_bins = 192;
  uint32_t bins_per_octave = 24;

  /// Center frequency of bin k: f_min * 2^(k / bins_per_octave).
  double bin_frequency(uint32_t k) const;
  /// Quality factor 1 / (2^(1/bins_per_octave) - 1).
  double quality_factor() const;

  bool operator==(const CqtConfig&) const = default;
};

/// Time x frequency magnitudes, row-major, immutable after construction.
struct CqtMatrix {
  std::vector<double> data;        // num_frames * n_bins
  size_t num_frames = 0;
  uint32_t n_bins = 0;
  std::vector<double> frame_times;  // seconds, frame_times[n] = n * hop / sr

  double at(size_t frame, size_t bin) const { return data[frame * n_bins + bin]; }
};

/// Windowed per-bin projection of the signal onto each bin's center
/// frequency, Hann window of length round(Q * sr / f_k), normalized by the
/// window sum, frames centered at n*hop with zero-padded edges.
/// Throws ConfigError when the top bin exceeds Nyquist.
CqtMatrix compute_cqt(const AudioBuffer& audio, const CqtConfig& config = {});

inline constexpr int kContextRadius = 7;
inline constexpr int kContextFrames = 2 * kContextRadius + 1;  // 15

/// Flattened frame-major window of kContextFrames frames centered on
/// `frame`; out-of-range neighbors are zero. Throws ConfigError when the
/// frame index is out of range.
std::vector<double> context_window(const CqtMatrix& matrix, size_t frame);

/// Binary cache: magic "CQTF", version, sample rate, config, then the
/// row-major magnitudes as little-endian doubles.
void write_cqt_cache(const std::filesystem::path& path, uint32_t sample_rate,
                     const CqtConfig& config, const CqtMatrix& matrix);

/// Loads a cache written for exactly this sample rate and config; returns
/// false when the file is absent or was written with other parameters.
bool read_cqt_cache(const std::filesystem::path& path, uint32_t sample_rate,
                    const CqtConfig& config, CqtMatrix& out);

}  // namespace chordlab
