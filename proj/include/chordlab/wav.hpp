#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace chordlab {

struct AudioBuffer {
  std::vector<double> samples;  // mono, nominally in [-1, 1]
  uint32_t sample_rate = 0;

  double duration_seconds() const {
    return sample_rate ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Read a RIFF/WAVE file: PCM 16-bit or IEEE float 32-bit, mono or stereo.
/// Stereo is downmixed by averaging; 16-bit samples are scaled by 1/32768.
/// Throws FormatError on unsupported encodings, IoError on truncation.
AudioBuffer load_wav(const std::filesystem::path& path);

/// Write a mono 16-bit PCM file (samples clamped to [-1, 1]).
void save_wav(const std::filesystem::path& path, const AudioBuffer& audio);

}  // namespace chordlab
