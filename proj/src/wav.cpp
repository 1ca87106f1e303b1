#include "chordlab/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "chordlab/errors.hpp"

namespace chordlab {
namespace {

static_assert(std::endian::native == std::endian::little,
              "little-endian host assumed for WAV and binary formats");

template <typename T>
T read_le(std::istream& in, const char* what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value))
    throw IoError(std::string("wav: truncated while reading ") + what);
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

}  // namespace

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav: cannot open " + path.string());

  char riff[4], wave[4];
  in.read(riff, 4);
  read_le<uint32_t>(in, "riff size");
  in.read(wave, 4);
  if (!in || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
    throw FormatError("wav: not a RIFF/WAVE file: " + path.string());

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::vector<char> data;

  while (in.peek() != EOF) {
    char id[4];
    in.read(id, 4);
    if (!in) break;
    auto size = read_le<uint32_t>(in, "chunk size");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      format = read_le<uint16_t>(in, "format");
      channels = read_le<uint16_t>(in, "channels");
      sample_rate = read_le<uint32_t>(in, "sample rate");
      read_le<uint32_t>(in, "byte rate");
      read_le<uint16_t>(in, "block align");
      bits = read_le<uint16_t>(in, "bit depth");
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data.resize(size);
      if (!in.read(data.data(), size)) throw IoError("wav: truncated data chunk");
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }

  if (!have_fmt || data.empty()) throw FormatError("wav: missing fmt or data chunk");
  if (channels != 1 && channels != 2)
    throw FormatError("wav: unsupported channel count " + std::to_string(channels));

  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32)
    throw FormatError("wav: unsupported encoding (format " + std::to_string(format) +
                      ", " + std::to_string(bits) + "-bit)");

  const size_t bytes_per_sample = pcm16 ? 2 : 4;
  const size_t n_frames = data.size() / (bytes_per_sample * channels);

  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n_frames);
  for (size_t n = 0; n < n_frames; ++n) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) {
      const char* p = data.data() + (n * channels + c) * bytes_per_sample;
      if (pcm16) {
        int16_t v;
        std::memcpy(&v, p, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        acc += static_cast<double>(v);
      }
    }
    out.samples[n] = acc / channels;
  }
  return out;
}

void save_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("wav: cannot write " + path.string());

  const uint32_t data_size = static_cast<uint32_t>(audio.samples.size() * 2);
  out.write("RIFF", 4);
  write_le<uint32_t>(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<uint32_t>(out, 16);
  write_le<uint16_t>(out, 1);  // PCM
  write_le<uint16_t>(out, 1);  // mono
  write_le<uint32_t>(out, audio.sample_rate);
  write_le<uint32_t>(out, audio.sample_rate * 2);
  write_le<uint16_t>(out, 2);
  write_le<uint16_t>(out, 16);
  out.write("data", 4);
  write_le<uint32_t>(out, data_size);
  for (double s : audio.samples) {
    double clamped = std::clamp(s, -1.0, 1.0);
    auto v = static_cast<int16_t>(std::lround(clamped * 32767.0));
    write_le<int16_t>(out, v);
  }
  if (!out) throw IoError("wav: write failed for " + path.string());
}

}  // namespace chordlab
