#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "chordlab/errors.hpp"
#include "chordlab/wav.hpp"

using namespace chordlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

void put16(std::vector<char>& bytes, uint16_t v) {
  bytes.push_back(static_cast<char>(v & 0xff));
  bytes.push_back(static_cast<char>(v >> 8));
}

void put32(std::vector<char>& bytes, uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Minimal hand-built WAV with arbitrary format/bit depth.
fs::path write_raw_wav(const char* name, uint16_t format, uint16_t channels,
                       uint32_t sample_rate, uint16_t bits,
                       const std::vector<char>& payload) {
  std::vector<char> bytes;
  const char riff[] = "RIFF";
  bytes.insert(bytes.end(), riff, riff + 4);
  put32(bytes, static_cast<uint32_t>(36 + payload.size()));
  const char wavefmt[] = "WAVEfmt ";
  bytes.insert(bytes.end(), wavefmt, wavefmt + 8);
  put32(bytes, 16);
  put16(bytes, format);
  put16(bytes, channels);
  put32(bytes, sample_rate);
  put32(bytes, sample_rate * channels * bits / 8);
  put16(bytes, static_cast<uint16_t>(channels * bits / 8));
  put16(bytes, bits);
  const char data[] = "data";
  bytes.insert(bytes.end(), data, data + 4);
  put32(bytes, static_cast<uint32_t>(payload.size()));
  bytes.insert(bytes.end(), payload.begin(), payload.end());

  const fs::path path = temp_file(name);
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  return path;
}

}  // namespace

TEST_CASE("one second of mono pcm16 yields sample_rate samples") {
  AudioBuffer audio;
  audio.sample_rate = 44100;
  audio.samples.assign(44100, 0.25);
  const fs::path path = temp_file("chordlab_mono.wav");
  save_wav(path, audio);

  const AudioBuffer loaded = load_wav(path);
  CHECK(loaded.sample_rate == 44100);
  CHECK(loaded.samples.size() == 44100);
  CHECK(loaded.samples[100] == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("stereo downmix averages channels") {
  // Interleave +0.5 / -0.5 as PCM16: mono result should be ~0.
  std::vector<char> payload;
  for (int n = 0; n < 64; ++n) {
    put16(payload, static_cast<uint16_t>(16384));   // +0.5
    put16(payload, static_cast<uint16_t>(-16384));  // -0.5
  }
  const auto path = write_raw_wav("chordlab_stereo.wav", 1, 2, 8000, 16, payload);
  const AudioBuffer loaded = load_wav(path);
  CHECK(loaded.samples.size() == 64);
  for (double s : loaded.samples) CHECK(s == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("float32 files load unscaled") {
  std::vector<char> payload;
  const float value = -0.625f;
  for (int n = 0; n < 16; ++n) {
    const char* p = reinterpret_cast<const char*>(&value);
    payload.insert(payload.end(), p, p + 4);
  }
  const auto path = write_raw_wav("chordlab_float.wav", 3, 1, 22050, 32, payload);
  const AudioBuffer loaded = load_wav(path);
  CHECK(loaded.samples.size() == 16);
  CHECK(loaded.samples[3] == doctest::Approx(-0.625).epsilon(1e-12));
}

TEST_CASE("8-bit pcm is rejected") {
  const auto path = write_raw_wav("chordlab_8bit.wav", 1, 1, 8000, 8,
                                  std::vector<char>(32, 0));
  CHECK_THROWS_AS(load_wav(path), FormatError);
}

TEST_CASE("truncated data chunk is an io error") {
  const fs::path good = temp_file("chordlab_trunc_src.wav");
  AudioBuffer audio;
  audio.sample_rate = 8000;
  audio.samples.assign(1000, 0.1);
  save_wav(good, audio);

  std::ifstream in(good, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  bytes.resize(bytes.size() - 500);
  const fs::path bad = temp_file("chordlab_trunc.wav");
  std::ofstream out(bad, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  CHECK_THROWS_AS(load_wav(bad), IoError);
}

TEST_CASE("non-wav file is rejected") {
  const fs::path path = temp_file("chordlab_notwav.wav");
  std::ofstream out(path, std::ios::binary);
  out << "definitely not audio";
  out.close();
  CHECK_THROWS(load_wav(path));
}
