#include "chordlab/cqt.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "chordlab/errors.hpp"

namespace chordlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BinKernel {
  int length = 0;             // window length N_k
  std::vector<double> wcos;   // w[m] * cos(2*pi*f*m/sr)
  std::vector<double> wsin;   // w[m] * sin(2*pi*f*m/sr)
  double inv_gain = 0.0;      // 1 / sum(w)
};

std::vector<BinKernel> build_kernels(uint32_t sample_rate, const CqtConfig& config) {
  const double q = config.quality_factor();
  std::vector<BinKernel> kernels(config.n_bins);
  for (uint32_t k = 0; k < config.n_bins; ++k) {
    const double f = config.bin_frequency(k);
    const int length = std::max<int>(1, static_cast<int>(std::llround(q * sample_rate / f)));
    BinKernel& kern = kernels[k];
    kern.length = length;
    kern.wcos.resize(static_cast<size_t>(length));
    kern.wsin.resize(static_cast<size_t>(length));
    double gain = 0.0;
    for (int m = 0; m < length; ++m) {
      const double w =
          length == 1 ? 1.0 : 0.5 * (1.0 - std::cos(kTwoPi * m / (length - 1)));
      const double phase = kTwoPi * f * m / sample_rate;
      kern.wcos[static_cast<size_t>(m)] = w * std::cos(phase);
      kern.wsin[static_cast<size_t>(m)] = w * std::sin(phase);
      gain += w;
    }
    kern.inv_gain = 1.0 / gain;
  }
  return kernels;
}

}  // namespace

double CqtConfig::bin_frequency(uint32_t k) const {
  return f_min * std::exp2(static_cast<double>(k) / bins_per_octave);
}

double CqtConfig::quality_factor() const {
  return 1.0 / (std::exp2(1.0 / bins_per_octave) - 1.0);
}

CqtMatrix compute_cqt(const AudioBuffer& audio, const CqtConfig& config) {
  if (audio.sample_rate == 0) throw ConfigError("cqt: sample rate must be positive");
  const double f_max = config.bin_frequency(config.n_bins - 1);
  if (f_max >= audio.sample_rate / 2.0)
    throw ConfigError("cqt: top bin " + std::to_string(f_max) +
                      " Hz exceeds Nyquist for sample rate " +
                      std::to_string(audio.sample_rate));

  const auto kernels = build_kernels(audio.sample_rate, config);
  const auto n_samples = static_cast<long>(audio.samples.size());
  const size_t num_frames = audio.samples.size() / config.hop + 1;

  CqtMatrix out;
  out.num_frames = num_frames;
  out.n_bins = config.n_bins;
  out.data.assign(num_frames * config.n_bins, 0.0);
  out.frame_times.resize(num_frames);

  for (size_t n = 0; n < num_frames; ++n) {
    out.frame_times[n] = static_cast<double>(n) * config.hop / audio.sample_rate;
    const long center = static_cast<long>(n) * static_cast<long>(config.hop);
    for (uint32_t k = 0; k < config.n_bins; ++k) {
      const BinKernel& kern = kernels[k];
      const long start = center - kern.length / 2;
      const long lo = std::max<long>(0, -start);
      const long hi = std::min<long>(kern.length, n_samples - start);
      double re = 0.0, im = 0.0;
      for (long m = lo; m < hi; ++m) {
        const double x = audio.samples[static_cast<size_t>(start + m)];
        re += x * kern.wcos[static_cast<size_t>(m)];
        im += x * kern.wsin[static_cast<size_t>(m)];
      }
      out.data[n * config.n_bins + k] = std::hypot(re, im) * kern.inv_gain;
    }
  }
  return out;
}

std::vector<double> context_window(const CqtMatrix& matrix, size_t frame) {
  if (frame >= matrix.num_frames) throw ConfigError("context_window: frame out of range");
  std::vector<double> out(static_cast<size_t>(kContextFrames) * matrix.n_bins, 0.0);
  for (int offset = -kContextRadius; offset <= kContextRadius; ++offset) {
    const long src = static_cast<long>(frame) + offset;
    if (src < 0 || src >= static_cast<long>(matrix.num_frames)) continue;
    const size_t dst = static_cast<size_t>(offset + kContextRadius) * matrix.n_bins;
    std::memcpy(out.data() + dst, matrix.data.data() + static_cast<size_t>(src) * matrix.n_bins,
                matrix.n_bins * sizeof(double));
  }
  return out;
}

namespace {
constexpr char kCacheMagic[4] = {'C', 'Q', 'T', 'F'};
constexpr uint32_t kCacheVersion = 1;
}  // namespace

void write_cqt_cache(const std::filesystem::path& path, uint32_t sample_rate,
                     const CqtConfig& config, const CqtMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cqt cache: cannot write " + path.string());
  out.write(kCacheMagic, 4);
  auto put = [&](const void* p, size_t n) { out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); };
  put(&kCacheVersion, 4);
  put(&sample_rate, 4);
  put(&config.hop, 4);
  put(&config.f_min, 8);
  put(&config.n_bins, 4);
  put(&config.bins_per_octave, 4);
  const auto frames = static_cast<uint64_t>(matrix.num_frames);
  put(&frames, 8);
  put(matrix.data.data(), matrix.data.size() * sizeof(double));
  if (!out) throw IoError("cqt cache: write failed for " + path.string());
}

bool read_cqt_cache(const std::filesystem::path& path, uint32_t sample_rate,
                    const CqtConfig& config, CqtMatrix& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[4];
  uint32_t version, sr;
  CqtConfig stored;
  uint64_t frames;
  in.read(magic, 4);
  auto get = [&](void* p, size_t n) { in.read(static_cast<char*>(p), static_cast<std::streamsize>(n)); };
  get(&version, 4);
  get(&sr, 4);
  get(&stored.hop, 4);
  get(&stored.f_min, 8);
  get(&stored.n_bins, 4);
  get(&stored.bins_per_octave, 4);
  get(&frames, 8);
  if (!in || std::memcmp(magic, kCacheMagic, 4) != 0 || version != kCacheVersion ||
      sr != sample_rate || !(stored == config))
    return false;
  out.num_frames = frames;
  out.n_bins = config.n_bins;
  out.data.resize(frames * config.n_bins);
  get(out.data.data(), out.data.size() * sizeof(double));
  if (!in) return false;
  out.frame_times.resize(frames);
  for (size_t n = 0; n < frames; ++n)
    out.frame_times[n] = static_cast<double>(n) * config.hop / sample_rate;
  return true;
}

}  // namespace chordlab
