#include "chordlab/decoder.hpp"

#include <algorithm>

#include "chordlab/errors.hpp"

namespace chordlab {

double combined_probability(const ChordLabel& label, const Ship& ship) {
  const Hip h = encode_hip(label);
  double product = 1.0;
  for (int i = 0; i < kHipSize; ++i)
    if (h[static_cast<size_t>(i)] == 1.0) product *= ship[static_cast<size_t>(i)];
  return product;
}

DecodeResult decode(const Ship& ship, const Vocabulary& vocabulary) {
  if (vocabulary.labels.empty()) throw ConfigError("decode: empty vocabulary");

  DecodeResult result;
  result.ranked.reserve(vocabulary.size());
  double total = 0.0;
  for (const auto& label : vocabulary.labels) {
    const double cp = combined_probability(label, ship);
    result.ranked.push_back({label, cp, 0.0});
    total += cp;
  }

  if (total > 0.0) {
    for (auto& entry : result.ranked) entry.normalized = entry.combined / total;
  } else {
    // All-zero combined probabilities: fall back to uniform and flag it.
    result.uniform_fallback = true;
    const double uniform = 1.0 / static_cast<double>(result.ranked.size());
    for (auto& entry : result.ranked) entry.normalized = uniform;
  }

  // Vocabulary order is canonical, so stable_sort leaves ties in
  // lexicographic order.
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const DecodeEntry& a, const DecodeEntry& b) {
                     return a.normalized > b.normalized;
                   });
  return result;
}

std::vector<Segment> personalize_sequence(const std::vector<Ship>& ships,
                                          const Vocabulary& vocabulary,
                                          const std::vector<double>& frame_times) {
  if (ships.size() != frame_times.size())
    throw ConfigError("personalize_sequence: ships and frame_times differ in length");
  std::vector<Segment> segments;
  if (ships.empty()) return segments;

  std::vector<ChordLabel> labels(ships.size());
  for (size_t i = 0; i < ships.size(); ++i) labels[i] = decode(ships[i], vocabulary).chosen();

  // Half a typical frame step past the final frame time.
  const double tail = ships.size() > 1
                          ? (frame_times.back() - frame_times.front()) /
                                (2.0 * static_cast<double>(ships.size() - 1))
                          : frame_times.back() + 0.5;

  double start = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool last = i + 1 == labels.size();
    if (!last && labels[i + 1] == labels[i]) continue;
    const double end = last ? frame_times.back() + tail
                            : 0.5 * (frame_times[i] + frame_times[i + 1]);
    segments.push_back({start, end, labels[i]});
    start = end;
  }
  return segments;
}

}  // namespace chordlab
