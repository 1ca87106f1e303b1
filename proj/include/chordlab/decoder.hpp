#pragma once

#include <vector>

#include "chordlab/annotations.hpp"
#include "chordlab/hip.hpp"

namespace chordlab {

struct DecodeEntry {
  ChordLabel label;
  double combined = 0.0;    // product of the profile entries the label selects
  double normalized = 0.0;  // combined / sum over the vocabulary
};

/// Ranked by descending normalized probability, ties broken by canonical
/// label text; the chosen label is the first entry. `uniform_fallback` is
/// set when every combined probability was zero.
struct DecodeResult {
  std::vector<DecodeEntry> ranked;
  bool uniform_fallback = false;

  const ChordLabel& chosen() const { return ranked.front().label; }
};

/// Product of the three ship entries at the indices where the label's
/// one-hot profile is 1.
double combined_probability(const ChordLabel& label, const Ship& ship);

/// Normalized combined probabilities over the vocabulary. Throws
/// ConfigError on an empty vocabulary.
DecodeResult decode(const Ship& ship, const Vocabulary& vocabulary);

/// Per-frame decode followed by merging runs of identical labels into
/// segments; boundaries sit at midpoints between consecutive frame times,
/// the first segment starts at 0 and the last ends half a frame step past
/// the final time.
std::vector<Segment> personalize_sequence(const std::vector<Ship>& ships,
                                          const Vocabulary& vocabulary,
                                          const std::vector<double>& frame_times);

}  // namespace chordlab
