#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chordlab/chord.hpp"

namespace chordlab {

struct Segment {
  double start = 0.0;  // seconds
  double end = 0.0;
  ChordLabel label;
};

/// One annotator's timed labels for one song. Segments are sorted,
/// non-overlapping, with start < end.
struct AnnotationTrack {
  std::string annotator_id;
  std::string song_id;
  std::vector<Segment> segments;
};

/// Deduplicated labels in canonical (lexicographic) order.
struct Vocabulary {
  std::vector<ChordLabel> labels;

  bool contains(const ChordLabel& label) const;
  size_t size() const { return labels.size(); }

  static Vocabulary from_labels(std::vector<ChordLabel> labels);
};

/// Parse LAB text: one "start end label" line per segment. Throws
/// ParseError with the line number on overlap, bad times, or bad labels.
AnnotationTrack parse_lab(std::string_view text, std::string annotator_id,
                          std::string song_id);

/// Render a track back to LAB text.
std::string to_lab(const AnnotationTrack& track);

/// Label at a time point, half-open [start, end) per segment; gaps and
/// times past the last segment are no-chord.
ChordLabel label_at(const AnnotationTrack& track, double time);

/// All distinct labels one annotator uses across their tracks.
Vocabulary build_vocabulary(std::span<const AnnotationTrack> tracks);

}  // namespace chordlab
