#include "chordlab/annotations.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "chordlab/errors.hpp"

namespace chordlab {

bool Vocabulary::contains(const ChordLabel& label) const {
  return std::binary_search(labels.begin(), labels.end(), label);
}

Vocabulary Vocabulary::from_labels(std::vector<ChordLabel> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.empty()) throw ConfigError("vocabulary: no labels");
  return Vocabulary{std::move(labels)};
}

AnnotationTrack parse_lab(std::string_view text, std::string annotator_id,
                          std::string song_id) {
  AnnotationTrack track;
  track.annotator_id = std::move(annotator_id);
  track.song_id = std::move(song_id);

  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    double start, end;
    std::string label_text;
    if (!(fields >> start >> end >> label_text))
      throw ParseError("lab line " + std::to_string(line_no) + ": expected 'start end label'");
    if (!(start < end))
      throw ParseError("lab line " + std::to_string(line_no) + ": end before start");
    if (!track.segments.empty() && start < track.segments.back().end - 1e-9)
      throw ParseError("lab line " + std::to_string(line_no) + ": overlaps previous segment");
    ChordLabel label;
    try {
      label = parse_label(label_text);
    } catch (const ParseError& e) {
      throw ParseError("lab line " + std::to_string(line_no) + ": " + e.what());
    }
    track.segments.push_back({start, end, label});
  }
  return track;
}

std::string to_lab(const AnnotationTrack& track) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  for (const auto& seg : track.segments)
    os << seg.start << ' ' << seg.end << ' ' << canonical_text(seg.label) << '\n';
  return os.str();
}

ChordLabel label_at(const AnnotationTrack& track, double time) {
  for (const auto& seg : track.segments) {
    if (time < seg.start) break;  // in a gap
    if (time < seg.end) return seg.label;
  }
  return ChordLabel::no_chord();
}

Vocabulary build_vocabulary(std::span<const AnnotationTrack> tracks) {
  if (tracks.empty()) throw ConfigError("build_vocabulary: no tracks");
  std::vector<ChordLabel> labels;
  for (const auto& track : tracks)
    for (const auto& seg : track.segments) labels.push_back(seg.label);
  return Vocabulary::from_labels(std::move(labels));
}

}  // namespace chordlab
