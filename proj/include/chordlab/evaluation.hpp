#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chordlab/chord.hpp"

namespace chordlab {

/// Chord comparison granularities, in report column order.
enum class Metric { root, majmin, mirex, thirds, sevenths };

inline constexpr std::array<Metric, 5> kAllMetrics = {
    Metric::root, Metric::majmin, Metric::mirex, Metric::thirds, Metric::sevenths};

std::string_view metric_name(Metric metric);

enum class Outcome { correct, incorrect, excluded };

/// Frame-level comparison:
///   root    roots equal (no-chord only matches no-chord)
///   majmin  (root, third class) equal; references that are neither
///           maj/min/no-chord are excluded
///   mirex   at least three shared pitch classes; two no-chords match
///   thirds  root and third class equal
///   7ths    root, third class and seventh class equal
Outcome compare(Metric metric, const ChordLabel& estimated, const ChordLabel& reference);

struct ScoreCount {
  size_t correct = 0;
  size_t incorrect = 0;
  size_t excluded = 0;

  size_t evaluated() const { return correct + incorrect; }
  double accuracy() const;  // throws EvalError when everything is excluded
};

ScoreCount count_sequence(Metric metric, std::span<const ChordLabel> estimated,
                          std::span<const ChordLabel> reference);

/// Frame-uniform accuracy = correct / (correct + incorrect).
double score_sequence(Metric metric, std::span<const ChordLabel> estimated,
                      std::span<const ChordLabel> reference);

/// Accuracy table: one row per annotator, one column per metric.
struct EvalReport {
  std::vector<std::string> annotators;
  std::map<std::string, std::array<ScoreCount, 5>> cells;  // annotator -> per metric
};

EvalReport build_report(
    const std::map<std::string, std::vector<ChordLabel>>& estimates,
    const std::map<std::string, std::vector<ChordLabel>>& references);

/// Tab-separated accuracy table, metric columns in kAllMetrics order.
std::string report_tsv(const EvalReport& report);

/// JSON document with per-cell accuracy and frame counts.
std::string report_json(const EvalReport& report);

}  // namespace chordlab
