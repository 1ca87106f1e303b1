#include "chordlab/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chordlab/errors.hpp"

namespace chordlab {
namespace {

bool is_majmin_reducible(const ChordLabel& label) {
  return label.is_no_chord() || third_class(label) != ThirdClass::star3;
}

Outcome from_bool(bool correct) { return correct ? Outcome::correct : Outcome::incorrect; }

}  // namespace

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::root: return "root";
    case Metric::majmin: return "majmin";
    case Metric::mirex: return "mirex";
    case Metric::thirds: return "thirds";
    case Metric::sevenths: return "7ths";
  }
  return "?";
}

Outcome compare(Metric metric, const ChordLabel& estimated, const ChordLabel& reference) {
  switch (metric) {
    case Metric::root:
      return from_bool(estimated.root == reference.root);
    case Metric::majmin: {
      if (!is_majmin_reducible(reference)) return Outcome::excluded;
      return from_bool(estimated.root == reference.root &&
                       third_class(estimated) == third_class(reference));
    }
    case Metric::mirex: {
      if (estimated.is_no_chord() || reference.is_no_chord())
        return from_bool(estimated.is_no_chord() == reference.is_no_chord());
      const auto est = pitch_classes(estimated);
      const auto ref = pitch_classes(reference);
      size_t shared = 0;
      for (int pc : est) shared += ref.count(pc);
      return from_bool(shared >= 3);
    }
    case Metric::thirds:
      return from_bool(estimated.root == reference.root &&
                       third_class(estimated) == third_class(reference));
    case Metric::sevenths:
      return from_bool(estimated.root == reference.root &&
                       third_class(estimated) == third_class(reference) &&
                       seventh_class(estimated) == seventh_class(reference));
  }
  return Outcome::incorrect;
}

double ScoreCount::accuracy() const {
  if (evaluated() == 0) throw EvalError("score undefined: every frame was excluded");
  return static_cast<double>(correct) / static_cast<double>(evaluated());
}

ScoreCount count_sequence(Metric metric, std::span<const ChordLabel> estimated,
                          std::span<const ChordLabel> reference) {
  if (estimated.size() != reference.size())
    throw ConfigError("score_sequence: sequences differ in length");
  ScoreCount count;
  for (size_t i = 0; i < estimated.size(); ++i) {
    switch (compare(metric, estimated[i], reference[i])) {
      case Outcome::correct: ++count.correct; break;
      case Outcome::incorrect: ++count.incorrect; break;
      case Outcome::excluded: ++count.excluded; break;
    }
  }
  return count;
}

double score_sequence(Metric metric, std::span<const ChordLabel> estimated,
                      std::span<const ChordLabel> reference) {
  return count_sequence(metric, estimated, reference).accuracy();
}

EvalReport build_report(
    const std::map<std::string, std::vector<ChordLabel>>& estimates,
    const std::map<std::string, std::vector<ChordLabel>>& references) {
  EvalReport report;
  for (const auto& [annotator, est] : estimates) {
    auto ref = references.find(annotator);
    if (ref == references.end())
      throw ConfigError("build_report: no reference for annotator " + annotator);
    report.annotators.push_back(annotator);
    auto& row = report.cells[annotator];
    for (size_t m = 0; m < kAllMetrics.size(); ++m)
      row[m] = count_sequence(kAllMetrics[m], est, ref->second);
  }
  return report;
}

std::string report_tsv(const EvalReport& report) {
  std::ostringstream os;
  os << "annotator";
  for (Metric m : kAllMetrics) os << '\t' << metric_name(m);
  os << '\n';
  os << std::fixed << std::setprecision(4);
  for (const auto& annotator : report.annotators) {
    os << annotator;
    for (const auto& cell : report.cells.at(annotator)) os << '\t' << cell.accuracy();
    os << '\n';
  }
  return os.str();
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  for (const auto& annotator : report.annotators) {
    const auto& row = report.cells.at(annotator);
    for (size_t m = 0; m < kAllMetrics.size(); ++m) {
      nlohmann::json cell;
      cell["accuracy"] = row[m].accuracy();
      cell["evaluated"] = row[m].evaluated();
      cell["excluded"] = row[m].excluded;
      j[annotator][std::string(metric_name(kAllMetrics[m]))] = std::move(cell);
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace chordlab
