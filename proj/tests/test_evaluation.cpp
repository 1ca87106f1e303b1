#include <doctest.h>

#include <random>

#include "chordlab/errors.hpp"
#include "chordlab/evaluation.hpp"

using namespace chordlab;

namespace {

ChordLabel random_label(std::mt19937_64& rng) {
  static const std::vector<std::string> qualities = {
      "maj", "min", "maj7", "min7", "7", "minmaj7", "dim",
      "aug", "sus2", "sus4", "dim7", "hdim7", "maj6", "min6"};
  static const char* names[12] = {"C", "C#", "D", "D#", "E", "F",
                                  "F#", "G", "G#", "A", "A#", "B"};
  const int r = std::uniform_int_distribution<int>(0, 12)(rng);
  if (r == 12) return ChordLabel::no_chord();
  const auto q = std::uniform_int_distribution<size_t>(0, qualities.size() - 1)(rng);
  return parse_label(std::string(names[r]) + ":" + qualities[q]);
}

}  // namespace

TEST_CASE("root comparison") {
  CHECK(compare(Metric::root, parse_label("C:maj"), parse_label("C:min7")) == Outcome::correct);
  CHECK(compare(Metric::root, parse_label("C:maj"), parse_label("D:maj")) == Outcome::incorrect);
  CHECK(compare(Metric::root, parse_label("N"), parse_label("N")) == Outcome::correct);
  CHECK(compare(Metric::root, parse_label("N"), parse_label("C:maj")) == Outcome::incorrect);
}

TEST_CASE("majmin excludes references outside major, minor, and no-chord") {
  CHECK(compare(Metric::majmin, parse_label("C:maj"), parse_label("C:maj")) == Outcome::correct);
  CHECK(compare(Metric::majmin, parse_label("C:maj"), parse_label("C:min")) == Outcome::incorrect);
  // maj7 reduces to maj for this metric.
  CHECK(compare(Metric::majmin, parse_label("C:maj"), parse_label("C:maj7")) == Outcome::correct);
  CHECK(compare(Metric::majmin, parse_label("C:min"), parse_label("C:min7")) == Outcome::correct);
  // sus references carry no third, so the frame is excluded; dim7 still
  // reduces to min through its minor third.
  CHECK(compare(Metric::majmin, parse_label("C:maj"), parse_label("C:sus4")) == Outcome::excluded);
  CHECK(compare(Metric::majmin, parse_label("C:maj"), parse_label("C:dim7")) == Outcome::incorrect);
  CHECK(compare(Metric::majmin, parse_label("C:min"), parse_label("C:dim7")) == Outcome::correct);
  CHECK(compare(Metric::majmin, parse_label("N"), parse_label("N")) == Outcome::correct);
}

TEST_CASE("mirex needs three shared pitch classes") {
  CHECK(compare(Metric::mirex, parse_label("C:maj"), parse_label("C:maj7")) == Outcome::correct);
  CHECK(compare(Metric::mirex, parse_label("C:maj"), parse_label("A:min7")) == Outcome::correct);
  CHECK(compare(Metric::mirex, parse_label("C:maj"), parse_label("D:maj")) == Outcome::incorrect);
  CHECK(compare(Metric::mirex, parse_label("N"), parse_label("N")) == Outcome::correct);
  CHECK(compare(Metric::mirex, parse_label("N"), parse_label("C:maj")) == Outcome::incorrect);
  CHECK(compare(Metric::mirex, parse_label("C:maj"), parse_label("N")) == Outcome::incorrect);
}

TEST_CASE("thirds and sevenths tighten in steps") {
  const ChordLabel gmaj7 = parse_label("G:maj7");
  const ChordLabel gmaj = parse_label("G:maj");
  CHECK(compare(Metric::thirds, gmaj, gmaj7) == Outcome::correct);   // same root and third
  CHECK(compare(Metric::sevenths, gmaj, gmaj7) == Outcome::incorrect);  // sevenths differ
  CHECK(compare(Metric::sevenths, gmaj7, gmaj7) == Outcome::correct);
  CHECK(compare(Metric::thirds, parse_label("G:min"), gmaj) == Outcome::incorrect);
  // min7 and 7 share the flat seventh but not the third.
  CHECK(compare(Metric::sevenths, parse_label("C:min7"), parse_label("C:7")) ==
        Outcome::incorrect);
}

TEST_CASE("score_sequence averages frame outcomes") {
  const std::vector<ChordLabel> est = {parse_label("C:maj"), parse_label("C:maj"),
                                       parse_label("G:maj"), parse_label("A:min")};
  const std::vector<ChordLabel> ref = {parse_label("C:maj"), parse_label("D:maj"),
                                       parse_label("G:maj"), parse_label("B:min")};
  CHECK(score_sequence(Metric::root, est, ref) == doctest::Approx(0.5).epsilon(1e-12));
  const ScoreCount c = count_sequence(Metric::root, est, ref);
  CHECK(c.correct == 2);
  CHECK(c.incorrect == 2);
  CHECK(c.excluded == 0);
}

TEST_CASE("excluded frames do not dilute the accuracy") {
  const std::vector<ChordLabel> est = {parse_label("C:maj"), parse_label("C:maj")};
  const std::vector<ChordLabel> ref = {parse_label("C:maj"), parse_label("C:sus4")};
  const ScoreCount c = count_sequence(Metric::majmin, est, ref);
  CHECK(c.correct == 1);
  CHECK(c.excluded == 1);
  CHECK(c.accuracy() == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<ChordLabel> all_sus = {parse_label("C:sus4")};
  const std::vector<ChordLabel> est1 = {parse_label("C:maj")};
  CHECK_THROWS_AS(count_sequence(Metric::majmin, est1, all_sus).accuracy(), EvalError);
  const std::vector<ChordLabel> empty;
  CHECK_THROWS_AS(score_sequence(Metric::root, empty, empty), EvalError);
}

TEST_CASE("comparison is reflexive for every metric") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10000; ++i) {
    const ChordLabel label = random_label(rng);
    for (Metric m : kAllMetrics) {
      const Outcome o = compare(m, label, label);
      CHECK(o != Outcome::incorrect);  // equal labels never count against
    }
  }
}

TEST_CASE("sevenths correctness implies thirds implies root") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10000; ++i) {
    const ChordLabel est = random_label(rng);
    const ChordLabel ref = random_label(rng);
    if (compare(Metric::sevenths, est, ref) == Outcome::correct)
      CHECK(compare(Metric::thirds, est, ref) == Outcome::correct);
    if (compare(Metric::thirds, est, ref) == Outcome::correct)
      CHECK(compare(Metric::root, est, ref) == Outcome::correct);
  }
}

TEST_CASE("root, thirds, sevenths and mirex are symmetric") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 10000; ++i) {
    const ChordLabel a = random_label(rng);
    const ChordLabel b = random_label(rng);
    for (Metric m : {Metric::root, Metric::thirds, Metric::sevenths, Metric::mirex})
      CHECK(compare(m, a, b) == compare(m, b, a));
  }
}

TEST_CASE("comparisons are transposition invariant") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 10000; ++i) {
    const ChordLabel a = random_label(rng);
    const ChordLabel b = random_label(rng);
    const int k = std::uniform_int_distribution<int>(0, 11)(rng);
    for (Metric m : kAllMetrics)
      CHECK(compare(m, transpose(a, k), transpose(b, k)) == compare(m, a, b));
  }
}

TEST_CASE("build_report fills one row per annotator") {
  std::map<std::string, std::vector<ChordLabel>> refs;
  refs["a1"] = {parse_label("C:maj"), parse_label("G:maj")};
  refs["a2"] = {parse_label("C:min"), parse_label("G:maj")};
  std::map<std::string, std::vector<ChordLabel>> ests;
  ests["a1"] = {parse_label("C:maj"), parse_label("G:maj")};
  ests["a2"] = {parse_label("C:maj"), parse_label("G:maj")};

  const EvalReport report = build_report(ests, refs);
  CHECK(report.annotators == std::vector<std::string>{"a1", "a2"});
  CHECK(report.cells.at("a1")[0].correct == 2);
  CHECK(report.cells.at("a2")[0].correct == 2);  // roots match even when thirds differ
  const size_t majmin = 1;
  CHECK(report.cells.at("a2")[majmin].incorrect == 1);

  const std::string tsv = report_tsv(report);
  CHECK(tsv.find("root") != std::string::npos);
  CHECK(tsv.find("7ths") != std::string::npos);
  CHECK(tsv.find("a2") != std::string::npos);
  const std::string json = report_json(report);
  CHECK(json.find("\"a1\"") != std::string::npos);
}
