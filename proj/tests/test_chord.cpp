#include <doctest.h>

#include <random>

#include "chordlab/chord.hpp"
#include "chordlab/errors.hpp"

using namespace chordlab;

namespace {

const std::vector<std::string> kQualityTexts = {
    "maj", "min", "maj7", "min7", "7", "minmaj7", "dim",
    "aug", "sus2", "sus4", "dim7", "hdim7", "maj6", "min6"};

ChordLabel random_label(std::mt19937_64& rng, bool allow_extensions = true) {
  std::uniform_int_distribution<int> root(0, 12);
  const int r = root(rng);
  if (r == 12) return ChordLabel::no_chord();
  std::uniform_int_distribution<size_t> quality(0, kQualityTexts.size() - 1);
  static const char* names[12] = {"C", "C#", "D", "D#", "E", "F",
                                  "F#", "G", "G#", "A", "A#", "B"};
  std::string text = std::string(names[r]) + ":" + kQualityTexts[quality(rng)];
  if (allow_extensions && std::uniform_int_distribution<int>(0, 4)(rng) == 0)
    text += "(9)";
  return parse_label(text);
}

}  // namespace

TEST_CASE("parse_label handles the standard forms") {
  const ChordLabel gmaj7 = parse_label("G:maj7");
  CHECK(gmaj7.root == 7);
  CHECK(gmaj7.quality == Quality::maj7);

  CHECK(parse_label("N").is_no_chord());
  CHECK(parse_label("X").is_no_chord());

  const ChordLabel inverted = parse_label("C#:min/b3");
  CHECK(inverted.root == 1);
  CHECK(inverted.quality == Quality::min);

  const ChordLabel bare = parse_label("C");
  CHECK(bare.root == 0);
  CHECK(bare.quality == Quality::maj);

  CHECK(parse_label("Db:maj") == parse_label("C#:maj"));
}

TEST_CASE("parse_label rejects malformed input") {
  CHECK_THROWS_AS(parse_label("H:maj"), ParseError);
  CHECK_THROWS_AS(parse_label("C:"), ParseError);
  CHECK_THROWS_AS(parse_label("C:weird"), ParseError);
  CHECK_THROWS_AS(parse_label(""), ParseError);
  CHECK_THROWS_AS(parse_label("C:maj(banana)"), ParseError);
}

TEST_CASE("round trip through canonical text is stable") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const ChordLabel label = random_label(rng);
    const ChordLabel reparsed = parse_label(canonical_text(label));
    CHECK(reparsed == label);
    CHECK(canonical_text(reparsed) == canonical_text(label));
  }
}

TEST_CASE("third classification") {
  CHECK(third_class(parse_label("G:maj7")) == ThirdClass::sharp3);
  CHECK(third_class(parse_label("G:minmaj7")) == ThirdClass::flat3);
  CHECK(third_class(parse_label("C:sus4")) == ThirdClass::star3);
  CHECK(third_class(parse_label("N")) == ThirdClass::star3);
}

TEST_CASE("seventh classification") {
  CHECK(seventh_class(parse_label("G:maj7")) == SeventhClass::sharp7);
  CHECK(seventh_class(parse_label("G:maj")) == SeventhClass::star7);
  CHECK(seventh_class(parse_label("A:7")) == SeventhClass::flat7);
  // The diminished seventh is neither a major nor a minor seventh.
  CHECK(seventh_class(parse_label("B:dim7")) == SeventhClass::star7);
  // A seventh written as an extension overrides the bare-triad class.
  CHECK(seventh_class(parse_label("C:maj(7)")) == SeventhClass::sharp7);
  CHECK(seventh_class(parse_label("C:maj(b7)")) == SeventhClass::flat7);
}

TEST_CASE("pitch_classes templates and extensions") {
  CHECK(pitch_classes(parse_label("C:maj")) == std::set<int>{0, 4, 7});
  CHECK(pitch_classes(parse_label("G:maj7")) == std::set<int>{7, 11, 2, 6});
  CHECK(pitch_classes(parse_label("N")).empty());
  CHECK(pitch_classes(parse_label("C:maj(9)")) == std::set<int>{0, 2, 4, 7});
}

TEST_CASE("third and seventh consistency with pitch classes") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const ChordLabel label = random_label(rng, /*allow_extensions=*/false);
    if (label.is_no_chord()) continue;
    const auto pcs = pitch_classes(label);
    CHECK(pcs.count(label.root) == 1);
    const bool has_major_third = pcs.count((label.root + 4) % 12) == 1;
    const bool has_minor_third = pcs.count((label.root + 3) % 12) == 1;
    if (third_class(label) == ThirdClass::sharp3) CHECK(has_major_third);
    if (third_class(label) == ThirdClass::flat3) CHECK(has_minor_third);
  }
}

TEST_CASE("transposition shifts pitch classes and keeps classes") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const ChordLabel label = random_label(rng);
    const int k = std::uniform_int_distribution<int>(0, 11)(rng);
    const ChordLabel moved = transpose(label, k);
    CHECK(third_class(moved) == third_class(label));
    CHECK(seventh_class(moved) == seventh_class(label));
    std::set<int> expected;
    for (int pc : pitch_classes(label)) expected.insert((pc + k) % 12);
    CHECK(pitch_classes(moved) == expected);
  }
}
