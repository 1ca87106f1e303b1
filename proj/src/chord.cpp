#include "chordlab/chord.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

#include "chordlab/errors.hpp"

namespace chordlab {
namespace {

const std::map<std::string_view, Quality, std::less<>> kQualityTokens = {
    {"maj", Quality::maj},       {"min", Quality::min},
    {"maj7", Quality::maj7},     {"min7", Quality::min7},
    {"7", Quality::dom7},        {"minmaj7", Quality::minmaj7},
    {"dim", Quality::dim},       {"aug", Quality::aug},
    {"sus2", Quality::sus2},     {"sus4", Quality::sus4},
    {"dim7", Quality::dim7},     {"hdim7", Quality::hdim7},
    {"maj6", Quality::maj6},     {"min6", Quality::min6},
};

// Interval templates relative to the root.
const std::map<Quality, std::set<int>> kQualityIntervals = {
    {Quality::maj, {0, 4, 7}},        {Quality::min, {0, 3, 7}},
    {Quality::maj7, {0, 4, 7, 11}},   {Quality::min7, {0, 3, 7, 10}},
    {Quality::dom7, {0, 4, 7, 10}},   {Quality::minmaj7, {0, 3, 7, 11}},
    {Quality::dim, {0, 3, 6}},        {Quality::aug, {0, 4, 8}},
    {Quality::sus2, {0, 2, 7}},       {Quality::sus4, {0, 5, 7}},
    {Quality::dim7, {0, 3, 6, 9}},    {Quality::hdim7, {0, 3, 6, 10}},
    {Quality::maj6, {0, 4, 7, 9}},    {Quality::min6, {0, 3, 7, 9}},
};

constexpr std::array<std::string_view, 12> kSharpNames = {
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};

// Major-scale semitone offsets for degrees 1..7.
constexpr std::array<int, 7> kMajorScale = {0, 2, 4, 5, 7, 9, 11};

[[noreturn]] void fail(std::string_view what, std::string_view offending) {
  std::ostringstream os;
  os << "chord parse error: " << what << " '" << offending << "'";
  throw ParseError(os.str());
}

// Degree token -> semitones above the root, mod 12. Accepts an optional
// "add" prefix and leading accidentals, e.g. "9", "b9", "add9", "#11".
int degree_semitones(std::string_view token) {
  std::string_view rest = token;
  if (rest.substr(0, 3) == "add") rest.remove_prefix(3);
  int accidental = 0;
  while (!rest.empty() && (rest.front() == 'b' || rest.front() == '#')) {
    accidental += rest.front() == '#' ? 1 : -1;
    rest.remove_prefix(1);
  }
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(),
                                   [](unsigned char c) { return std::isdigit(c); })) {
    fail("bad extension degree", token);
  }
  int degree = std::stoi(std::string(rest));
  if (degree < 1 || degree > 13) fail("extension degree out of range", token);
  int semis = kMajorScale[(degree - 1) % 7] + accidental;
  return ((semis % 12) + 12) % 12;
}

// The seventh degree written as an extension, if any.
std::optional<SeventhClass> extension_seventh(const std::set<std::string>& exts) {
  if (exts.count("7")) return SeventhClass::sharp7;
  if (exts.count("b7")) return SeventhClass::flat7;
  return std::nullopt;
}

}  // namespace

std::string_view quality_name(Quality q) {
  for (const auto& [name, value] : kQualityTokens)
    if (value == q) return name;
  return "?";
}

bool ChordLabel::operator<(const ChordLabel& other) const {
  return canonical_text(*this) < canonical_text(other);
}

ChordLabel parse_label(std::string_view text) {
  if (text.empty()) fail("empty label", text);
  if (text == "N" || text == "X") return ChordLabel::no_chord();

  size_t pos = 0;
  char letter = text[0];
  static const std::map<char, int> kLetters = {{'C', 0}, {'D', 2}, {'E', 4}, {'F', 5},
                                               {'G', 7}, {'A', 9}, {'B', 11}};
  auto it = kLetters.find(letter);
  if (it == kLetters.end()) fail("invalid note letter", text.substr(0, 1));
  int root = it->second;
  ++pos;
  while (pos < text.size() && (text[pos] == '#' || text[pos] == 'b')) {
    root += text[pos] == '#' ? 1 : -1;
    ++pos;
  }
  root = ((root % 12) + 12) % 12;

  ChordLabel label;
  label.root = root;
  label.quality = Quality::maj;

  if (pos < text.size() && text[pos] == ':') {
    ++pos;
    size_t end = text.find_first_of("(/", pos);
    std::string_view qtoken = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    if (qtoken.empty()) fail("empty quality", text);
    auto q = kQualityTokens.find(qtoken);
    if (q == kQualityTokens.end()) fail("unknown quality", qtoken);
    label.quality = q->second;
    pos = end == std::string_view::npos ? text.size() : end;
  }

  if (pos < text.size() && text[pos] == '(') {
    size_t close = text.find(')', pos);
    if (close == std::string_view::npos) fail("unterminated extension list", text.substr(pos));
    std::string_view list = text.substr(pos + 1, close - pos - 1);
    while (!list.empty()) {
      size_t comma = list.find(',');
      std::string_view token = list.substr(0, comma);
      if (token.empty()) fail("empty extension token", text);
      degree_semitones(token);  // validates
      label.extensions.insert(std::string(token));
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
    pos = close + 1;
  }

  if (pos < text.size()) {
    if (text[pos] != '/') fail("unexpected trailing text", text.substr(pos));
    // Bass note accepted and discarded.
  }
  return label;
}

std::string canonical_text(const ChordLabel& label) {
  if (label.is_no_chord()) return "N";
  std::ostringstream os;
  os << kSharpNames[static_cast<size_t>(label.root)] << ':'
     << quality_name(label.quality.value_or(Quality::maj));
  if (!label.extensions.empty()) {
    os << '(';
    bool first = true;
    for (const auto& ext : label.extensions) {
      if (!first) os << ',';
      os << ext;
      first = false;
    }
    os << ')';
  }
  return os.str();
}

ThirdClass third_class(const ChordLabel& label) {
  if (label.is_no_chord()) return ThirdClass::star3;
  switch (label.quality.value_or(Quality::maj)) {
    case Quality::maj:
    case Quality::maj7:
    case Quality::dom7:
    case Quality::aug:
    case Quality::maj6:
      return ThirdClass::sharp3;
    case Quality::min:
    case Quality::min7:
    case Quality::minmaj7:
    case Quality::dim:
    case Quality::dim7:
    case Quality::hdim7:
    case Quality::min6:
      return ThirdClass::flat3;
    case Quality::sus2:
    case Quality::sus4:
      return ThirdClass::star3;
  }
  return ThirdClass::star3;
}

SeventhClass seventh_class(const ChordLabel& label) {
  if (label.is_no_chord()) return SeventhClass::star7;
  SeventhClass base = SeventhClass::star7;
  switch (label.quality.value_or(Quality::maj)) {
    case Quality::maj7:
    case Quality::minmaj7:
      base = SeventhClass::sharp7;
      break;
    case Quality::dom7:
    case Quality::min7:
    case Quality::hdim7:
      base = SeventhClass::flat7;
      break;
    default:
      break;  // dim7's diminished seventh counts as no plain seventh
  }
  if (base == SeventhClass::star7) {
    if (auto ext = extension_seventh(label.extensions)) return *ext;
  }
  return base;
}

std::set<int> pitch_classes(const ChordLabel& label) {
  std::set<int> out;
  if (label.is_no_chord()) return out;
  const auto& intervals = kQualityIntervals.at(label.quality.value_or(Quality::maj));
  for (int i : intervals) out.insert((label.root + i) % 12);
  for (const auto& ext : label.extensions)
    out.insert((label.root + degree_semitones(ext)) % 12);
  return out;
}

ChordLabel transpose(const ChordLabel& label, int k) {
  if (label.is_no_chord()) return label;
  ChordLabel out = label;
  out.root = ((label.root + k) % 12 + 12) % 12;
  return out;
}

}  // namespace chordlab
