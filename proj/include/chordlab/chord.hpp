#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace chordlab {

inline constexpr int kNumPitchClasses = 12;

/// Chord qualities understood by the parser. Anything else is rejected.
enum class Quality {
  maj,
  min,
  maj7,
  min7,
  dom7,  // written "7"
  minmaj7,
  dim,
  aug,
  sus2,
  sus4,
  dim7,
  hdim7,
  maj6,
  min6,
};

/// Third interval relative to the root: major, minor, or none.
enum class ThirdClass { sharp3, flat3, star3 };

/// Seventh interval relative to the root: major, minor, or none.
enum class SeventhClass { sharp7, flat7, star7 };

/// A parsed symbolic chord label. Inversions are discarded at parse time.
/// The no-chord label has root = kNoChordRoot, no quality and no extensions.
struct ChordLabel {
  static constexpr int kNoChordRoot = 12;

  int root = kNoChordRoot;  // pitch class 0..11 (C=0), or kNoChordRoot
  std::optional<Quality> quality;
  std::set<std::string> extensions;  // canonical degree tokens, e.g. "9", "b9"

  bool is_no_chord() const { return root == kNoChordRoot; }

  bool operator==(const ChordLabel&) const = default;
  bool operator<(const ChordLabel& other) const;  // lexicographic on canonical text

  static ChordLabel no_chord() { return ChordLabel{}; }
  static ChordLabel make(int root, Quality q) {
    ChordLabel l;
    l.root = root;
    l.quality = q;
    return l;
  }
};

std::string_view quality_name(Quality q);

/// Parse "ROOT[:QUALITY][(EXT{,EXT})][/BASS]". Bare roots get maj; "N" and
/// "X" parse as no-chord; the bass part is accepted and dropped. Throws
/// ParseError naming the offending substring.
ChordLabel parse_label(std::string_view text);

/// Canonical text form; parse_label(canonical_text(l)) == l.
std::string canonical_text(const ChordLabel& label);

ThirdClass third_class(const ChordLabel& label);
SeventhClass seventh_class(const ChordLabel& label);

/// Sounded chromatic pitch classes (root + quality template + extensions),
/// all modulo 12. No-chord yields the empty set.
std::set<int> pitch_classes(const ChordLabel& label);

/// Shift the root by k semitones (mod 12). No-chord is unaffected.
ChordLabel transpose(const ChordLabel& label, int k);

}  // namespace chordlab
