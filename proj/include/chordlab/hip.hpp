#pragma once

#include <array>
#include <span>

#include "chordlab/chord.hpp"

namespace chordlab {

/// 19-dimensional harmonic interval profile layout:
///   indices 0..12  root segment (C..B, then no-chord)
///   indices 13..15 third segment  (#3, b3, *3)
///   indices 16..18 seventh segment (#7, b7, *7)
inline constexpr int kHipSize = 19;
inline constexpr int kRootSegmentBegin = 0;
inline constexpr int kRootSegmentSize = 13;
inline constexpr int kThirdSegmentBegin = 13;
inline constexpr int kSeventhSegmentBegin = 16;
inline constexpr int kTriadSegmentSize = 3;

using Hip = std::array<double, kHipSize>;
using Ship = std::array<double, kHipSize>;

/// One-hot encoding of a single label: exactly one 1 per segment.
Hip encode_hip(const ChordLabel& label);

/// Equal-weight mean of the labels' profiles. Throws ConfigError on an
/// empty list.
Ship encode_ship(std::span<const ChordLabel> labels);

/// True when every entry is in [0,1] and each segment sums to 1 within tol.
bool ship_is_valid(const Ship& ship, double tol = 1e-9);

}  // namespace chordlab
