#include "chordlab/hip.hpp"

#include <cmath>

#include "chordlab/errors.hpp"

namespace chordlab {

Hip encode_hip(const ChordLabel& label) {
  Hip h{};
  h[static_cast<size_t>(kRootSegmentBegin + label.root)] = 1.0;
  h[static_cast<size_t>(kThirdSegmentBegin + static_cast<int>(third_class(label)))] = 1.0;
  h[static_cast<size_t>(kSeventhSegmentBegin + static_cast<int>(seventh_class(label)))] = 1.0;
  return h;
}

Ship encode_ship(std::span<const ChordLabel> labels) {
  if (labels.empty()) throw ConfigError("encode_ship: empty label list");
  Ship s{};
  for (const auto& label : labels) {
    Hip h = encode_hip(label);
    for (int i = 0; i < kHipSize; ++i) s[static_cast<size_t>(i)] += h[static_cast<size_t>(i)];
  }
  const double inv = 1.0 / static_cast<double>(labels.size());
  for (double& v : s) v *= inv;
  return s;
}

bool ship_is_valid(const Ship& ship, double tol) {
  for (double v : ship)
    if (!(v >= 0.0 && v <= 1.0)) return false;
  const auto segment_sum = [&](int begin, int size) {
    double sum = 0.0;
    for (int i = begin; i < begin + size; ++i) sum += ship[static_cast<size_t>(i)];
    return sum;
  };
  return std::abs(segment_sum(kRootSegmentBegin, kRootSegmentSize) - 1.0) <= tol &&
         std::abs(segment_sum(kThirdSegmentBegin, kTriadSegmentSize) - 1.0) <= tol &&
         std::abs(segment_sum(kSeventhSegmentBegin, kTriadSegmentSize) - 1.0) <= tol;
}

}  // namespace chordlab
