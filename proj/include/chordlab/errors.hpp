#pragma once

#include <stdexcept>
#include <string>

namespace chordlab {

/// Malformed textual input (chord labels, LAB lines, manifests).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Unsupported or corrupted binary file content (WAV, model, cache).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration values (ratios, Nyquist violations, shapes).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Training diverged or was given unusable data.
struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

/// A score is undefined (e.g. every frame excluded by the metric).
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chordlab
