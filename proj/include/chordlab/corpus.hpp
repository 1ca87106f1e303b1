#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chordlab/annotations.hpp"
#include "chordlab/cqt.hpp"
#include "chordlab/hip.hpp"

namespace chordlab {

enum class Split : uint8_t { train = 0, val = 1, test = 2 };

inline constexpr std::array<double, 3> kDefaultSplitRatios = {0.65, 0.10, 0.25};

/// One song's frame-aligned data: per-annotator labels sampled at frame
/// center times and the per-frame averaged profile targets.
struct SongData {
  std::string song_id;
  CqtMatrix cqt;
  std::vector<std::vector<ChordLabel>> labels;  // [annotator][frame]
  std::vector<Ship> targets;                    // [frame]
};

/// Immutable after construction. Frames are enumerated globally in song
/// order, then frame order; `split` follows that enumeration.
struct Corpus {
  std::vector<std::string> annotator_ids;
  std::vector<SongData> songs;
  std::vector<Split> split;  // empty until split_corpus runs

  size_t total_frames() const;
};

/// Sample every annotator's label at each frame's center time and average
/// the per-label profiles into the frame target. Every annotator must
/// cover every song. Tracks are matched to `cqts` by song_id.
Corpus build_corpus(const std::vector<std::vector<AnnotationTrack>>& tracks_by_song,
                    std::vector<std::string> song_ids, std::vector<CqtMatrix> cqts);

/// Exact frame counts for a ratio split: the first two get llround(r*n),
/// the last gets the remainder.
std::array<size_t, 3> split_sizes(size_t n_frames, const std::array<double, 3>& ratios);

/// Frame-wise shuffled split assignment, a pure function of the seed and
/// the global frame enumeration order.
void split_corpus(Corpus& corpus, const std::array<double, 3>& ratios, uint64_t seed);

/// Distinct labels the annotator uses on frames of the given split.
Vocabulary vocabulary_from_split(const Corpus& corpus, size_t annotator, Split split);

/// Corpus manifest: song list with audio and per-annotator LAB paths,
/// plus the split seed and ratios. Stored as JSON; relative paths are
/// resolved against the manifest's directory.
struct Manifest {
  uint64_t seed = 0;
  std::array<double, 3> ratios = kDefaultSplitRatios;
  struct Song {
    std::string id;
    std::filesystem::path audio;
    std::map<std::string, std::filesystem::path> labs;  // annotator -> path
  };
  std::vector<Song> songs;

  std::vector<std::string> annotator_ids() const;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

}  // namespace chordlab
