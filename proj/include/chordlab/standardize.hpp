#pragma once

#include <vector>

#include <Eigen/Core>

namespace chordlab {

/// Per-dimension log(1+x) compression followed by standardization. Stats
/// are fit on the training split only and travel with the model.
struct StandardizerStats {
  std::vector<double> mean;    // of log1p(x)
  std::vector<double> stddev;  // of log1p(x); values < 1e-12 clamped to 1

  bool operator==(const StandardizerStats&) const = default;
};

StandardizerStats fit_standardizer(const std::vector<std::vector<double>>& features);
std::vector<double> apply_standardizer(const StandardizerStats& stats,
                                       const std::vector<double>& features);

/// Matrix variants; columns are feature vectors.
StandardizerStats fit_standardizer(const Eigen::MatrixXd& features);
void apply_standardizer_in_place(const StandardizerStats& stats, Eigen::MatrixXd& features);

}  // namespace chordlab
