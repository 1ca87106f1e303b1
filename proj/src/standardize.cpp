#include "chordlab/standardize.hpp"

#include <cmath>

#include "chordlab/errors.hpp"

namespace chordlab {
namespace {
constexpr double kClampThreshold = 1e-12;
}

StandardizerStats fit_standardizer(const Eigen::MatrixXd& features) {
  if (features.cols() == 0) throw ConfigError("fit_standardizer: no feature vectors");
  const auto dims = features.rows();
  const auto count = features.cols();
  StandardizerStats stats;
  stats.mean.resize(static_cast<size_t>(dims));
  stats.stddev.resize(static_cast<size_t>(dims));
  for (Eigen::Index d = 0; d < dims; ++d) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) sum += std::log1p(features(d, i));
    const double mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
      const double delta = std::log1p(features(d, i)) - mean;
      var += delta * delta;
    }
    var /= static_cast<double>(count);
    double sd = std::sqrt(var);
    if (sd < kClampThreshold) sd = 1.0;
    stats.mean[static_cast<size_t>(d)] = mean;
    stats.stddev[static_cast<size_t>(d)] = sd;
  }
  return stats;
}

void apply_standardizer_in_place(const StandardizerStats& stats, Eigen::MatrixXd& features) {
  if (static_cast<size_t>(features.rows()) != stats.mean.size())
    throw ConfigError("apply_standardizer: dimension mismatch");
  for (Eigen::Index i = 0; i < features.cols(); ++i)
    for (Eigen::Index d = 0; d < features.rows(); ++d)
      features(d, i) = (std::log1p(features(d, i)) - stats.mean[static_cast<size_t>(d)]) /
                       stats.stddev[static_cast<size_t>(d)];
}

StandardizerStats fit_standardizer(const std::vector<std::vector<double>>& features) {
  if (features.empty()) throw ConfigError("fit_standardizer: no feature vectors");
  const auto dims = static_cast<Eigen::Index>(features.front().size());
  Eigen::MatrixXd m(dims, static_cast<Eigen::Index>(features.size()));
  for (size_t i = 0; i < features.size(); ++i)
    m.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXd>(features[i].data(), dims);
  return fit_standardizer(m);
}

std::vector<double> apply_standardizer(const StandardizerStats& stats,
                                       const std::vector<double>& features) {
  if (features.size() != stats.mean.size())
    throw ConfigError("apply_standardizer: dimension mismatch");
  std::vector<double> out(features.size());
  for (size_t d = 0; d < features.size(); ++d)
    out[d] = (std::log1p(features[d]) - stats.mean[d]) / stats.stddev[d];
  return out;
}

}  // namespace chordlab
