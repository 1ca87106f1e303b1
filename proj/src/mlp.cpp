#include "chordlab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "chordlab/errors.hpp"

namespace chordlab {
namespace {

constexpr int kSegmentBegins[3] = {kRootSegmentBegin, kThirdSegmentBegin, kSeventhSegmentBegin};
constexpr int kSegmentSizes[3] = {kRootSegmentSize, kTriadSegmentSize, kTriadSegmentSize};
constexpr double kMinImprovement = 1e-6;

void check_output_size(const MlpConfig& config) {
  if (config.layer_sizes.size() < 2 || config.layer_sizes.back() != kHipSize)
    throw ConfigError("mlp: network must end in a 19-unit output layer");
  if (config.batch_size < 1) throw ConfigError("mlp: batch_size must be >= 1");
}

// Per-segment softmax over the rows of each column, in place.
void grouped_softmax(Eigen::MatrixXd& z) {
  for (Eigen::Index col = 0; col < z.cols(); ++col) {
    for (int s = 0; s < 3; ++s) {
      auto seg = z.col(col).segment(kSegmentBegins[s], kSegmentSizes[s]);
      const double peak = seg.maxCoeff();
      seg = (seg.array() - peak).exp();
      seg /= seg.sum();
    }
  }
}

struct ForwardPass {
  std::vector<Eigen::MatrixXd> activations;  // [0]=input, last=softmax output
};

ForwardPass run_forward(const MlpModel& model, const Eigen::MatrixXd& input) {
  if (!input.allFinite()) throw ConfigError("mlp: non-finite input features");
  ForwardPass pass;
  pass.activations.reserve(model.weights.size() + 1);
  pass.activations.push_back(input);
  for (size_t l = 0; l < model.weights.size(); ++l) {
    Eigen::MatrixXd z =
        (model.weights[l] * pass.activations.back()).colwise() + model.biases[l];
    if (l + 1 < model.weights.size())
      z = z.cwiseMax(0.0);  // rectifier hidden layers
    else
      grouped_softmax(z);
    pass.activations.push_back(std::move(z));
  }
  return pass;
}

int segment_argmax(const Eigen::Ref<const Eigen::VectorXd>& col, int begin, int size) {
  int best = 0;
  double best_value = col(begin);
  for (int i = 1; i < size; ++i) {
    if (col(begin + i) > best_value) {
      best_value = col(begin + i);
      best = i;
    }
  }
  return best;
}

}  // namespace

Eigen::MatrixXd MlpModel::forward(const Eigen::MatrixXd& features) const {
  return run_forward(*this, features).activations.back();
}

Ship MlpModel::predict(const std::vector<double>& raw_features) const {
  const auto standardized = apply_standardizer(stats, raw_features);
  Eigen::MatrixXd input =
      Eigen::Map<const Eigen::VectorXd>(standardized.data(),
                                        static_cast<Eigen::Index>(standardized.size()));
  const Eigen::MatrixXd out = forward(input);
  Ship ship{};
  for (int i = 0; i < kHipSize; ++i) ship[static_cast<size_t>(i)] = out(i, 0);
  return ship;
}

MlpModel init_model(const MlpConfig& config) {
  check_output_size(config);
  MlpModel model;
  model.config = config;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (size_t l = 0; l + 1 < config.layer_sizes.size(); ++l) {
    const int fan_in = config.layer_sizes[l];
    const int fan_out = config.layer_sizes[l + 1];
    const double scale = std::sqrt(2.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = scale * normal(rng);
    model.weights.push_back(std::move(w));
    model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return model;
}

double mean_loss(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets) {
  double total = 0.0;
  for (Eigen::Index col = 0; col < predictions.cols(); ++col)
    for (Eigen::Index i = 0; i < predictions.rows(); ++i) {
      const double t = targets(i, col);
      if (t > 0.0) total -= t * std::log(predictions(i, col));
    }
  return total / static_cast<double>(predictions.cols());
}

Gradients gradients(const MlpModel& model, const Eigen::MatrixXd& features,
                    const Eigen::MatrixXd& targets, double* loss_out) {
  if (features.cols() == 0) throw ConfigError("gradients: empty batch");
  const auto pass = run_forward(model, features);
  const Eigen::MatrixXd& predictions = pass.activations.back();
  if (loss_out) *loss_out = mean_loss(predictions, targets);

  const double inv_batch = 1.0 / static_cast<double>(features.cols());
  Gradients grads;
  grads.weights.resize(model.weights.size());
  grads.biases.resize(model.biases.size());

  // Grouped softmax + cross-entropy collapses to (p - t) / batch.
  Eigen::MatrixXd delta = (predictions - targets) * inv_batch;
  for (size_t l = model.weights.size(); l-- > 0;) {
    grads.weights[l].noalias() = delta * pass.activations[l].transpose();
    grads.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = model.weights[l].transpose() * delta;
      delta = back.cwiseProduct(
          (pass.activations[l].array() > 0.0).cast<double>().matrix());
    }
  }
  return grads;
}

AdamState AdamState::zeros_like(const MlpModel& model) {
  AdamState state;
  for (const auto& w : model.weights) {
    state.m_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    state.v_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : model.biases) {
    state.m_biases.push_back(Eigen::VectorXd::Zero(b.size()));
    state.v_biases.push_back(Eigen::VectorXd::Zero(b.size()));
  }
  return state;
}

namespace {

template <typename Tensor>
void adam_update(Tensor& param, Tensor& m, Tensor& v, const Tensor& grad,
                 const AdamParams& p, double bias1, double bias2) {
  m = p.beta1 * m + (1.0 - p.beta1) * grad;
  v = p.beta2 * v + (1.0 - p.beta2) * grad.cwiseProduct(grad);
  param.array() -=
      p.alpha * (m.array() / bias1) / ((v.array() / bias2).sqrt() + p.eps);
}

}  // namespace

void adam_step(MlpModel& model, AdamState& state, const Gradients& grads,
               const AdamParams& params) {
  ++state.step;
  const double bias1 = 1.0 - std::pow(params.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(params.beta2, static_cast<double>(state.step));
  for (size_t l = 0; l < model.weights.size(); ++l) {
    adam_update(model.weights[l], state.m_weights[l], state.v_weights[l], grads.weights[l],
                params, bias1, bias2);
    adam_update(model.biases[l], state.m_biases[l], state.v_biases[l], grads.biases[l],
                params, bias1, bias2);
  }
}

double validation_accuracy(const MlpModel& model, const Eigen::MatrixXd& features,
                           const Eigen::MatrixXd& targets) {
  if (features.cols() == 0) throw ConfigError("validation_accuracy: empty set");
  const Eigen::MatrixXd predictions = model.forward(features);
  double total = 0.0;
  for (Eigen::Index col = 0; col < predictions.cols(); ++col) {
    int agree = 0;
    for (int s = 0; s < 3; ++s) {
      if (segment_argmax(predictions.col(col), kSegmentBegins[s], kSegmentSizes[s]) ==
          segment_argmax(targets.col(col), kSegmentBegins[s], kSegmentSizes[s]))
        ++agree;
    }
    total += agree / 3.0;
  }
  return total / static_cast<double>(predictions.cols());
}

MlpModel train(const Dataset& train_set, const Dataset& val_set, const MlpConfig& config,
               const StandardizerStats& stats) {
  if (train_set.features.cols() == 0 || val_set.features.cols() == 0)
    throw TrainingError("train: empty train or validation split");
  MlpModel model = init_model(config);
  model.stats = stats;
  AdamState adam = AdamState::zeros_like(model);

  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::Index> order(static_cast<size_t>(train_set.features.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  MlpModel best = model;
  double best_accuracy = -1.0;
  int epochs_since_best = 0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    size_t batches = 0;
    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(config.batch_size)) {
      const size_t count = std::min<size_t>(static_cast<size_t>(config.batch_size),
                                            order.size() - begin);
      Eigen::MatrixXd x(train_set.features.rows(), static_cast<Eigen::Index>(count));
      Eigen::MatrixXd y(train_set.targets.rows(), static_cast<Eigen::Index>(count));
      for (size_t i = 0; i < count; ++i) {
        x.col(static_cast<Eigen::Index>(i)) = train_set.features.col(order[begin + i]);
        y.col(static_cast<Eigen::Index>(i)) = train_set.targets.col(order[begin + i]);
      }
      double batch_loss = 0.0;
      const Gradients grads = gradients(model, x, y, &batch_loss);
      if (!std::isfinite(batch_loss))
        throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch + 1));
      adam_step(model, adam, grads, config.adam);
      epoch_loss += batch_loss;
      ++batches;
    }

    EpochStats stats_row;
    stats_row.train_loss = epoch_loss / static_cast<double>(batches);
    stats_row.val_accuracy = validation_accuracy(model, val_set.features, val_set.targets);
    model.history.push_back(stats_row);

    if (stats_row.val_accuracy > best_accuracy + kMinImprovement) {
      best_accuracy = stats_row.val_accuracy;
      best.weights = model.weights;
      best.biases = model.biases;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
      if (epochs_since_best >= config.patience_epochs) break;
    }
  }

  best.history = model.history;
  best.stats = stats;
  best.config = config;
  return best;
}

namespace {

constexpr char kModelMagic[8] = {'S', 'H', 'I', 'P', '-', 'D', 'N', 'N'};
constexpr uint32_t kModelVersion = 1;

void put(std::ostream& out, const void* p, size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void get(std::istream& in, void* p, size_t n) {
  if (!in.read(static_cast<char*>(p), static_cast<std::streamsize>(n)))
    throw FormatError("model file: truncated");
}

void put_matrix_row_major(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      put(out, &v, 8);
    }
}

void get_matrix_row_major(std::istream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double v;
      get(in, &v, 8);
      m(r, c) = v;
    }
}

}  // namespace

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("model file: cannot write " + path.string());
  put(out, kModelMagic, 8);
  put(out, &kModelVersion, 4);

  const auto n_sizes = static_cast<uint32_t>(model.config.layer_sizes.size());
  put(out, &n_sizes, 4);
  for (int s : model.config.layer_sizes) {
    const auto v = static_cast<int32_t>(s);
    put(out, &v, 4);
  }
  const int32_t batch = model.config.batch_size, patience = model.config.patience_epochs,
                max_epochs = model.config.max_epochs;
  put(out, &batch, 4);
  put(out, &patience, 4);
  put(out, &max_epochs, 4);
  put(out, &model.config.seed, 8);
  put(out, &model.config.adam.alpha, 8);
  put(out, &model.config.adam.beta1, 8);
  put(out, &model.config.adam.beta2, 8);
  put(out, &model.config.adam.eps, 8);

  const auto dim = static_cast<uint64_t>(model.stats.mean.size());
  put(out, &dim, 8);
  put(out, model.stats.mean.data(), model.stats.mean.size() * 8);
  put(out, model.stats.stddev.data(), model.stats.stddev.size() * 8);

  for (size_t l = 0; l < model.weights.size(); ++l) {
    put_matrix_row_major(out, model.weights[l]);
    put(out, model.biases[l].data(), static_cast<size_t>(model.biases[l].size()) * 8);
  }

  const auto n_history = static_cast<uint64_t>(model.history.size());
  put(out, &n_history, 8);
  for (const auto& row : model.history) {
    put(out, &row.train_loss, 8);
    put(out, &row.val_accuracy, 8);
  }
  if (!out) throw IoError("model file: write failed for " + path.string());
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("model file: cannot open " + path.string());
  char magic[8];
  get(in, magic, 8);
  if (std::memcmp(magic, kModelMagic, 8) != 0)
    throw FormatError("model file: bad magic in " + path.string());
  uint32_t version;
  get(in, &version, 4);
  if (version != kModelVersion)
    throw FormatError("model file: unsupported version " + std::to_string(version));

  MlpModel model;
  uint32_t n_sizes;
  get(in, &n_sizes, 4);
  if (n_sizes < 2 || n_sizes > 64) throw FormatError("model file: implausible layer count");
  model.config.layer_sizes.resize(n_sizes);
  for (auto& s : model.config.layer_sizes) {
    int32_t v;
    get(in, &v, 4);
    if (v < 1) throw FormatError("model file: non-positive layer size");
    s = v;
  }
  if (model.config.layer_sizes.back() != kHipSize)
    throw FormatError("model file: output layer is not 19 units");

  int32_t batch, patience, max_epochs;
  get(in, &batch, 4);
  get(in, &patience, 4);
  get(in, &max_epochs, 4);
  model.config.batch_size = batch;
  model.config.patience_epochs = patience;
  model.config.max_epochs = max_epochs;
  get(in, &model.config.seed, 8);
  get(in, &model.config.adam.alpha, 8);
  get(in, &model.config.adam.beta1, 8);
  get(in, &model.config.adam.beta2, 8);
  get(in, &model.config.adam.eps, 8);

  uint64_t dim;
  get(in, &dim, 8);
  if (dim != static_cast<uint64_t>(model.config.layer_sizes.front()))
    throw FormatError("model file: standardizer dimension mismatch");
  model.stats.mean.resize(dim);
  model.stats.stddev.resize(dim);
  get(in, model.stats.mean.data(), dim * 8);
  get(in, model.stats.stddev.data(), dim * 8);

  for (size_t l = 0; l + 1 < model.config.layer_sizes.size(); ++l) {
    Eigen::MatrixXd w(model.config.layer_sizes[l + 1], model.config.layer_sizes[l]);
    get_matrix_row_major(in, w);
    Eigen::VectorXd b(model.config.layer_sizes[l + 1]);
    get(in, b.data(), static_cast<size_t>(b.size()) * 8);
    model.weights.push_back(std::move(w));
    model.biases.push_back(std::move(b));
  }

  uint64_t n_history;
  get(in, &n_history, 8);
  model.history.resize(n_history);
  for (auto& row : model.history) {
    get(in, &row.train_loss, 8);
    get(in, &row.val_accuracy, 8);
  }
  return model;
}

}  // namespace chordlab
