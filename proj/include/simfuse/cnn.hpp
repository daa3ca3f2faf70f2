#pragma once

// Convolution + max-over-time pooling scorer for attention-weighted sentence
// matrices, with a small dense head and a plain SGD trainer.
//
// Shared filters run over both sentences. The pooled features f_a, f_b are
// combined as (|f_a - f_b|, f_a * f_b) so the score is exactly symmetric in
// its arguments; the head is sigmoid(out . relu(dense . z + b) + b0).
// Pooling only visits window positions that start on a true token, so
// padding rows never change the result.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "simfuse/corpus.hpp"
#include "simfuse/embedding.hpp"

namespace simfuse {

struct CnnShape {
  std::size_t filters = 32;
  std::size_t width = 3;
  std::size_t dim = 0;
  std::size_t hidden = 16;

  bool operator==(const CnnShape&) const = default;
};

struct CnnParams {
  CnnShape shape;
  std::vector<double> conv_w;   // filters x (width * dim)
  std::vector<double> conv_b;   // filters
  std::vector<double> dense_w;  // hidden x (2 * filters)
  std::vector<double> dense_b;  // hidden
  std::vector<double> out_w;    // hidden
  double out_b = 0.0;
  std::uint64_t rng_seed = 0;

  // All-zero tensors of the given shape. Throws DimensionError on a zero size.
  static CnnParams zeros(const CnnShape& shape);

  // Every trainable tensor, in serialization order (out_b last, length 1).
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;

  bool operator==(const CnnParams&) const = default;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
CnnParams init_cnn(const CnnShape& shape, std::uint64_t seed);

// Probability in (0, 1) that the pair is similar.
double cnn_forward(const CnnParams& params, const SentenceMatrix& a, const SentenceMatrix& b);

struct CnnExample {
  SentenceMatrix a;
  SentenceMatrix b;
  double label = 0.0;  // 1 similar, 0 different
};

// Binary cross-entropy of the forward pass.
double cnn_loss(const CnnParams& params, const CnnExample& ex);

// Gradient of cnn_loss, laid out like the parameters (rng_seed unused).
CnnParams cnn_gradient(const CnnParams& params, const CnnExample& ex, double* loss = nullptr);

using GradientFn = std::function<CnnParams(const CnnParams&, const CnnExample&)>;

// Max over parameters of |g - g_num| / max(|g|, |g_num|, 1e-12), with g_num
// from central differences at +/- epsilon.
double gradient_check(const CnnParams& params, const CnnExample& ex, double epsilon);
double gradient_check(const CnnParams& params, const CnnExample& ex, double epsilon,
                      const GradientFn& gradient);

class TrainConfig {
 public:
  // Throws ConfigError unless learning_rate > 0, epochs >= 1, batch_size >= 1.
  TrainConfig(double learning_rate = 0.05, std::size_t epochs = 200, std::size_t batch_size = 16,
              std::uint64_t seed = 42);

  double learning_rate() const { return learning_rate_; }
  std::size_t epochs() const { return epochs_; }
  std::size_t batch_size() const { return batch_size_; }
  std::uint64_t seed() const { return seed_; }

 private:
  double learning_rate_;
  std::size_t epochs_;
  std::size_t batch_size_;
  std::uint64_t seed_;
};

struct CnnTrainResult {
  CnnParams params;
  // Mean loss over the whole training set after each epoch.
  std::vector<double> epoch_losses;

  double final_loss() const { return epoch_losses.empty() ? 0.0 : epoch_losses.back(); }
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Mini-batch SGD on cross-entropy. Attention inputs are computed once up front.
// Deterministic for a fixed seed. Throws LabelKindError on graded data.
CnnTrainResult cnn_train(const Dataset& dataset, const EmbeddingTable& table,
                         const TrainConfig& config, CnnShape shape = {},
                         std::size_t n_max = kDefaultMaxTokens, const EpochCallback& on_epoch = {});

// Lower-level trainer over prepared examples; shape.dim must match them.
CnnTrainResult cnn_train(std::span<const CnnExample> examples, const TrainConfig& config,
                         const CnnShape& shape, const EpochCallback& on_epoch = {});

// Input settings stored alongside the parameters.
struct CnnInputSpec {
  std::size_t n_max = kDefaultMaxTokens;
  std::uint64_t oov_seed = 0;

  bool operator==(const CnnInputSpec&) const = default;
};

// `simfuse-cnn v1 F k d h` header, scalar settings, then one `name rows cols`
// section per tensor with 17-significant-digit values.
void write_cnn_params(std::ostream& out, const CnnParams& params, const CnnInputSpec& spec = {});
CnnParams read_cnn_params(std::istream& in, CnnInputSpec* spec = nullptr);

}  // namespace simfuse
