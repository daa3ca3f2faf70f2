#pragma once

// Late fusion of the three scores. Per-model weights come from a softmax over
// each model's validation metric; the weighted triple is either summed or fed
// to a small learned combiner.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "simfuse/cnn.hpp"

namespace simfuse {

struct FusionWeights {
  double alpha = 1.0 / 3.0;  // jaccard
  double beta = 1.0 / 3.0;   // word2vec-cnn
  double gamma = 1.0 / 3.0;  // tf-idf

  bool operator==(const FusionWeights&) const = default;
};

// The weights the reference experiments settled on (accuracy-derived).
inline constexpr FusionWeights kDefaultWeights{0.38, 0.40, 0.22};

struct ScoreTriple {
  double jaccard = 0.0;
  double w2vcnn = 0.0;
  double tfidf = 0.0;
};

enum class FusionMode { WeightedSum, Learned };

std::string_view to_string(FusionMode mode);
std::optional<FusionMode> parse_fusion_mode(std::string_view s);

inline constexpr std::size_t kFusionHidden = 4;

struct FusionNet {
  std::size_t hidden = kFusionHidden;
  std::vector<double> w;      // hidden x 3
  std::vector<double> b;      // hidden
  std::vector<double> out_w;  // hidden
  double out_b = 0.0;

  static FusionNet zeros(std::size_t hidden = kFusionHidden);
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  bool operator==(const FusionNet&) const = default;
};

struct FusionParams {
  FusionMode mode = FusionMode::WeightedSum;
  std::optional<FusionNet> net;

  bool operator==(const FusionParams&) const = default;
};

// softmax(metric_jaccard, metric_w2vcnn, metric_tfidf) -> (alpha, beta, gamma).
FusionWeights calibrate_weights(double metric_jaccard, double metric_w2vcnn, double metric_tfidf);

// Result in [0, 1]. Throws ConfigError for learned mode without a net.
double fuse(const ScoreTriple& scores, const FusionWeights& weights, const FusionParams& params);

enum class Verdict { Similar, Different };

std::string_view to_string(Verdict v);

// Similar iff |score - 1| <= |score - 0|, i.e. score >= 0.5.
Verdict classify(double score);

inline double scale_to_sts(double score) { return 5.0 * score; }

struct FusionSample {
  ScoreTriple scores;
  bool similar = false;
};

// SGD on cross-entropy over the weighted triples. Throws DegenerateData when
// the samples do not contain both labels.
FusionParams train_fusion(std::span<const FusionSample> samples, const FusionWeights& weights,
                          const TrainConfig& config, const EpochCallback& on_epoch = {});

// `simfuse-fusion v1`, then `alpha beta gamma`, then `mode <name>`, then the
// net tensors in the cnn file's section style when present.
void write_fusion_params(std::ostream& out, const FusionWeights& weights, const FusionParams& params);
std::pair<FusionWeights, FusionParams> read_fusion_params(std::istream& in);

}  // namespace simfuse
