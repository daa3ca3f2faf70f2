#pragma once

// End-to-end scoring: Jaccard, TF-IDF and attention-CNN scores for a pair,
// fused and classified; dataset evaluation; weight calibration; training of
// a complete model bundle.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "simfuse/cnn.hpp"
#include "simfuse/corpus.hpp"
#include "simfuse/embedding.hpp"
#include "simfuse/fusion.hpp"
#include "simfuse/metrics.hpp"
#include "simfuse/tfidf.hpp"

namespace simfuse {

struct ModelBundle {
  CorpusStats stats;
  EmbeddingTable table;
  CnnParams cnn;
  std::size_t n_max = kDefaultMaxTokens;
  FusionWeights weights = kDefaultWeights;
  FusionParams fusion;
};

// Directory with embeddings.txt, cnn.params, fusion.params and stats.tsv.
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& dir);
// Throws Error naming the file when one is missing or malformed.
ModelBundle load_bundle(const std::filesystem::path& dir);

struct PairScores {
  double jaccard = 0.0;
  double w2vcnn = 0.0;
  double tfidf = 0.0;
  double fused = 0.0;
  Verdict predicted = Verdict::Different;
};

// Jaccard runs on heuristically completed roles; annotated roles are kept.
ScoreTriple component_scores(const LabeledPair& pair, const ModelBundle& bundle);
PairScores score_pair(const LabeledPair& pair, const ModelBundle& bundle);

// Output order follows the dataset regardless of the thread count.
std::vector<PairScores> score_all(const Dataset& dataset, const ModelBundle& bundle,
                                  std::size_t threads = 1);

// Binary: classification metrics of the fused score. Graded: correlations of
// 5 * fused against gold, plus counts with gold binarized at 2.5.
// Throws EmptyEval on an empty dataset.
MetricReport evaluate_scores(const Dataset& dataset, std::span<const double> fused);
MetricReport evaluate(const Dataset& dataset, const ModelBundle& bundle, std::size_t threads = 1);

enum class WeightingFactor { Accuracy, Precision, Recall, F1 };

std::string_view to_string(WeightingFactor f);
std::optional<WeightingFactor> parse_weighting_factor(std::string_view s);
double factor_value(const MetricReport& report, WeightingFactor f);

struct ModelReports {
  MetricReport jaccard;
  MetricReport w2vcnn;
  MetricReport tfidf;
};

// Each scorer on its own, classified with the 0.5 rule. Binary datasets only.
ModelReports standalone_reports(const Dataset& dataset, const ModelBundle& bundle);

FusionWeights calibrate_from_reports(const ModelReports& reports, WeightingFactor factor);
FusionWeights calibrate(const Dataset& validation, const ModelBundle& bundle, WeightingFactor factor);

struct TrainOptions {
  TrainConfig cnn_config;
  TrainConfig fusion_config;
  CnnShape cnn_shape;
  std::size_t n_max = kDefaultMaxTokens;
  FusionMode fusion_mode = FusionMode::Learned;
  WeightingFactor factor = WeightingFactor::Accuracy;
};

// Builds stats, trains the CNN, calibrates weights on `validation` (or the
// training set), then trains the combiner in learned mode. Progress lines go
// to `log` when given: `cnn_epoch`, `fusion_epoch`, `metric`, `weights`.
ModelBundle train_bundle(const Dataset& train, EmbeddingTable table, const TrainOptions& options,
                         const Dataset* validation = nullptr, std::ostream* log = nullptr);

}  // namespace simfuse
