#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace simfuse {

struct Confusion {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  bool operator==(const Confusion&) const = default;
};

struct MetricReport {
  Confusion counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> pearson;
  std::optional<double> spearman;
};

// true = similar = positive class. Throws DimensionError on length mismatch.
Confusion confusion_counts(std::span<const bool> predictions, std::span<const bool> labels);

// Any 0/0 ratio is reported as 0. Throws EmptyEval when there are no counts.
MetricReport prf_metrics(const Confusion& counts);

struct Correlations {
  double pearson = 0.0;
  double spearman = 0.0;
};

// Spearman is Pearson over average-tie ranks. Throws DimensionError on a length
// mismatch or fewer than two points, UndefinedCorrelation on zero variance.
Correlations rank_correlations(std::span<const double> predicted, std::span<const double> gold);

double pearson(std::span<const double> x, std::span<const double> y);
std::vector<double> average_ranks(std::span<const double> x);

}  // namespace simfuse
