#include "simfuse/pipeline.hpp"

#include <fstream>
#include <memory>
#include <ostream>
#include <thread>

#include "simfuse/attention.hpp"
#include "simfuse/error.hpp"
#include "simfuse/jaccard.hpp"
#include "simfuse/text_io.hpp"

namespace simfuse {
namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

template <class Fn>
auto with_file_context(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const FormatError& e) {
    throw FormatError(path.filename().string() + ": " + e.what());
  }
}

}  // namespace

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "embeddings.txt");
    write_text_embeddings(out, bundle.table);
  }
  {
    auto out = open_out(dir / "cnn.params");
    write_cnn_params(out, bundle.cnn, {bundle.n_max, bundle.table.oov_seed()});
  }
  {
    auto out = open_out(dir / "fusion.params");
    write_fusion_params(out, bundle.weights, bundle.fusion);
  }
  {
    auto out = open_out(dir / "stats.tsv");
    write_stats(out, bundle.stats);
  }
}

ModelBundle load_bundle(const std::filesystem::path& dir) {
  CnnInputSpec spec;
  CnnParams cnn = with_file_context(dir / "cnn.params", [&] {
    auto in = open_in(dir / "cnn.params");
    return read_cnn_params(in, &spec);
  });
  EmbeddingTable table = with_file_context(dir / "embeddings.txt", [&] {
    auto in = open_in(dir / "embeddings.txt");
    return load_text_embeddings(in, spec.oov_seed);
  });
  if (table.dim() != cnn.shape.dim) {
    throw DimensionError("embedding dimension " + std::to_string(table.dim()) +
                         " does not match cnn.params dimension " + std::to_string(cnn.shape.dim));
  }
  auto [weights, fusion] = with_file_context(dir / "fusion.params", [&] {
    auto in = open_in(dir / "fusion.params");
    return read_fusion_params(in);
  });
  CorpusStats stats = with_file_context(dir / "stats.tsv", [&] {
    auto in = open_in(dir / "stats.tsv");
    return read_stats(in);
  });
  return ModelBundle{std::move(stats), std::move(table), std::move(cnn), spec.n_max, weights,
                     std::move(fusion)};
}

ScoreTriple component_scores(const LabeledPair& pair, const ModelBundle& bundle) {
  ScoreTriple s;
  s.jaccard = jaccard_score(assign_roles_heuristic(pair.a), assign_roles_heuristic(pair.b));
  s.tfidf = tfidf_score(pair, bundle.stats);
  AttendedPair att = attend(bundle.table, pair.a, pair.b, bundle.n_max);
  s.w2vcnn = cnn_forward(bundle.cnn, att.a, att.b);
  return s;
}

PairScores score_pair(const LabeledPair& pair, const ModelBundle& bundle) {
  const ScoreTriple s = component_scores(pair, bundle);
  PairScores out{s.jaccard, s.w2vcnn, s.tfidf, 0.0, Verdict::Different};
  out.fused = fuse(s, bundle.weights, bundle.fusion);
  out.predicted = classify(out.fused);
  return out;
}

std::vector<PairScores> score_all(const Dataset& dataset, const ModelBundle& bundle,
                                  std::size_t threads) {
  std::vector<PairScores> out(dataset.size());
  threads = std::max<std::size_t>(1, std::min(threads, dataset.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < dataset.size(); ++i) out[i] = score_pair(dataset.pairs[i], bundle);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < dataset.size(); i += threads) {
            out[i] = score_pair(dataset.pairs[i], bundle);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

MetricReport evaluate_scores(const Dataset& dataset, std::span<const double> fused) {
  if (dataset.empty()) throw EmptyEval();
  if (fused.size() != dataset.size()) throw DimensionError("evaluate: one score per pair required");
  const std::size_t n = dataset.size();
  std::unique_ptr<bool[]> predicted(new bool[n]);
  std::unique_ptr<bool[]> gold(new bool[n]);
  for (std::size_t i = 0; i < n; ++i) {
    predicted[i] = classify(fused[i]) == Verdict::Similar;
    const double label = dataset.pairs[i].label;
    gold[i] = dataset.label_kind == LabelKind::Binary ? label >= 0.5
                                                      : classify(label / 5.0) == Verdict::Similar;
  }
  MetricReport report = prf_metrics(confusion_counts({predicted.get(), n}, {gold.get(), n}));
  if (dataset.label_kind == LabelKind::Graded) {
    std::vector<double> scaled(n);
    std::vector<double> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = scale_to_sts(fused[i]);
      labels[i] = dataset.pairs[i].label;
    }
    const Correlations c = rank_correlations(scaled, labels);
    report.pearson = c.pearson;
    report.spearman = c.spearman;
  }
  return report;
}

MetricReport evaluate(const Dataset& dataset, const ModelBundle& bundle, std::size_t threads) {
  if (dataset.empty()) throw EmptyEval();
  const auto scores = score_all(dataset, bundle, threads);
  std::vector<double> fused(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) fused[i] = scores[i].fused;
  return evaluate_scores(dataset, fused);
}

std::string_view to_string(WeightingFactor f) {
  switch (f) {
    case WeightingFactor::Accuracy: return "accuracy";
    case WeightingFactor::Precision: return "precision";
    case WeightingFactor::Recall: return "recall";
    case WeightingFactor::F1: return "f1";
  }
  return "accuracy";
}

std::optional<WeightingFactor> parse_weighting_factor(std::string_view s) {
  for (auto f : {WeightingFactor::Accuracy, WeightingFactor::Precision, WeightingFactor::Recall,
                 WeightingFactor::F1}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

double factor_value(const MetricReport& report, WeightingFactor f) {
  switch (f) {
    case WeightingFactor::Accuracy: return report.accuracy;
    case WeightingFactor::Precision: return report.precision;
    case WeightingFactor::Recall: return report.recall;
    case WeightingFactor::F1: return report.f1;
  }
  return report.accuracy;
}

ModelReports standalone_reports(const Dataset& dataset, const ModelBundle& bundle) {
  if (dataset.empty()) throw EmptyEval();
  if (dataset.label_kind != LabelKind::Binary) {
    throw LabelKindError("calibration needs a binary-labeled dataset");
  }
  std::vector<double> jac;
  std::vector<double> cnn;
  std::vector<double> tfi;
  for (const LabeledPair& p : dataset.pairs) {
    const ScoreTriple s = component_scores(p, bundle);
    jac.push_back(s.jaccard);
    cnn.push_back(s.w2vcnn);
    tfi.push_back(s.tfidf);
  }
  return {evaluate_scores(dataset, jac), evaluate_scores(dataset, cnn), evaluate_scores(dataset, tfi)};
}

FusionWeights calibrate_from_reports(const ModelReports& reports, WeightingFactor factor) {
  return calibrate_weights(factor_value(reports.jaccard, factor), factor_value(reports.w2vcnn, factor),
                           factor_value(reports.tfidf, factor));
}

FusionWeights calibrate(const Dataset& validation, const ModelBundle& bundle, WeightingFactor factor) {
  return calibrate_from_reports(standalone_reports(validation, bundle), factor);
}

ModelBundle train_bundle(const Dataset& train, EmbeddingTable table, const TrainOptions& options,
                         const Dataset* validation, std::ostream* log) {
  if (train.label_kind != LabelKind::Binary) throw LabelKindError("training needs a binary-labeled dataset");
  CorpusStats stats = build_stats(train);

  CnnTrainResult cnn = cnn_train(train, table, options.cnn_config, options.cnn_shape, options.n_max,
                                 [&](std::size_t epoch, double loss) {
                                   if (log) *log << "cnn_epoch\t" << epoch << '\t' << text::shortest(loss) << '\n';
                                 });
  ModelBundle bundle{std::move(stats), std::move(table), std::move(cnn.params), options.n_max,
                     kDefaultWeights, FusionParams{}};

  const Dataset& calib = validation ? *validation : train;
  const ModelReports reports = standalone_reports(calib, bundle);
  if (log) {
    for (auto [name, r] : {std::pair{"jaccard", &reports.jaccard}, std::pair{"w2vcnn", &reports.w2vcnn},
                           std::pair{"tfidf", &reports.tfidf}}) {
      *log << "metric\t" << name << '\t' << to_string(options.factor) << '\t'
           << text::shortest(factor_value(*r, options.factor)) << '\n';
    }
  }
  bundle.weights = calibrate_from_reports(reports, options.factor);

  if (options.fusion_mode == FusionMode::Learned) {
    std::vector<FusionSample> samples;
    samples.reserve(train.size());
    for (const LabeledPair& p : train.pairs) samples.push_back({component_scores(p, bundle), p.similar()});
    bundle.fusion = train_fusion(samples, bundle.weights, options.fusion_config,
                                 [&](std::size_t epoch, double loss) {
                                   if (log) *log << "fusion_epoch\t" << epoch << '\t' << text::shortest(loss) << '\n';
                                 });
  } else {
    bundle.fusion = FusionParams{FusionMode::WeightedSum, std::nullopt};
  }
  if (log) {
    *log << "weights\t" << text::shortest(bundle.weights.alpha) << '\t'
         << text::shortest(bundle.weights.beta) << '\t' << text::shortest(bundle.weights.gamma) << '\n';
  }
  return bundle;
}

}  // namespace simfuse
