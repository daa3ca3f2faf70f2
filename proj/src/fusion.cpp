#include "simfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "nn_common.hpp"
#include "simfuse/error.hpp"
#include "simfuse/text_io.hpp"

namespace simfuse {
namespace {

std::array<double, 3> weighted(const ScoreTriple& s, const FusionWeights& w) {
  return {w.alpha * s.jaccard, w.beta * s.w2vcnn, w.gamma * s.tfidf};
}

struct NetForward {
  std::array<double, 3> x{};
  std::vector<double> hidden;  // pre-activation
  double logit = 0.0;
};

NetForward net_forward(const FusionNet& net, const std::array<double, 3>& x) {
  NetForward fw{x, std::vector<double>(net.hidden), net.out_b};
  for (std::size_t j = 0; j < net.hidden; ++j) {
    double u = net.b[j];
    for (std::size_t i = 0; i < 3; ++i) u += net.w[j * 3 + i] * x[i];
    fw.hidden[j] = u;
    fw.logit += net.out_w[j] * nn::relu(u);
  }
  return fw;
}

}  // namespace

std::string_view to_string(FusionMode mode) {
  return mode == FusionMode::WeightedSum ? "weighted_sum" : "learned";
}

std::optional<FusionMode> parse_fusion_mode(std::string_view s) {
  if (s == "weighted_sum") return FusionMode::WeightedSum;
  if (s == "learned") return FusionMode::Learned;
  return std::nullopt;
}

std::string_view to_string(Verdict v) { return v == Verdict::Similar ? "similar" : "different"; }

FusionNet FusionNet::zeros(std::size_t hidden) {
  FusionNet n;
  n.hidden = hidden;
  n.w.assign(hidden * 3, 0.0);
  n.b.assign(hidden, 0.0);
  n.out_w.assign(hidden, 0.0);
  return n;
}

std::vector<std::span<double>> FusionNet::tensors() {
  return {w, b, out_w, std::span<double>(&out_b, 1)};
}

std::vector<std::span<const double>> FusionNet::tensors() const {
  return {w, b, out_w, std::span<const double>(&out_b, 1)};
}

FusionWeights calibrate_weights(double metric_jaccard, double metric_w2vcnn, double metric_tfidf) {
  const double peak = std::max({metric_jaccard, metric_w2vcnn, metric_tfidf});
  const double ej = std::exp(metric_jaccard - peak);
  const double ec = std::exp(metric_w2vcnn - peak);
  const double et = std::exp(metric_tfidf - peak);
  const double total = ej + ec + et;
  return {ej / total, ec / total, et / total};
}

double fuse(const ScoreTriple& scores, const FusionWeights& weights, const FusionParams& params) {
  const auto x = weighted(scores, weights);
  if (params.mode == FusionMode::WeightedSum) {
    return std::clamp(x[0] + x[1] + x[2], 0.0, 1.0);
  }
  if (!params.net) throw ConfigError("learned fusion mode requires a trained combiner");
  return nn::sigmoid(net_forward(*params.net, x).logit);
}

Verdict classify(double score) {
  return std::abs(score - 1.0) <= std::abs(score - 0.0) ? Verdict::Similar : Verdict::Different;
}

FusionParams train_fusion(std::span<const FusionSample> samples, const FusionWeights& weights,
                          const TrainConfig& config, const EpochCallback& on_epoch) {
  const bool any_pos = std::any_of(samples.begin(), samples.end(), [](auto& s) { return s.similar; });
  const bool any_neg = std::any_of(samples.begin(), samples.end(), [](auto& s) { return !s.similar; });
  if (!any_pos || !any_neg) throw DegenerateData("fusion training needs both similar and different pairs");

  FusionNet net = FusionNet::zeros();
  std::mt19937_64 rng(config.seed());
  nn::fill_uniform(net.w, 1.0 / std::sqrt(3.0), rng);
  nn::fill_uniform(net.out_w, 1.0 / std::sqrt(static_cast<double>(net.hidden)), rng);

  std::vector<std::array<double, 3>> inputs;
  inputs.reserve(samples.size());
  for (const FusionSample& s : samples) inputs.push_back(weighted(s.scores, weights));

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t H = net.hidden;

  for (std::size_t epoch = 1; epoch <= config.epochs(); ++epoch) {
    nn::shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size()) {
      const std::size_t end = std::min(order.size(), start + config.batch_size());
      FusionNet grad = FusionNet::zeros(H);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t idx = order[k];
        const NetForward fw = net_forward(net, inputs[idx]);
        const double dlogit = nn::sigmoid(fw.logit) - (samples[idx].similar ? 1.0 : 0.0);
        grad.out_b += dlogit;
        for (std::size_t j = 0; j < H; ++j) {
          grad.out_w[j] += dlogit * nn::relu(fw.hidden[j]);
          if (fw.hidden[j] <= 0.0) continue;
          const double du = dlogit * net.out_w[j];
          grad.b[j] += du;
          for (std::size_t i = 0; i < 3; ++i) grad.w[j * 3 + i] += du * fw.x[i];
        }
      }
      const double step = config.learning_rate() / static_cast<double>(end - start);
      auto p_t = net.tensors();
      auto g_t = grad.tensors();
      for (std::size_t t = 0; t < p_t.size(); ++t) {
        for (std::size_t i = 0; i < p_t[t].size(); ++i) p_t[t][i] -= step * g_t[t][i];
      }
    }
    if (on_epoch) {
      double total = 0.0;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        total += nn::bce_with_logit(net_forward(net, inputs[i]).logit, samples[i].similar ? 1.0 : 0.0);
      }
      on_epoch(epoch, total / static_cast<double>(inputs.size()));
    }
  }
  return {FusionMode::Learned, std::move(net)};
}

void write_fusion_params(std::ostream& out, const FusionWeights& weights, const FusionParams& params) {
  out << "simfuse-fusion v1\n";
  out << text::exact17(weights.alpha) << ' ' << text::exact17(weights.beta) << ' '
      << text::exact17(weights.gamma) << '\n';
  out << "mode " << to_string(params.mode) << '\n';
  if (!params.net) return;
  const FusionNet& net = *params.net;
  out << "net " << net.hidden << '\n';
  constexpr std::string_view names[] = {"w", "b", "out_w", "out_b"};
  auto tensors = net.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    const std::size_t rows = t == 0 ? net.hidden : 1;
    const std::size_t cols = tensors[t].size() / rows;
    out << names[t] << ' ' << rows << ' ' << cols << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (c) out << ' ';
        out << text::exact17(tensors[t][r * cols + c]);
      }
      out << '\n';
    }
  }
}

std::pair<FusionWeights, FusionParams> read_fusion_params(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!text::trim(line).empty()) lines.push_back(line);
  }
  std::size_t at = 0;
  auto fields = [&](std::size_t expected_min) {
    if (at >= lines.size()) throw FormatError("unexpected end of fusion parameter file");
    auto f = text::split_ws(lines[at++]);
    if (f.size() < expected_min) throw FormatError("malformed fusion parameter line", at);
    return f;
  };
  auto number = [&](std::string_view s) {
    auto v = text::parse_double(s);
    if (!v || !std::isfinite(*v)) throw FormatError("bad number '" + std::string(s) + "'", at);
    return *v;
  };

  auto header = fields(2);
  if (header[0] != "simfuse-fusion" || header[1] != "v1") throw FormatError("not a simfuse-fusion v1 file", 1);

  auto w = fields(3);
  FusionWeights weights{number(w[0]), number(w[1]), number(w[2])};
  if (std::abs(weights.alpha + weights.beta + weights.gamma - 1.0) > 1e-9) {
    throw FormatError("fusion weights must sum to 1", at);
  }

  auto mode_line = fields(2);
  auto mode = parse_fusion_mode(mode_line[1]);
  if (mode_line[0] != "mode" || !mode) throw FormatError("expected 'mode weighted_sum|learned'", at);
  FusionParams params{*mode, std::nullopt};

  if (at < lines.size()) {
    auto net_line = fields(2);
    auto hidden = text::parse_int(net_line[1]);
    if (net_line[0] != "net" || !hidden || *hidden < 1) throw FormatError("expected 'net <hidden>'", at);
    FusionNet net = FusionNet::zeros(static_cast<std::size_t>(*hidden));
    constexpr std::string_view names[] = {"w", "b", "out_w", "out_b"};
    auto tensors = net.tensors();
    for (std::size_t t = 0; t < tensors.size(); ++t) {
      const std::size_t rows = t == 0 ? net.hidden : 1;
      const std::size_t cols = tensors[t].size() / rows;
      auto sec = fields(3);
      if (sec[0] != names[t]) throw FormatError("expected section '" + std::string(names[t]) + "'", at);
      for (std::size_t r = 0; r < rows; ++r) {
        auto vals = fields(cols);
        if (vals.size() != cols) throw FormatError("wrong number of values in row", at);
        for (std::size_t c = 0; c < cols; ++c) tensors[t][r * cols + c] = number(vals[c]);
      }
    }
    params.net = std::move(net);
  }
  if (params.mode == FusionMode::Learned && !params.net) {
    throw FormatError("learned fusion mode without net tensors");
  }
  return {weights, std::move(params)};
}

}  // namespace simfuse
