#include "simfuse/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "nn_common.hpp"
#include "simfuse/attention.hpp"
#include "simfuse/error.hpp"
#include "simfuse/kernels.hpp"
#include "simfuse/text_io.hpp"

namespace simfuse {
namespace {

// Pooled features of one sentence plus what backprop needs.
struct Pooled {
  std::vector<double> feature;      // filters
  std::vector<std::size_t> argmax;  // window start per filter
  std::vector<bool> active;         // pre-activation at argmax > 0
};

std::size_t window_rows(const SentenceMatrix& m, std::size_t start, std::size_t width) {
  return std::min(width, m.true_length - std::min(start, m.true_length));
}

std::size_t positions(const SentenceMatrix& m, std::size_t width) {
  return m.true_length >= width ? m.true_length - width + 1 : 1;
}

Pooled conv_pool(const CnnParams& p, const SentenceMatrix& m) {
  const std::size_t F = p.shape.filters;
  const std::size_t k = p.shape.width;
  const std::size_t d = p.shape.dim;
  const std::size_t fan = k * d;
  Pooled out{std::vector<double>(F, 0.0), std::vector<std::size_t>(F, 0), std::vector<bool>(F, false)};
  const std::size_t P = positions(m, k);
  for (std::size_t f = 0; f < F; ++f) {
    const double* w = p.conv_w.data() + f * fan;
    double best = 0.0;
    std::size_t best_t = 0;
    bool best_active = false;
    for (std::size_t t = 0; t < P; ++t) {
      std::size_t len = window_rows(m, t, k) * d;
      double pre = p.conv_b[f] + kernels::active().dot(w, m.data.data() + t * d, len);
      double act = nn::relu(pre);
      if (t == 0 || act > best) {
        best = act;
        best_t = t;
        best_active = pre > 0.0;
      }
    }
    out.feature[f] = best;
    out.argmax[f] = best_t;
    out.active[f] = best_active;
  }
  return out;
}

struct Forward {
  Pooled a;
  Pooled b;
  std::vector<double> z;       // 2F
  std::vector<double> hidden;  // pre-activation, h
  double logit = 0.0;
};

Forward forward(const CnnParams& p, const SentenceMatrix& a, const SentenceMatrix& b) {
  if (a.dim != p.shape.dim || b.dim != p.shape.dim) {
    throw DimensionError("cnn: input dimension " + std::to_string(a.dim) + "/" +
                         std::to_string(b.dim) + " does not match parameters " +
                         std::to_string(p.shape.dim));
  }
  const std::size_t F = p.shape.filters;
  const std::size_t H = p.shape.hidden;
  Forward fw{conv_pool(p, a), conv_pool(p, b), std::vector<double>(2 * F), std::vector<double>(H), 0.0};
  for (std::size_t f = 0; f < F; ++f) {
    fw.z[f] = std::abs(fw.a.feature[f] - fw.b.feature[f]);
    fw.z[F + f] = fw.a.feature[f] * fw.b.feature[f];
  }
  double logit = p.out_b;
  for (std::size_t j = 0; j < H; ++j) {
    fw.hidden[j] = p.dense_b[j] + kernels::active().dot(p.dense_w.data() + j * 2 * F, fw.z.data(), 2 * F);
    logit += p.out_w[j] * nn::relu(fw.hidden[j]);
  }
  fw.logit = logit;
  return fw;
}

void conv_backward(const CnnParams& p, const SentenceMatrix& m, const Pooled& pooled,
                   std::span<const double> dfeature, CnnParams& grad) {
  const std::size_t d = p.shape.dim;
  const std::size_t fan = p.shape.width * d;
  for (std::size_t f = 0; f < p.shape.filters; ++f) {
    if (!pooled.active[f] || dfeature[f] == 0.0) continue;
    const std::size_t t = pooled.argmax[f];
    const std::size_t len = window_rows(m, t, p.shape.width) * d;
    grad.conv_b[f] += dfeature[f];
    kernels::active().axpy(dfeature[f], m.data.data() + t * d, grad.conv_w.data() + f * fan, len);
  }
}

double sign(double x) { return x > 0.0 ? 1.0 : x < 0.0 ? -1.0 : 0.0; }

}  // namespace

CnnParams CnnParams::zeros(const CnnShape& shape) {
  if (shape.filters == 0 || shape.width == 0 || shape.dim == 0 || shape.hidden == 0) {
    throw DimensionError("cnn: every shape dimension must be at least 1");
  }
  CnnParams p;
  p.shape = shape;
  p.conv_w.assign(shape.filters * shape.width * shape.dim, 0.0);
  p.conv_b.assign(shape.filters, 0.0);
  p.dense_w.assign(shape.hidden * 2 * shape.filters, 0.0);
  p.dense_b.assign(shape.hidden, 0.0);
  p.out_w.assign(shape.hidden, 0.0);
  return p;
}

std::vector<std::span<double>> CnnParams::tensors() {
  return {conv_w, conv_b, dense_w, dense_b, out_w, std::span<double>(&out_b, 1)};
}

std::vector<std::span<const double>> CnnParams::tensors() const {
  return {conv_w, conv_b, dense_w, dense_b, out_w, std::span<const double>(&out_b, 1)};
}

CnnParams init_cnn(const CnnShape& shape, std::uint64_t seed) {
  CnnParams p = CnnParams::zeros(shape);
  p.rng_seed = seed;
  std::mt19937_64 rng(seed);
  nn::fill_uniform(p.conv_w, 1.0 / std::sqrt(static_cast<double>(shape.width * shape.dim)), rng);
  nn::fill_uniform(p.dense_w, 1.0 / std::sqrt(static_cast<double>(2 * shape.filters)), rng);
  nn::fill_uniform(p.out_w, 1.0 / std::sqrt(static_cast<double>(shape.hidden)), rng);
  return p;
}

double cnn_forward(const CnnParams& params, const SentenceMatrix& a, const SentenceMatrix& b) {
  return nn::sigmoid(forward(params, a, b).logit);
}

double cnn_loss(const CnnParams& params, const CnnExample& ex) {
  return nn::bce_with_logit(forward(params, ex.a, ex.b).logit, ex.label);
}

CnnParams cnn_gradient(const CnnParams& params, const CnnExample& ex, double* loss) {
  const Forward fw = forward(params, ex.a, ex.b);
  if (loss) *loss = nn::bce_with_logit(fw.logit, ex.label);

  const std::size_t F = params.shape.filters;
  const std::size_t H = params.shape.hidden;
  CnnParams g = CnnParams::zeros(params.shape);

  const double dlogit = nn::sigmoid(fw.logit) - ex.label;
  g.out_b = dlogit;
  std::vector<double> dz(2 * F, 0.0);
  for (std::size_t j = 0; j < H; ++j) {
    g.out_w[j] = dlogit * nn::relu(fw.hidden[j]);
    if (fw.hidden[j] <= 0.0) continue;
    const double du = dlogit * params.out_w[j];
    g.dense_b[j] = du;
    kernels::active().axpy(du, fw.z.data(), g.dense_w.data() + j * 2 * F, 2 * F);
    kernels::active().axpy(du, params.dense_w.data() + j * 2 * F, dz.data(), 2 * F);
  }

  std::vector<double> dfa(F);
  std::vector<double> dfb(F);
  for (std::size_t f = 0; f < F; ++f) {
    const double fa = fw.a.feature[f];
    const double fb = fw.b.feature[f];
    const double s = sign(fa - fb);
    dfa[f] = dz[f] * s + dz[F + f] * fb;
    dfb[f] = -dz[f] * s + dz[F + f] * fa;
  }
  conv_backward(params, ex.a, fw.a, dfa, g);
  conv_backward(params, ex.b, fw.b, dfb, g);
  return g;
}

double gradient_check(const CnnParams& params, const CnnExample& ex, double epsilon) {
  return gradient_check(params, ex, epsilon,
                        [](const CnnParams& p, const CnnExample& e) { return cnn_gradient(p, e); });
}

double gradient_check(const CnnParams& params, const CnnExample& ex, double epsilon,
                      const GradientFn& gradient) {
  if (!(epsilon > 0.0)) throw ConfigError("gradient_check: epsilon must be positive");
  const CnnParams analytic = gradient(params, ex);
  CnnParams probe = params;
  auto probe_tensors = probe.tensors();
  auto grad_tensors = analytic.tensors();
  double worst = 0.0;
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    for (std::size_t i = 0; i < probe_tensors[t].size(); ++i) {
      double& x = probe_tensors[t][i];
      const double saved = x;
      x = saved + epsilon;
      const double up = cnn_loss(probe, ex);
      x = saved - epsilon;
      const double down = cnn_loss(probe, ex);
      x = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double g = grad_tensors[t][i];
      const double denom = std::max({std::abs(g), std::abs(numeric), 1e-12});
      worst = std::max(worst, std::abs(g - numeric) / denom);
    }
  }
  return worst;
}

TrainConfig::TrainConfig(double learning_rate, std::size_t epochs, std::size_t batch_size,
                         std::uint64_t seed)
    : learning_rate_(learning_rate), epochs_(epochs), batch_size_(batch_size), seed_(seed) {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be a positive number");
  }
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
}

CnnTrainResult cnn_train(std::span<const CnnExample> examples, const TrainConfig& config,
                         const CnnShape& shape, const EpochCallback& on_epoch) {
  CnnTrainResult result{init_cnn(shape, config.seed()), {}};
  if (examples.empty()) throw EmptyCorpus();
  CnnParams& params = result.params;

  std::mt19937_64 rng(config.seed() ^ 0x5eedf00dULL);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= config.epochs(); ++epoch) {
    nn::shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size()) {
      const std::size_t end = std::min(order.size(), start + config.batch_size());
      CnnParams sum = CnnParams::zeros(shape);
      auto sum_t = sum.tensors();
      for (std::size_t i = start; i < end; ++i) {
        const CnnParams g = cnn_gradient(params, examples[order[i]]);
        auto g_t = g.tensors();
        for (std::size_t t = 0; t < sum_t.size(); ++t) {
          kernels::active().axpy(1.0, g_t[t].data(), sum_t[t].data(), g_t[t].size());
        }
      }
      const double step = -config.learning_rate() / static_cast<double>(end - start);
      auto p_t = params.tensors();
      for (std::size_t t = 0; t < p_t.size(); ++t) {
        kernels::active().axpy(step, sum_t[t].data(), p_t[t].data(), p_t[t].size());
      }
    }
    double total = 0.0;
    for (const CnnExample& ex : examples) total += cnn_loss(params, ex);
    const double mean = total / static_cast<double>(examples.size());
    result.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return result;
}

CnnTrainResult cnn_train(const Dataset& dataset, const EmbeddingTable& table,
                         const TrainConfig& config, CnnShape shape, std::size_t n_max,
                         const EpochCallback& on_epoch) {
  if (dataset.label_kind != LabelKind::Binary) {
    throw LabelKindError("cnn_train needs a binary-labeled dataset");
  }
  if (dataset.empty()) throw EmptyCorpus();
  shape.dim = table.dim();
  std::vector<CnnExample> examples;
  examples.reserve(dataset.size());
  for (const LabeledPair& p : dataset.pairs) {
    AttendedPair att = attend(table, p.a, p.b, n_max);
    examples.push_back({std::move(att.a), std::move(att.b), p.similar() ? 1.0 : 0.0});
  }
  return cnn_train(examples, config, shape, on_epoch);
}

namespace {

constexpr std::string_view kTensorNames[] = {"conv_w", "conv_b", "dense_w", "dense_b", "out_w", "out_b"};

std::size_t tensor_rows(const CnnShape& s, std::size_t t) {
  switch (t) {
    case 0: return s.filters;
    case 2: return s.hidden;
    default: return 1;
  }
}

std::string next_line(std::istream& in, std::size_t& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!text::trim(line).empty()) return line;
  }
  throw FormatError("unexpected end of cnn parameter file", lineno);
}

std::uint64_t expect_scalar(std::istream& in, std::size_t& lineno, std::string_view name) {
  const std::string line = next_line(in, lineno);
  auto fields = text::split_ws(line);
  if (fields.size() != 2 || fields[0] != name) {
    throw FormatError("expected '" + std::string(name) + " <value>'", lineno);
  }
  auto v = text::parse_int(fields[1]);
  if (!v || *v < 0) throw FormatError("bad value for " + std::string(name), lineno);
  return static_cast<std::uint64_t>(*v);
}

}  // namespace

void write_cnn_params(std::ostream& out, const CnnParams& params, const CnnInputSpec& spec) {
  const CnnShape& s = params.shape;
  out << "simfuse-cnn v1 " << s.filters << ' ' << s.width << ' ' << s.dim << ' ' << s.hidden << '\n';
  out << "rng_seed " << params.rng_seed << '\n';
  out << "n_max " << spec.n_max << '\n';
  out << "oov_seed " << spec.oov_seed << '\n';
  auto tensors = params.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    const std::size_t rows = tensor_rows(s, t);
    const std::size_t cols = tensors[t].size() / rows;
    out << kTensorNames[t] << ' ' << rows << ' ' << cols << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (c) out << ' ';
        out << text::exact17(tensors[t][r * cols + c]);
      }
      out << '\n';
    }
  }
}

CnnParams read_cnn_params(std::istream& in, CnnInputSpec* spec) {
  std::size_t lineno = 0;
  const std::string header_line = next_line(in, lineno);
  auto header = text::split_ws(header_line);
  if (header.size() != 6 || header[0] != "simfuse-cnn" || header[1] != "v1") {
    throw FormatError("not a simfuse-cnn v1 file", lineno);
  }
  CnnShape shape;
  std::size_t* dims[] = {&shape.filters, &shape.width, &shape.dim, &shape.hidden};
  for (std::size_t i = 0; i < 4; ++i) {
    auto v = text::parse_int(header[i + 2]);
    if (!v || *v < 1) throw FormatError("bad shape in header", lineno);
    *dims[i] = static_cast<std::size_t>(*v);
  }
  CnnParams p = CnnParams::zeros(shape);
  p.rng_seed = expect_scalar(in, lineno, "rng_seed");
  CnnInputSpec s;
  s.n_max = static_cast<std::size_t>(expect_scalar(in, lineno, "n_max"));
  s.oov_seed = expect_scalar(in, lineno, "oov_seed");
  if (s.n_max == 0) throw FormatError("n_max must be at least 1", lineno);

  auto tensors = p.tensors();
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    const std::string sec_line = next_line(in, lineno);
    auto sec = text::split_ws(sec_line);
    const std::size_t rows = tensor_rows(shape, t);
    const std::size_t cols = tensors[t].size() / rows;
    if (sec.size() != 3 || sec[0] != kTensorNames[t] || text::parse_int(sec[1]) != static_cast<long long>(rows) ||
        text::parse_int(sec[2]) != static_cast<long long>(cols)) {
      throw FormatError("expected section '" + std::string(kTensorNames[t]) + " " +
                            std::to_string(rows) + " " + std::to_string(cols) + "'",
                        lineno);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string row_line = next_line(in, lineno);
      auto vals = text::split_ws(row_line);
      if (vals.size() != cols) throw FormatError("wrong number of values in row", lineno);
      for (std::size_t c = 0; c < cols; ++c) {
        auto v = text::parse_double(vals[c]);
        if (!v || !std::isfinite(*v)) throw FormatError("non-finite parameter value", lineno);
        tensors[t][r * cols + c] = *v;
      }
    }
  }
  if (spec) *spec = s;
  return p;
}

}  // namespace simfuse
