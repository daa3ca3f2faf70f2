#pragma once

// Small numeric helpers shared by the CNN scorer and the fusion combiner.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace simfuse::nn {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// Cross-entropy of sigmoid(logit) against label y in {0, 1}.
inline double bce_with_logit(double logit, double y) {
  return (1.0 - y) * softplus(logit) + y * softplus(-logit);
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Uniform [0, 1) from the top 53 bits; portable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void fill_uniform(std::span<double> out, double bound, std::mt19937_64& rng) {
  for (double& x : out) x = (2.0 * unit_uniform(rng) - 1.0) * bound;
}

// Fisher-Yates with modulo draws; portable, unlike std::shuffle.
inline void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace simfuse::nn
