#pragma once

// Dense double-precision inner loops used by the attention grid, the
// convolution and the dense layers. Each kernel set is a table of plain
// function pointers; the scalar set is the reference and every other set is
// tested for equivalence against it.

#include <cstddef>
#include <span>
#include <string_view>

namespace simfuse::kernels {

struct KernelSet {
  std::string_view name;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] = a * x[i]
  void (*scale)(double a, const double* x, double* y, std::size_t n);
};

const KernelSet& scalar();

// nullptr when the set was not compiled in or the running CPU lacks it.
const KernelSet* avx2();

// The set used by the library. Chosen on first use: SIMFUSE_KERNELS=scalar|avx2
// if set and available, otherwise the widest supported set.
const KernelSet& active();

// Not thread-safe with respect to concurrent kernel calls; intended for tests
// and for start-up configuration.
void set_active(const KernelSet& set);

// Looks a set up by name; nullptr if unknown or unavailable.
const KernelSet* find(std::string_view name);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void scale(double a, std::span<const double> x, std::span<double> y) {
  active().scale(a, x.data(), y.data(), x.size());
}

}  // namespace simfuse::kernels
