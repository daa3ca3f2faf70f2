#include "simfuse/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using simfuse::kernels::KernelSet;

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    simd_ = simfuse::kernels::avx2();
    if (!simd_) GTEST_SKIP() << "no SIMD kernel set on this CPU";
  }
  const KernelSet* simd_ = nullptr;
  const KernelSet& ref_ = simfuse::kernels::scalar();
};

TEST_F(KernelEquivalence, DotMatchesScalarAcrossTailLengths) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 0; n <= 67; ++n) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    double want = ref_.dot(x.data(), y.data(), n);
    double got = simd_->dot(x.data(), y.data(), n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]);
    EXPECT_NEAR(got, want, 1e-14 * (mag + 1.0)) << "n=" << n;
  }
}

TEST_F(KernelEquivalence, DotIsSymmetricBitwise) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {1u, 4u, 9u, 48u}) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    EXPECT_EQ(simd_->dot(x.data(), y.data(), n), simd_->dot(y.data(), x.data(), n));
  }
}

TEST_F(KernelEquivalence, AxpyAndScaleMatchScalar) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n <= 37; ++n) {
    auto x = random_vec(rng, n);
    auto y0 = random_vec(rng, n);
    auto y_ref = y0;
    auto y_simd = y0;
    ref_.axpy(0.37, x.data(), y_ref.data(), n);
    simd_->axpy(0.37, x.data(), y_simd.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y_simd[i], y_ref[i], 1e-15 * (std::abs(y_ref[i]) + 1.0));

    std::vector<double> s_ref(n), s_simd(n);
    ref_.scale(-1.25, x.data(), s_ref.data(), n);
    simd_->scale(-1.25, x.data(), s_simd.data(), n);
    EXPECT_EQ(s_ref, s_simd);  // a single multiply rounds identically
  }
}

TEST(Kernels, FindAndSetActive) {
  const KernelSet& before = simfuse::kernels::active();
  ASSERT_NE(simfuse::kernels::find("scalar"), nullptr);
  EXPECT_EQ(simfuse::kernels::find("nope"), nullptr);
  simfuse::kernels::set_active(simfuse::kernels::scalar());
  EXPECT_EQ(simfuse::kernels::active().name, "scalar");
  std::vector<double> x{1, 2, 3};
  EXPECT_EQ(simfuse::kernels::dot(x, x), 14.0);
  simfuse::kernels::set_active(before);
}

}  // namespace
