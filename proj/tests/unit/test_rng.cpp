#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "ciprec/rng.hpp"

namespace ciprec {
namespace {

TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                 {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                 {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, SameStreamSameSequence) {
  CounterRng a(42, {StreamTag::kNoise, 3, 7});
  CounterRng b(42, {StreamTag::kNoise, 3, 7});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, DistinctStreamsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint32_t tag = 0; tag < 5; ++tag)
    for (std::uint32_t major = 0; major < 4; ++major)
      for (std::uint32_t minor = 0; minor < 4; ++minor)
        firsts.insert(CounterRng(1, {static_cast<StreamTag>(tag), major, minor}).next_u64());
  EXPECT_EQ(firsts.size(), 5u * 4u * 4u);
  EXPECT_NE(CounterRng(1).next_u64(), CounterRng(2).next_u64());
}

TEST(CounterRng, OutputMatchesBlockLayout) {
  CounterRng rng(0x0123456789abcdefull, {StreamTag::kChannel, 5, 9});
  const auto block = philox4x32_10({0, 1, 5, 9}, {0x89abcdef, 0x01234567});
  EXPECT_EQ(rng.next_u64(), (std::uint64_t{block[1]} << 32) | block[0]);
  EXPECT_EQ(rng.next_u64(), (std::uint64_t{block[3]} << 32) | block[2]);
  EXPECT_EQ(rng.blocks_used(), 1u);
  rng.next_u64();
  EXPECT_EQ(rng.blocks_used(), 2u);
}

TEST(CounterRng, UniformInUnitInterval) {
  CounterRng rng(7);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(CounterRng, UniformIndexCoversRange) {
  CounterRng rng(11);
  std::vector<int> counts(8, 0);
  const int n = 80000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_index(8)];
  // Chi-square with 7 dof; 24.32 is the 0.999 quantile.
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 8.0) * (c - n / 8.0) / (n / 8.0);
  EXPECT_LT(chi2, 24.32);
  EXPECT_THROW(rng.uniform_index(0), std::invalid_argument);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

TEST(CounterRng, NormalPassesKolmogorovSmirnov) {
  CounterRng rng(2024, {StreamTag::kGeneric, 1, 0});
  const std::size_t n = 20000;
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  std::sort(v.begin(), v.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf(v[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  // Critical value at alpha = 1e-3.
  EXPECT_LT(d, 1.9495 / std::sqrt(static_cast<double>(n)));
}

TEST(CounterRng, ComplexNormalHasUnitPower) {
  CounterRng rng(5);
  const int n = 200000;
  double power = 0.0, re2 = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.complex_normal();
    power += std::norm(z);
    re2 += z.real() * z.real();
    cross += z.real() * z.imag();
  }
  EXPECT_NEAR(power / n, 1.0, 0.01);
  EXPECT_NEAR(re2 / n, 0.5, 0.01);
  EXPECT_NEAR(cross / n, 0.0, 0.01);
}

TEST(DeriveSeed, DependsOnEveryInput) {
  const std::uint64_t base = derive_seed(1, 2, 3);
  EXPECT_EQ(base, derive_seed(1, 2, 3));
  EXPECT_NE(base, derive_seed(2, 2, 3));
  EXPECT_NE(base, derive_seed(1, 3, 3));
  EXPECT_NE(base, derive_seed(1, 2, 4));
  EXPECT_NE(derive_seed(1, 2, 0), derive_seed(1, 0, 2));
}

}  // namespace
}  // namespace ciprec
