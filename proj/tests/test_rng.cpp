#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "cesscm/rng.hpp"
#include "error_matchers.hpp"
#include "oracles.hpp"

using namespace cesscm;

// Regression values: a change here breaks reproducibility of every stored
// dataset and report.
TEST(RandomSource, FrozenSequence) {
  RandomSource r(RngStream{42, 7});
  EXPECT_EQ(r.next_u64(), 0x0D9016E6A8C80723ULL);
  EXPECT_EQ(r.next_u64(), 0x392559A7BFEDA3C7ULL);
  EXPECT_EQ(r.next_u64(), 0x70C813ACDAC50DFAULL);
  EXPECT_EQ(RngStream({42, 7}).fork(), (RngStream{18265981081552865739ULL, 0}));
}

TEST(RandomSource, SameStreamSameSequence) {
  RandomSource a(RngStream{1, 2});
  RandomSource b(RngStream{1, 2});
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.normal(), b.normal());
    ASSERT_EQ(a.gamma(0.3), b.gamma(0.3));
  }
}

TEST(RandomSource, DistinctStreamsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    for (std::uint64_t id = 0; id < 64; ++id) {
      first.insert(RandomSource(RngStream{seed, id}).next_u64());
    }
  }
  EXPECT_EQ(first.size(), 16u * 64u);
}

TEST(RandomSource, ForkedStreamsAvoidSmallIds) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t id = 0; id < 256; ++id) {
    firsts.insert(RandomSource(RngStream{5, id}).next_u64());
  }
  for (std::uint64_t r = 0; r < 256; ++r) {
    const RngStream f = RngStream{5, r}.fork();
    EXPECT_EQ(firsts.count(RandomSource(f).next_u64()), 0u);
    EXPECT_EQ(firsts.count(RandomSource(RngStream{f.seed, 1}).next_u64()), 0u);
  }
}

TEST(RandomSource, UniformOpenInterval) {
  RandomSource r(RngStream{3, 0});
  std::vector<double> xs(200000);
  for (auto& x : xs) {
    x = r.uniform();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
  const auto m = oracle::mean_and_se(xs);
  EXPECT_LT(std::abs(m.mean - 0.5), 4.0 * m.se);
}

TEST(RandomSource, NormalMoments) {
  RandomSource r(RngStream{4, 0});
  std::vector<double> x(400000), x2(400000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = r.normal();
    x2[i] = x[i] * x[i];
  }
  const auto m1 = oracle::mean_and_se(x);
  const auto m2 = oracle::mean_and_se(x2);
  EXPECT_LT(std::abs(m1.mean), 4.0 * m1.se);
  EXPECT_LT(std::abs(m2.mean - 1.0), 4.0 * m2.se);
}

TEST(RandomSource, ComplexNormalIsCircular) {
  RandomSource r(RngStream{6, 0});
  const std::size_t n = 400000;
  std::vector<double> abs2(n), re_sq_minus_im_sq(n), re_im(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z = r.complex_normal();
    abs2[i] = std::norm(z);
    re_sq_minus_im_sq[i] = z.real() * z.real() - z.imag() * z.imag();
    re_im[i] = z.real() * z.imag();
  }
  const auto a = oracle::mean_and_se(abs2);
  const auto b = oracle::mean_and_se(re_sq_minus_im_sq);
  const auto c = oracle::mean_and_se(re_im);
  EXPECT_LT(std::abs(a.mean - 1.0), 4.0 * a.se);
  EXPECT_LT(std::abs(b.mean), 4.0 * b.se);
  EXPECT_LT(std::abs(c.mean), 4.0 * c.se);
}

class GammaMoments : public ::testing::TestWithParam<double> {};

TEST_P(GammaMoments, MeanAndVariance) {
  const double shape = GetParam();
  RandomSource r(RngStream{7, static_cast<std::uint64_t>(shape * 1000)});
  const std::size_t n = 300000;
  std::vector<double> x(n), dev2(n);
  for (auto& v : x) {
    v = r.gamma(shape);
    ASSERT_GT(v, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) dev2[i] = (x[i] - shape) * (x[i] - shape);
  const auto m = oracle::mean_and_se(x);
  const auto v = oracle::mean_and_se(dev2);
  EXPECT_LT(std::abs(m.mean - shape), 4.0 * m.se);
  EXPECT_LT(std::abs(v.mean - shape), 4.0 * v.se);
}

INSTANTIATE_TEST_SUITE_P(Shapes, GammaMoments, ::testing::Values(0.25, 0.5, 1.0, 2.0, 7.5));

TEST(RandomSource, ChiSquareMean) {
  RandomSource r(RngStream{8, 0});
  std::vector<double> x(200000);
  for (auto& v : x) v = r.chi_square(6.0);
  const auto m = oracle::mean_and_se(x);
  EXPECT_LT(std::abs(m.mean - 6.0), 4.0 * m.se);
}

TEST(RandomSource, RejectsInvalidGammaShape) {
  RandomSource r(RngStream{});
  EXPECT_CESSCM_ERROR(r.gamma(0.0), ErrorKind::kInvalidArgument);
  EXPECT_CESSCM_ERROR(r.gamma(-1.0), ErrorKind::kInvalidArgument);
}
