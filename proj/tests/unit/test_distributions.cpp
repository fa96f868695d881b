#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/weibull.hpp>

#include <cmath>
#include <vector>

#include "dirgamma/distributions.hpp"
#include "dirgamma/rng.hpp"
#include "stats.hpp"

using namespace dirgamma;

TEST(Rng, SameSeedSameStream) {
  Xoshiro256 a(RngSeed{17}), b(RngSeed{17}), c(RngSeed{18});
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, DerivedSeedsAreDistinct) {
  const RngSeed m{5};
  EXPECT_NE(derive_seed(m, 1, 0).value, derive_seed(m, 1, 1).value);
  EXPECT_NE(derive_seed(m, 1, 0).value, derive_seed(m, 2, 0).value);
  EXPECT_EQ(derive_seed(m, 3, 9).value, derive_seed(m, 3, 9).value);
}

TEST(Rng, UniformOpenIsInsideUnitInterval) {
  Xoshiro256 rng(RngSeed{1});
  std::vector<double> u(20000);
  for (auto& v : u) {
    v = rng.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
  EXPECT_GT(dgtest::ks_uniform_pvalue(u), 0.001);
}

TEST(Rng, NormalVariatesPassKs) {
  Xoshiro256 rng(RngSeed{2});
  const boost::math::normal n;
  std::vector<double> u(20000);
  for (auto& v : u) v = boost::math::cdf(n, standard_normal(rng));
  EXPECT_GT(dgtest::ks_uniform_pvalue(u), 0.001);
}

TEST(Rng, GammaVariatesPassKs) {
  for (double shape : {0.05, 0.7, 1.0, 2.8, 40.0}) {
    Xoshiro256 rng(RngSeed{3});
    const boost::math::gamma_distribution<> g(shape, 1.0);
    std::vector<double> u(20000);
    for (auto& v : u) v = boost::math::cdf(g, gamma_variate(rng, shape));
    EXPECT_GT(dgtest::ks_uniform_pvalue(u), 0.001) << "shape " << shape;
  }
}

TEST(Rng, LogGammaVariateHandlesTinyShape) {
  Xoshiro256 rng(RngSeed{4});
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(std::isfinite(log_gamma_variate(rng, 1e-3)));
}

TEST(GammaBaseline, MatchesBoost) {
  const GammaBaseline g{PositiveReal(1.1), PositiveReal(1.5)};
  const boost::math::gamma_distribution<> ref(1.5, 1.1);
  for (double x = 0.01; x < 15.0; x *= 1.3) {
    EXPECT_NEAR(gamma_pdf(x, g), boost::math::pdf(ref, x), 1e-13);
    EXPECT_NEAR(gamma_cdf(x, g), boost::math::cdf(ref, x), 1e-13);
    EXPECT_NEAR(gamma_log_pdf(x, g), std::log(boost::math::pdf(ref, x)), 1e-12);
  }
  EXPECT_EQ(gamma_pdf(-1.0, g), 0.0);
  EXPECT_EQ(gamma_cdf(0.0, g), 0.0);
}

TEST(Dirichlet, FlatDensityIsTwo) {
  const DirichletParams d({1, 1, 1});
  const std::vector<double> y{0.2, 0.3};
  EXPECT_NEAR(dirichlet_pdf(y, d), 2.0, 1e-14);
  const std::vector<double> out{0.7, 0.4};
  EXPECT_EQ(dirichlet_pdf(out, d), 0.0);
  const std::vector<double> wrong{0.1};
  EXPECT_THROW(dirichlet_pdf(wrong, d), ContractError);
}

TEST(Dirichlet, DensityMatchesClosedForm) {
  const DirichletParams d({2, 2, 3});
  const std::vector<double> y{0.25, 0.35};
  const double expected = 360.0 * 0.25 * 0.35 * 0.4 * 0.4;
  EXPECT_NEAR(dirichlet_pdf(y, d), expected, 1e-12);
}

TEST(Dirichlet, MarginalsAreBeta) {
  const DirichletParams d({2, 2, 3});
  const DataMatrix x = dirichlet_sample(5000, d, RngSeed{11});
  for (std::size_t c = 0; c < 2; ++c) {
    const boost::math::beta_distribution<> b(2.0, 5.0);
    std::vector<double> u;
    for (std::size_t r = 0; r < x.rows(); ++r) u.push_back(boost::math::cdf(b, x(r, c)));
    EXPECT_GT(dgtest::ks_uniform_pvalue(u), 0.001);
  }
  for (std::size_t r = 0; r < x.rows(); ++r) {
    ASSERT_GT(x(r, 0), 0.0);
    ASSERT_GT(x(r, 1), 0.0);
    ASSERT_LT(x(r, 0) + x(r, 1), 1.0);
  }
}

TEST(Dirichlet, TinyConcentrationsStayInside) {
  const DirichletParams d({0.01, 0.02, 0.05});
  const DataMatrix x = dirichlet_sample(2000, d, RngSeed{12});
  for (std::size_t r = 0; r < x.rows(); ++r) {
    ASSERT_GT(x(r, 0), 0.0);
    ASSERT_GT(x(r, 1), 0.0);
    ASSERT_LT(x(r, 0) + x(r, 1), 1.0);
  }
}

TEST(Weibull, QuantileMatchesBoost) {
  const WeibullParams w{PositiveReal(0.8), PositiveReal(1.3)};
  const boost::math::weibull_distribution<> ref(0.8, 1.3);
  for (double u : {0.001, 0.1, 0.5, 0.9, 0.999}) {
    EXPECT_NEAR(weibull_quantile(u, w), boost::math::quantile(ref, u), 1e-12);
  }
  EXPECT_EQ(weibull_sample(10, w, RngSeed{1}), weibull_sample(10, w, RngSeed{1}));
}
