#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <vector>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/special_fn.hpp"
#include "stats.hpp"

using namespace dirgamma;
using boost::math::quadrature::gauss_kronrod;

namespace {

const DGParams kPaper({2, 2, 3}, {1.1, 1.2}, {1.5, 2.8});

// Independent density: Dirichlet density of (G₁, G₂) times the baseline densities, all from Boost.
double oracle_pdf(double x1, double x2, const DGParams& p) {
  const double g1 = boost::math::gamma_p(p.beta()[0], x1 / p.theta()[0]);
  const double g2 = boost::math::gamma_p(p.beta()[1], x2 / p.theta()[1]);
  if (g1 + g2 >= 1.0) return 0.0;
  const auto dens = [](double x, double shape, double scale) {
    return boost::math::gamma_p_derivative(shape, x / scale) / scale;
  };
  const double a1 = p.alpha()[0], a2 = p.alpha()[1], a3 = p.alpha()[2];
  const double norm = boost::math::tgamma(a1 + a2 + a3) /
                      (boost::math::tgamma(a1) * boost::math::tgamma(a2) * boost::math::tgamma(a3));
  return norm * std::pow(g1, a1 - 1) * std::pow(g2, a2 - 1) * std::pow(1 - g1 - g2, a3 - 1) *
         dens(x1, p.beta()[0], p.theta()[0]) * dens(x2, p.beta()[1], p.theta()[1]);
}

}  // namespace

TEST(DGModel, FlatRoundTrip) {
  const auto flat = kPaper.flat();
  EXPECT_EQ(flat, (std::vector<double>{2, 2, 3, 1.5, 2.8, 1.1, 1.2}));
  EXPECT_EQ(DGParams::from_flat(flat), kPaper);
  EXPECT_EQ(DGParams::flat_names(2).front(), "alpha1");
  EXPECT_EQ(DGParams::flat_names(2)[3], "beta1");
  EXPECT_EQ(DGParams::flat_names(2)[5], "theta1");
}

TEST(DGModel, ParameterValidation) {
  EXPECT_THROW(DGParams({2, 2}, {1, 1}, {1, 1}), ContractError);
  EXPECT_THROW(DGParams({2, 0, 3}, {1, 1}, {1, 1}), DomainError);
  EXPECT_THROW(DGParams({2, 2, 3}, {1, -1}, {1, 1}), DomainError);
}

TEST(DGModel, DensityMatchesOracle) {
  for (double x1 : {0.1, 0.5, 1.0, 2.0}) {
    for (double x2 : {0.2, 1.0, 3.0}) {
      const std::vector<double> x{x1, x2};
      const double expected = oracle_pdf(x1, x2, kPaper);
      EXPECT_NEAR(dg_pdf(x, kPaper), expected, 1e-12 + 1e-10 * expected) << x1 << " " << x2;
    }
  }
}

TEST(DGModel, OffSupportIsZero) {
  const std::vector<double> far{20.0, 30.0};
  EXPECT_FALSE(support_indicator(far, kPaper));
  EXPECT_EQ(dg_pdf(far, kPaper), 0.0);
  EXPECT_EQ(dg_log_pdf(far, kPaper), -std::numeric_limits<double>::infinity());
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(dg_pdf(wrong, kPaper), ContractError);
}

TEST(DGModel, MarginalIntegratesToOneAndMatchesCdf) {
  for (std::size_t i = 0; i < 2; ++i) {
    const auto f = [&](double x) { return marginal_pdf(x, i, kPaper); };
    const double total = gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
    EXPECT_NEAR(total, 1.0, 1e-8);
    for (double x : {0.3, 1.0, 2.5}) {
      const double partial = gauss_kronrod<double, 61>::integrate(f, 0.0, x, 15, 1e-12);
      EXPECT_NEAR(marginal_cdf(x, i, kPaper), partial, 1e-9);
    }
  }
}

TEST(DGModel, MarginalIsBetaGenerated) {
  const double x = 0.8;
  const double g = boost::math::gamma_p(1.5, x / 1.1);
  EXPECT_NEAR(marginal_cdf(x, 0, kPaper), boost::math::ibeta(2.0, 5.0, g), 1e-13);
}

TEST(DGModel, QuadratureCdfAgreesWithMonteCarlo) {
  const std::vector<double> x{1.0, 2.0};
  const double q = builder4_cdf_quadrature(x, kPaper);
  const CdfEstimate mc = builder4_cdf(x, kPaper, 200000, RngSeed{9});
  EXPECT_NEAR(q, mc.value, 5 * mc.std_error + 1e-4);
  const std::vector<double> big{200.0, 200.0};
  EXPECT_NEAR(builder4_cdf_quadrature(big, kPaper), 1.0, 1e-9);
  const std::vector<double> zero{0.0, 1.0};
  EXPECT_EQ(builder4_cdf_quadrature(zero, kPaper), 0.0);
}

TEST(DGModel, CdfIsMonotone) {
  double prev = 0.0;
  for (double t = 0.1; t < 6.0; t += 0.3) {
    const std::vector<double> x{t, t};
    const double v = builder4_cdf_quadrature(x, kPaper);
    EXPECT_GE(v, prev - 1e-12);
    prev = v;
  }
}

TEST(DGModel, SamplerPassesPitAndSupport) {
  const DataMatrix x = dg_sample(5000, kPaper, RngSeed{21});
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> u;
    for (std::size_t r = 0; r < x.rows(); ++r) u.push_back(marginal_cdf(x(r, i), i, kPaper));
    EXPECT_GT(dgtest::ks_uniform_pvalue(u), 0.01);
  }
  for (std::size_t r = 0; r < x.rows(); ++r) ASSERT_TRUE(support_indicator(x.row(r), kPaper));
  EXPECT_EQ(dg_sample(50, kPaper, RngSeed{21}), dg_sample(50, kPaper, RngSeed{21}));
}

TEST(DGModel, OneDimensionalCaseIsBetaGamma) {
  const DGParams p({2.0, 1.0}, {1.0}, {1.0});
  const std::vector<double> x{0.7};
  const double g = 1 - std::exp(-0.7);
  EXPECT_NEAR(dg_pdf(x, p), 2.0 * g * std::exp(-0.7), 1e-14);
}
