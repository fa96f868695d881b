#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <vector>

#include "dirgamma/moments.hpp"

using namespace dirgamma;

namespace {

// ∫_Ω (1 − Σy)^ζ Π y_i^{α_i − 1} dy = Π Γ(α_i) Γ(ζ + 1) / Γ(Σα_i + ζ + 1).
double closed_form(const std::vector<double>& a, double zeta) {
  double num = boost::math::tgamma(zeta + 1.0);
  double sum = 0.0;
  for (double v : a) {
    num *= boost::math::tgamma(v);
    sum += v;
  }
  return num / boost::math::tgamma(sum + zeta + 1.0);
}

}  // namespace

TEST(DirichletIntegral, MatchesClosedForm) {
  EXPECT_NEAR(dirichlet_integral_I(std::vector<double>{2, 2}, 2.0), 1.0 / 360.0, 1e-10 / 360.0);
  for (const auto& a : {std::vector<double>{0.5}, std::vector<double>{2, 2}, std::vector<double>{1, 3, 0.7}}) {
    for (double zeta : {-0.5, 0.0, 1.0, 2.5, 7.0}) {
      const double expected = closed_form(a, zeta);
      EXPECT_NEAR(dirichlet_integral_I(a, zeta), expected, 1e-10 * expected);
      EXPECT_NEAR(log_dirichlet_integral_I(a, zeta), std::log(expected), 1e-10);
    }
  }
  EXPECT_THROW(dirichlet_integral_I(std::vector<double>{1, 1}, -1.0), DomainError);
}

TEST(ProductMoment, FormulaVersusSimulation) {
  const DGParams p({2.0, 1.0}, {1.0}, {1.0});
  EXPECT_DOUBLE_EQ(product_moment_formula({1}, p), 0.5);
  const MomentEstimate mc = product_moment_mc({1}, p, 200000, RngSeed{3});
  EXPECT_NEAR(mc.value, 1.5, 5 * mc.std_error);
}

TEST(ProductMoment, CollapseCaseAgrees) {
  const DGParams p({1.0, 1.0}, {1.0}, {1.0});
  const MomentReport r = moment_report({1}, p, 200000, RngSeed{4});
  EXPECT_NEAR(r.formula_value, 1.0, 1e-12);
  EXPECT_LT(r.relative_gap, 0.01);
  EXPECT_FALSE(r.discrepancy);
}

TEST(ProductMoment, ZeroOrderAndErrors) {
  const DGParams p({2, 2, 3}, {1.1, 1.2}, {1.5, 2.8});
  EXPECT_EQ(product_moment_mc({0, 0}, p, 1000, RngSeed{1}).value, 1.0);
  EXPECT_THROW(product_moment_mc({1, 0}, p, 999, RngSeed{1}), ContractError);
  EXPECT_THROW(product_moment_formula({1}, p), ContractError);
}

TEST(ProductMoment, DiscrepancyIsFlagged) {
  const DGParams p({2.0, 1.0}, {1.0}, {1.0});
  const MomentReport r = moment_report({1}, p, 100000, RngSeed{5});
  EXPECT_TRUE(r.discrepancy);
  EXPECT_GT(r.relative_gap, 0.5);
}

TEST(Mgf, TermCountAndCap) {
  EXPECT_EQ(mgf_term_count(1, 10), 11u);
  EXPECT_EQ(mgf_term_count(2, 3), 10u);
  const DGParams p({2, 2, 3}, {1.1, 1.2}, {1.5, 2.8});
  const std::vector<double> t{0.1, 0.1};
  EXPECT_TRUE(std::isfinite(mgf_truncated(t, p, 20)));
  EXPECT_THROW(mgf_truncated(t, p, 5000), ContractError);
  const std::vector<double> zero{0.0, 0.0};
  const MomentEstimate at_zero = mgf_mc(zero, p, 100, RngSeed{1});
  EXPECT_DOUBLE_EQ(at_zero.value, 1.0);
}
