// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ellbailey/error.hpp"
#include "ellbailey/expr.hpp"
#include "ellbailey/quadrature.hpp"

namespace eb = ellbailey;
using eb::Complex;
using eb::Location;

namespace {

eb::ParamMonomial sym(const char* n) { return eb::ParamMonomial::symbol(n); }

void add(std::vector<eb::GammaFactor>& out, const std::vector<eb::GammaFactor>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

// κ-free beta integrand and its closed-form mean 2∏Γ(t_m t_s)/((q;q)(p;p)∏Γ(A/t_m)).
eb::Integrand beta_integrand() {
  eb::Integrand intg{{}, {"z"}};
  eb::ParamMonomial a;
  for (const char* t : {"t0", "t1", "t2", "t3", "t4"}) {
    add(intg.factors, eb::gamma_pm(sym(t), {"z"}));
    a *= sym(t);
  }
  add(intg.factors, eb::gamma_pm2("z"));
  add(intg.factors, eb::gamma_pm(a, {"z"}, Location::denominator));
  return intg;
}

eb::Assignment beta_point() {
  eb::Assignment a;
  const double ts[] = {0.7, 0.6, 0.5, 0.6, 0.7};
  for (int m = 0; m < 5; ++m) a.params["t" + std::to_string(m)] = ts[m];
  return a;
}

Complex beta_mean(const eb::Assignment& a, const eb::BaseParams& base) {
  Complex num(1.0, 0.0), den = base.q_poch() * base.p_poch();
  Complex prod(1.0, 0.0);
  for (const auto& [_, t] : a.params) prod *= t;
  for (auto i = a.params.begin(); i != a.params.end(); ++i) {
    for (auto j = std::next(i); j != a.params.end(); ++j) num *= eb::elliptic_gamma(i->second * j->second, base);
    den *= eb::elliptic_gamma(prod / i->second, base);
  }
  return 2.0 * num / den;
}

// A random two-variable integrand with moderate moduli.
eb::Integrand random_integrand(std::mt19937_64& rng, eb::Assignment& a) {
  std::uniform_real_distribution<double> mod(0.3, 0.7), ph(0.0, 6.283185307179586);
  eb::Integrand intg{{}, {"x", "y"}};
  for (int i = 0; i < 3; ++i) {
    const std::string n = "c" + std::to_string(i);
    a.params[n] = std::polar(mod(rng), ph(rng));
  }
  add(intg.factors, eb::gamma_pm(sym("c0"), {"x", "y"}));
  add(intg.factors, eb::gamma_pm(sym("c1"), {"x"}));
  add(intg.factors, eb::gamma_pm(sym("c2"), {"y"}, Location::denominator));
  add(intg.factors, eb::gamma_pm2("x"));
  intg.factors.push_back({sym("c1") * sym("c2"), {{"x", 1}, {"y", 2}}, Location::numerator});
  return intg;
}

}  // namespace

TEST(Grid, NodesAreRotatedAndNested) {
  EXPECT_NEAR(std::abs(eb::grid_node(0, 16) - eb::grid_rotation()), 0.0, 1e-16);
  EXPECT_GT(std::abs(eb::grid_node(0, 16) - 1.0), 1e-4);
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(std::abs(eb::grid_node(k, 16) - eb::grid_node(2 * k, 32)), 0.0, 1e-15);
}

TEST(Grid, ExactForLaurentMonomials) {
  for (int n = -32; n <= 32; ++n) {
    const Complex m = eb::grid_mean([n](std::span<const Complex> z) { return std::pow(z[0], n); }, 1, 64);
    EXPECT_NEAR(std::abs(m - (n == 0 ? 1.0 : 0.0)), 0.0, 1e-13) << n;
  }
}

TEST(ContourMean, SimpleFunctions) {
  eb::QuadratureConfig cfg;
  cfg.target = 1e-13;
  auto one = eb::contour_mean([](std::span<const Complex>) { return Complex(1.0, 0.0); }, 1, cfg);
  EXPECT_TRUE(one.converged);
  EXPECT_NEAR(std::abs(one.value - 1.0), 0.0, 1e-15);
  auto cube = eb::contour_mean([](std::span<const Complex> z) { return z[0] * z[0] * z[0]; }, 1, cfg);
  EXPECT_NEAR(std::abs(cube.value), 0.0, 1e-15);
  auto geo = eb::contour_mean([](std::span<const Complex> z) { return 1.0 / (1.0 - 0.5 * z[0]); }, 1, cfg);
  EXPECT_TRUE(geo.converged);
  EXPECT_NEAR(std::abs(geo.value - 1.0), 0.0, 1e-13);
  auto sep = eb::contour_mean([](std::span<const Complex> z) { return z[0] * z[0] / (z[1] * z[1]); }, 2, cfg);
  EXPECT_NEAR(std::abs(sep.value), 0.0, 1e-14);
}

TEST(ContourMean, ReportsNonConvergence) {
  eb::QuadratureConfig cfg{16, 64, 1e-14};
  auto r = eb::contour_mean([](std::span<const Complex> z) { return 1.0 / (1.0 - 0.99 * z[0]); }, 1, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.est_error, 0.0);
  EXPECT_EQ(r.nodes_used, std::vector<int>{64});
}

TEST(ContourMean, ConfigValidation) {
  for (const eb::QuadratureConfig& bad : {eb::QuadratureConfig{12, 64, 1e-8}, eb::QuadratureConfig{64, 32, 1e-8},
                                          eb::QuadratureConfig{4, 64, 1e-8}, eb::QuadratureConfig{16, 64, 0.0}}) {
    EXPECT_THROW(eb::contour_mean([](std::span<const Complex>) { return Complex(1.0); }, 1, bad), eb::Error);
  }
  EXPECT_EQ(eb::QuadratureConfig::defaults_for(1, 1e-8).n_max, 1024);
  EXPECT_EQ(eb::QuadratureConfig::defaults_for(2, 1e-8).n_max, 256);
  EXPECT_EQ(eb::QuadratureConfig::defaults_for(3, 1e-8).n_max, 64);
}

TEST(Grid, FubiniLoopOrder) {
  auto f = [](std::span<const Complex> v) {
    return std::exp(v[0] * 0.3 + 1.0 / v[1]) / (1.0 - 0.4 * v[0] * v[1]) + v[0] * v[0] / (2.0 - v[1]);
  };
  const int xy[] = {0, 1}, yx[] = {1, 0};
  const Complex a = eb::grid_mean(f, 2, 32, xy);
  const Complex b = eb::grid_mean(f, 2, 32, yx);
  EXPECT_LT(std::abs(a - b), 1e-14 * std::abs(a));
}

TEST(FactorTable, LinearFactor) {
  const eb::BaseParams base(0.3, 0.2);
  eb::Assignment a;
  a.params["t"] = 0.5;
  const eb::GammaFactor f{sym("t"), {{"z", 1}}, Location::numerator};
  const auto table = eb::factor_table(f, a, base, 4, {"z"});
  const Complex i(0.0, 1.0);
  ASSERT_EQ(table.size(), 4u);
  for (int r = 0; r < 4; ++r) {
    EXPECT_LT(std::abs(table[r] - eb::elliptic_gamma(0.5 * std::pow(i, r), base)), 1e-14 * std::abs(table[r]));
  }
}

TEST(FactorTable, SquareFactorReadsEvenEntries) {
  const eb::BaseParams base(0.3, 0.2);
  const eb::GammaFactor f{eb::ParamMonomial(Complex(0.8, 0.0)), {{"z", 2}}, Location::numerator};
  const auto table = eb::factor_table(f, {}, base, 8, {"z"}, {}, eb::grid_rotation());
  for (int k = 0; k < 8; ++k) {
    const Complex z = eb::grid_node(k, 8);
    const Complex direct = eb::elliptic_gamma(0.8 * z * z, base);
    EXPECT_LT(std::abs(table[(2 * k) % 8] - direct), 1e-13 * std::abs(direct));
  }
}

TEST(FactorTable, ConstantFactorReadsEntryZero) {
  const eb::BaseParams base(0.3, 0.2);
  eb::Assignment a;
  a.params["t"] = 0.6;
  const auto table = eb::factor_table({sym("t").pow(2), {}, Location::numerator}, a, base, 8, {"z"});
  EXPECT_EQ(table[0], eb::elliptic_gamma(0.36, base));
}

TEST(Integrate, BetaIntegralMean) {
  const eb::BaseParams base(0.3, 0.2);
  const auto a = beta_point();
  const Complex expected = beta_mean(a, base);
  EXPECT_NEAR(expected.real(), 14093.4546462133, 1e-6);
  const auto r = eb::integrate(beta_integrand(), a, base, eb::QuadratureConfig{16, 512, 1e-12});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::abs(r.value - expected) / std::abs(expected), 1e-10);
}

TEST(Integrate, ErrorShrinksWithGrid) {
  const eb::BaseParams base(0.3, 0.2);
  auto a = beta_point();
  a.params["t0"] = Complex(0.2, 0.75);
  const Complex expected = beta_mean(a, base);
  const double e32 = std::abs(eb::integrand_grid_mean(beta_integrand(), a, base, 32) - expected);
  const double e64 = std::abs(eb::integrand_grid_mean(beta_integrand(), a, base, 64) - expected);
  EXPECT_LT(e64, e32);
}

TEST(Integrate, TableMatchesNaive) {
  const eb::BaseParams base(0.3, 0.2);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    eb::Assignment a;
    const auto intg = random_integrand(rng, a);
    for (int n : {16, 64}) {
      const Complex t = eb::integrand_grid_mean(intg, a, base, n, eb::GridMethod::table);
      const Complex v = eb::integrand_grid_mean(intg, a, base, n, eb::GridMethod::naive);
      EXPECT_LT(std::abs(t - v), 1e-12 * std::abs(v)) << trial << " " << n;
    }
  }
}

TEST(Integrate, Deterministic) {
  const eb::BaseParams base(0.3, 0.2);
  std::mt19937_64 rng(5);
  eb::Assignment a;
  const auto intg = random_integrand(rng, a);
  const auto cfg = eb::QuadratureConfig{16, 64, 1e-10};
  const auto r1 = eb::integrate(intg, a, base, cfg);
  const auto r2 = eb::integrate(intg, a, base, cfg);
  EXPECT_EQ(r1.value, r2.value);
  EXPECT_EQ(r1.nodes_used, r2.nodes_used);
}

TEST(Integrate, PoleOnGridIsReported) {
  const eb::BaseParams base(0.3, 0.2);
  // Γ(z/φ) meets its pole at the first node φ.
  eb::Integrand intg{{{eb::ParamMonomial(1.0 / eb::grid_rotation()), {{"z", 1}}, Location::numerator}}, {"z"}};
  try {
    eb::integrand_grid_mean(intg, {}, base, 16);
    FAIL();
  } catch (const eb::Error& e) {
    EXPECT_EQ(e.code(), eb::ErrorCode::pole);
  }
}

TEST(CompensatedSum, CancellingTerms) {
  eb::CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), Complex(1.0, 0.0));
}
