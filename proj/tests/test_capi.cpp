// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <string>

#include "ellbailey/ellbailey.h"

namespace {

using Base = std::unique_ptr<ellb_base, decltype(&ellb_base_destroy)>;
using Assignment = std::unique_ptr<ellb_assignment, decltype(&ellb_assignment_destroy)>;
using Report = std::unique_ptr<ellb_report, decltype(&ellb_report_destroy)>;
using Pair = std::unique_ptr<ellb_pair, decltype(&ellb_pair_destroy)>;

Base make_base(double q, double p) {
  ellb_base* b = nullptr;
  EXPECT_EQ(ellb_base_create({q, 0.0}, {p, 0.0}, &b), ELLB_OK);
  return Base(b, ellb_base_destroy);
}

Assignment beta_assignment(std::initializer_list<double> ts) {
  ellb_assignment* a = nullptr;
  EXPECT_EQ(ellb_assignment_create(&a), ELLB_OK);
  int m = 0;
  for (double t : ts) EXPECT_EQ(ellb_assignment_set_param(a, ("t" + std::to_string(m++)).c_str(), {t, 0.0}), ELLB_OK);
  return Assignment(a, ellb_assignment_destroy);
}

std::string take(char* s) {
  std::string out(s);
  ellb_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(ellb_version(), "");
  EXPECT_STREQ(ellb_status_name(ELLB_OK), "Ok");
  EXPECT_STREQ(ellb_status_name(ELLB_CONSTRAINT_VIOLATION), "ConstraintViolation");
  EXPECT_STREQ(ellb_status_name(ELLB_INVALID_ARGUMENT), "InvalidArgument");
}

TEST(CApi, GammaAtSquareRootOfPq) {
  auto base = make_base(0.3, 0.2);
  ellb_complex g{};
  ASSERT_EQ(ellb_gamma(base.get(), {std::sqrt(0.06), 0.0}, &g), ELLB_OK);
  EXPECT_NEAR(g.re, 1.0, 1e-14);
  EXPECT_NEAR(g.im, 0.0, 1e-14);
}

TEST(CApi, ErrorsCarryMessages) {
  ellb_base* b = nullptr;
  EXPECT_EQ(ellb_base_create({1.5, 0.0}, {0.2, 0.0}, &b), ELLB_DOMAIN_ERROR);
  EXPECT_EQ(b, nullptr);
  EXPECT_NE(std::string(ellb_last_error()).find("DomainError"), std::string::npos) << ellb_last_error();

  auto base = make_base(0.3, 0.2);
  ellb_complex g{};
  EXPECT_EQ(ellb_gamma(base.get(), {1.0, 0.0}, &g), ELLB_POLE_ERROR);
  EXPECT_EQ(ellb_gamma(nullptr, {0.5, 0.0}, &g), ELLB_INVALID_ARGUMENT);
  EXPECT_EQ(ellb_gamma(base.get(), {0.5, 0.0}, nullptr), ELLB_INVALID_ARGUMENT);
}

TEST(CApi, Pochhammer) {
  ellb_complex v{};
  ASSERT_EQ(ellb_pochhammer({0.5, 0.0}, {0.5, 0.0}, &v), ELLB_OK);
  EXPECT_NEAR(v.re, 0.2887880950866024, 1e-15);
}

TEST(CApi, VerifyBeta) {
  auto base = make_base(0.3, 0.2);
  auto a = beta_assignment({0.7, 0.6, 0.5, 0.6, 0.7});
  ellb_verify_options opts{1e-8, 0, 0};
  ellb_report* raw = nullptr;
  ASSERT_EQ(ellb_verify("beta", a.get(), base.get(), &opts, &raw), ELLB_OK);
  Report r(raw, ellb_report_destroy);
  ellb_report_info info{};
  ASSERT_EQ(ellb_report_info_get(r.get(), &info), ELLB_OK);
  EXPECT_TRUE(info.converged);
  EXPECT_LT(info.rel_err, 1e-8);
  EXPECT_EQ(info.tol, 1e-8);

  const ellb_complex ts[5] = {{0.7, 0}, {0.6, 0}, {0.5, 0}, {0.6, 0}, {0.7, 0}};
  ellb_complex closed{};
  ASSERT_EQ(ellb_beta_closed_form(base.get(), ts, &closed), ELLB_OK);
  EXPECT_NEAR(closed.re, info.rhs.re, 1e-12 * std::abs(info.rhs.re));

  char* json = nullptr;
  ASSERT_EQ(ellb_report_json(r.get(), &json), ELLB_OK);
  const std::string text = take(json);
  EXPECT_NE(text.find("\"identity_id\":\"beta\""), std::string::npos) << text;
}

TEST(CApi, VerifyConstraintViolationLeavesOutput) {
  auto base = make_base(0.3, 0.2);
  auto a = beta_assignment({0.5, 0.5, 0.5, 0.5, 0.5});
  ellb_report* sentinel = reinterpret_cast<ellb_report*>(0x1);
  EXPECT_EQ(ellb_verify("beta", a.get(), base.get(), nullptr, &sentinel), ELLB_CONSTRAINT_VIOLATION);
  EXPECT_EQ(sentinel, reinterpret_cast<ellb_report*>(0x1));
  EXPECT_NE(std::string(ellb_last_error()).find("|pq|"), std::string::npos);
}

TEST(CApi, UnknownIdentity) {
  auto base = make_base(0.3, 0.2);
  auto a = beta_assignment({0.7, 0.6, 0.5, 0.6, 0.7});
  ellb_report* r = nullptr;
  EXPECT_EQ(ellb_verify("gauss", a.get(), base.get(), nullptr, &r), ELLB_PARSE_ERROR);
  char* names = nullptr;
  EXPECT_EQ(ellb_identity_params("gauss", &names), ELLB_PARSE_ERROR);
}

TEST(CApi, SampleAndVerifyTransformation) {
  auto base = make_base(0.3, 0.2);
  char* names = nullptr;
  ASSERT_EQ(ellb_identity_params("transformation", &names), ELLB_OK);
  EXPECT_NE(take(names).find("\"s3\""), std::string::npos);

  ellb_assignment* raw = nullptr;
  ASSERT_EQ(ellb_identity_sample("transformation", base.get(), 7, 0.4, 0.8, &raw), ELLB_OK);
  Assignment a(raw, ellb_assignment_destroy);
  char* json = nullptr;
  ASSERT_EQ(ellb_assignment_json(a.get(), &json), ELLB_OK);
  EXPECT_NE(take(json).find("\"params\""), std::string::npos);

  ellb_report* rr = nullptr;
  ASSERT_EQ(ellb_verify("transformation", a.get(), base.get(), nullptr, &rr), ELLB_OK);
  Report r(rr, ellb_report_destroy);
  ellb_report_info info{};
  ASSERT_EQ(ellb_report_info_get(r.get(), &info), ELLB_OK);
  EXPECT_LT(info.rel_err, 1e-8);
}

TEST(CApi, TablesAndNaiveAgree) {
  auto base = make_base(0.3, 0.2);
  ellb_assignment* raw = nullptr;
  ASSERT_EQ(ellb_identity_sample("ident1", base.get(), 11, 0.4, 0.8, &raw), ELLB_OK);
  Assignment a(raw, ellb_assignment_destroy);
  ellb_report_info info[2]{};
  for (int naive = 0; naive < 2; ++naive) {
    ellb_verify_options opts{1e-6, 32, naive};
    ellb_report* rr = nullptr;
    ASSERT_EQ(ellb_verify("ident1", a.get(), base.get(), &opts, &rr), ELLB_OK);
    ASSERT_EQ(ellb_report_info_get(rr, &info[naive]), ELLB_OK);
    ellb_report_destroy(rr);
  }
  const std::complex<double> t(info[0].rhs.re, info[0].rhs.im), n(info[1].rhs.re, info[1].rhs.im);
  EXPECT_LT(std::abs(t - n), 1e-12 * std::abs(n));
}

TEST(CApi, TreePairResidual) {
  auto base = make_base(0.3, 0.2);
  ellb_pair* raw = nullptr;
  ASSERT_EQ(ellb_tree_pair("C(s1,u1)", &raw), ELLB_OK);
  Pair pair(raw, ellb_pair_destroy);
  char* json = nullptr;
  ASSERT_EQ(ellb_pair_json(pair.get(), &json), ELLB_OK);
  EXPECT_NE(take(json).find("\"alpha\""), std::string::npos);

  ellb_assignment* ar = nullptr;
  ASSERT_EQ(ellb_pair_sample(pair.get(), base.get(), 3, 0.4, 0.8, &ar), ELLB_OK);
  Assignment a(ar, ellb_assignment_destroy);
  ellb_residual res{};
  ASSERT_EQ(ellb_pair_residual(pair.get(), a.get(), base.get(), 1e-10, 0, &res), ELLB_OK);
  EXPECT_TRUE(res.converged);
  EXPECT_LT(res.relative, 1e-8);

  EXPECT_EQ(ellb_tree_pair("C(s1", &raw), ELLB_PARSE_ERROR);
}

TEST(CApi, NullSafeDestroy) {
  ellb_base_destroy(nullptr);
  ellb_assignment_destroy(nullptr);
  ellb_report_destroy(nullptr);
  ellb_pair_destroy(nullptr);
  ellb_string_free(nullptr);
}
