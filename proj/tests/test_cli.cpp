// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace cli = ellbailey::cli;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// A scratch file removed at scope exit.
class TempFile {
 public:
  explicit TempFile(const std::string& content)
      : path_(std::filesystem::temp_directory_path() /
              ("ellbailey_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".json")) {
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(cli::parse_complex("0.5"), std::complex<double>(0.5, 0.0));
  EXPECT_EQ(cli::parse_complex("0.5+0.25i"), std::complex<double>(0.5, 0.25));
  EXPECT_EQ(cli::parse_complex("-0.5-0.25i"), std::complex<double>(-0.5, -0.25));
  EXPECT_EQ(cli::parse_complex("0.3i"), std::complex<double>(0.0, 0.3));
  EXPECT_EQ(cli::parse_complex("-i"), std::complex<double>(0.0, -1.0));
  EXPECT_EQ(cli::parse_complex("1e-3+2E-2i"), std::complex<double>(1e-3, 2e-2));
  EXPECT_EQ(cli::parse_complex(" 0.7 "), std::complex<double>(0.7, 0.0));
  for (const char* bad : {"", "abc", "0.5+", "0.5+0.2", "1i2", "0.5 0.2i"}) {
    EXPECT_THROW(cli::parse_complex(bad), std::invalid_argument) << bad;
  }
  const auto list = cli::parse_complex_list("0.7,0.6-0.1i, 0.5");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[1], std::complex<double>(0.6, -0.1));
  EXPECT_THROW(cli::parse_complex_list("0.7,,0.5"), std::invalid_argument);
}

TEST(Cli, GammaNearOne) {
  const auto r = run({"gamma", "--q", "0.3", "--p", "0.2", "--z", "0.24494897", "--json"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["value"][0].get<double>(), 1.0, 1e-7);
  EXPECT_NEAR(j["value"][1].get<double>(), 0.0, 1e-12);
}

TEST(Cli, GammaPoleFails) {
  const auto r = run({"gamma", "--q", "0.3", "--p", "0.2", "--z", "1"});
  EXPECT_EQ(r.code, cli::kExitFailed);
  EXPECT_NE(r.err.find("PoleError"), std::string::npos) << r.err;
}

TEST(Cli, Pochhammer) {
  const auto r = run({"pochhammer", "--z", "0.5", "--q", "0.5", "--json"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["value"][0].get<double>(), 0.2887880950866024, 1e-15);
}

TEST(Cli, VerifyBetaPasses) {
  const auto r = run({"verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.7,0.6,0.5,0.6,0.7", "--tol", "1e-8"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);

  const auto closed = run({"beta", "--q", "0.3", "--p", "0.2", "--t", "0.7,0.6,0.5,0.6,0.7", "--json"});
  ASSERT_EQ(closed.code, cli::kExitOk);
  const auto j = run({"verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.7,0.6,0.5,0.6,0.7", "--json"});
  const auto report = json::parse(j.out);
  EXPECT_EQ(report["rhs"], json::parse(closed.out)["value"]);
  EXPECT_LT(report["rel_err"].get<double>(), 1e-8);
  EXPECT_TRUE(report["converged"].get<bool>());
}

TEST(Cli, VerifyBetaConstraintViolation) {
  const auto r = run({"verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.5,0.5,0.5,0.5,0.5", "--json"});
  EXPECT_EQ(r.code, cli::kExitFailed);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["error"], "ConstraintViolation");
  EXPECT_EQ(j["assignment"]["params"]["t0"][0], 0.5);
  const auto human = run({"verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.5,0.5,0.5,0.5,0.5"});
  EXPECT_EQ(human.code, cli::kExitFailed);
  EXPECT_NE(human.out.find("ConstraintViolation"), std::string::npos);
}

TEST(Cli, VerifySampledTransformation) {
  const auto r = run({"verify", "transformation", "--q", "0.3", "--p", "0.2", "--seed", "7", "--json"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["identity_id"], "transformation");
  EXPECT_TRUE(j["assignment"]["params"].contains("s3"));
}

TEST(Cli, VerifyExplicitIdSeq) {
  const auto r = run({"verify", "id-seq", "--m", "1", "--q", "0.3", "--p", "0.2", "--t", "0.8,0.7+0.1i,0.75,0.7-0.2i",
                      "--s", "0.75", "--u", "0.7i", "--w", "0.6+0.8i", "--json"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["identity_id"], "id-seq:1");
  EXPECT_EQ(j["assignment"]["points"]["w"][1], 0.8);
  EXPECT_EQ(j["assignment"]["params"]["t1"][1], 0.1);
}

TEST(Cli, NonConvergenceExitsOne) {
  const auto r = run({"verify", "ident1", "--q", "0.3", "--p", "0.2", "--seed", "11", "--n-max", "16", "--json"});
  EXPECT_EQ(r.code, cli::kExitFailed);
  EXPECT_FALSE(json::parse(r.out)["converged"].get<bool>());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"gamma", "--q", "0.3", "--p", "0.2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"gamma", "--q", "0.3", "--p", "0.2", "--z", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--q", "0.3", "--p", "0.2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "gauss", "--q", "0.3", "--p", "0.2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "beta", "--q", "0.3", "--p", "0.2", "--t", "0.5,0.5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "beta", "--q", "0.3", "--p", "0.2", "--tol", "-1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"tree", "--q", "0.3", "--p", "0.2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"tree", "--word", "C(s1", "--q", "0.3", "--p", "0.2"}).code, cli::kExitUsage);
  const auto r = run({"gamma", "--q", "0.3"});
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST(Cli, DomainErrorExitsOne) {
  EXPECT_EQ(run({"gamma", "--q", "1.2", "--p", "0.2", "--z", "0.5"}).code, cli::kExitFailed);
}

TEST(Cli, ConfigFile) {
  TempFile cfg(R"({"identity": "beta", "q": 0.3, "p": "0.2", "t": [0.7, 0.6, 0.5, 0.6, 0.7], "json": true})");
  const auto r = run({"verify", "--config", cfg.path()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["identity_id"], "beta");

  const auto clash = run({"verify", "--config", cfg.path(), "--q", "0.3"});
  EXPECT_EQ(clash.code, cli::kExitUsage);
  EXPECT_NE(clash.err.find("both"), std::string::npos) << clash.err;

  TempFile bad(R"({"q": 0.3, "colour": 1})");
  EXPECT_EQ(run({"gamma", "--config", bad.path(), "--p", "0.2", "--z", "0.5"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"gamma", "--config", "/nonexistent/cfg.json"}).code, cli::kExitUsage);
}

TEST(Cli, Tree) {
  const auto r = run({"tree", "--word", "C(s1,u1)", "--q", "0.3", "--p", "0.2", "--seed", "2", "--json"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.out << r.err;
  const auto j = json::parse(r.out);
  EXPECT_LT(j["rel_residual"].get<double>(), 1e-6);
  EXPECT_EQ(j["pair"]["beta"]["product"][1]["int"], "x1");
}

TEST(Cli, Help) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}
