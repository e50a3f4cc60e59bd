// Copyright 2026 The etrs Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "etrs/cli.hpp"
#include "etrs/error.hpp"
#include "etrs/fixtures.hpp"
#include "etrs/io.hpp"
#include "etrs/solve.hpp"
#include "support.hpp"

namespace etrs {
namespace {

using io::Json;

std::string WriteTemp(const std::string& name, const Json& j) {
  const auto path = std::filesystem::temp_directory_path() / ("etrs_test_" + name);
  std::ofstream(path) << j.dump();
  return path.string();
}

TEST(Io, ProblemRoundTrip) {
  const auto p = testing::Example(3);
  const auto q = io::ProblemFromJson(io::ProblemToJson(p));
  EXPECT_EQ(p.A, q.A);
  EXPECT_EQ(p.a, q.a);
  EXPECT_EQ(p.b, q.b);
  EXPECT_EQ(p.beta, q.beta);
  EXPECT_EQ(p.delta, q.delta);
}

TEST(Io, DeltaDefaultsToOne) {
  const Json j = Json::parse(R"({"n":1,"A":[[2]],"a":[0],"b":[1],"beta":0.5})");
  EXPECT_EQ(io::ProblemFromJson(j).delta, 1.0);
}

TEST(Io, SchemaErrors) {
  auto code = [](const char* text) {
    try {
      io::ProblemFromJson(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kNoConvergence;
  };
  EXPECT_EQ(code(R"({"A":[[1]],"a":[0],"b":[0]})"), ErrorCode::kInvalidInput);
  EXPECT_EQ(code(R"({"n":2,"A":[[1]],"a":[0],"b":[0],"beta":1})"), ErrorCode::kInvalidInput);
  EXPECT_EQ(code(R"({"A":[[1,2]],"a":[0],"b":[0],"beta":1})"), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code(R"({"A":[[1]],"a":[0,1],"b":[0],"beta":1})"), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code(R"({"A":[["x"]],"a":[0],"b":[0],"beta":1})"), ErrorCode::kInvalidInput);
}

TEST(Io, ReportRoundTrip) {
  for (int k = 1; k <= 4; ++k) {
    SolveOptions opt;
    opt.reference_value = k == 2 ? std::optional<double>(-2.4972) : std::nullopt;
    const Json once = io::ReportToJson(SolveFull(testing::Example(k), opt));
    const SolveReport back = io::ReportFromJson(Json::parse(once.dump()));
    EXPECT_EQ(io::ReportToJson(back), once) << k;
    EXPECT_EQ(back.optimal_value, once["value"].get<double>());
  }
}

TEST(Io, ReportCarriesRequiredFields) {
  const Json j = io::ReportToJson(SolveFull(testing::Example(1)));
  for (const char* f : {"value", "x", "certificate", "relaxations", "duality", "discrepancies"})
    EXPECT_TRUE(j.contains(f)) << f;
  for (const char* f : {"lambda0", "u0", "u", "residuals"}) EXPECT_TRUE(j["certificate"].contains(f));
  for (const char* f : {"sdp", "lmi", "socpsdp"}) EXPECT_TRUE(j["relaxations"].contains(f));
  EXPECT_TRUE(j["duality"].contains("gaps"));
  EXPECT_TRUE(j["duality"].contains("soc_dual_vanishes"));
}

TEST(Fixtures, BuiltinData) {
  const auto all = BuiltinFixtures();
  ASSERT_EQ(all.size(), 4u);
  EXPECT_FALSE(FixtureByName("example2").annotation.empty());
  EXPECT_THROW(FixtureByName("example9"), Error);
  EXPECT_EQ(FixtureByName("example1").problem.A, testing::Example(1).A);
}

int RunCli(cli::RunConfig c, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::Run(c, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

TEST(Cli, SolveZeroBMarkedAsTrs) {
  cli::RunConfig c;
  c.command = cli::Command::kSolve;
  c.input = WriteTemp("b0.json", io::ProblemToJson(EtrsProblem::Ingest(
                                     Eigen::Vector3d(-1, 2, 3).asDiagonal().toDenseMatrix(),
                                     Eigen::Vector3d(1, 0, 0), VectorXd::Zero(3), 1.0)));
  std::string text;
  EXPECT_EQ(RunCli(c, &text), cli::kExitOk);
  EXPECT_NE(text.find("reduces to TRS"), std::string::npos);
  c.format = cli::Format::kJson;
  EXPECT_EQ(RunCli(c, &text), cli::kExitOk);
  EXPECT_TRUE(Json::parse(text)["reduces_to_trs"].get<bool>());
}

TEST(Cli, RelaxSocpExampleFour) {
  cli::RunConfig c;
  c.command = cli::Command::kRelax;
  c.example = "example4";
  c.kind = RelaxationKind::kPrimalSocpSdp;
  c.format = cli::Format::kJson;
  std::string text;
  ASSERT_EQ(RunCli(c, &text), cli::kExitOk);
  EXPECT_NEAR(Json::parse(text)["value"].get<double>(), -3.6121, 1e-3);
  EXPECT_EQ(Json::parse(text)["rank"].get<int>(), 2);
}

TEST(Cli, CertifyPoint) {
  cli::RunConfig c;
  c.command = cli::Command::kCertify;
  c.example = "example3";
  const VectorXd x = SolveEnumeration(testing::Example(3)).optimal_x;
  c.point = WriteTemp("pt.json", Json{{"x", std::vector<double>(x.data(), x.data() + 3)}});
  EXPECT_EQ(RunCli(c), cli::kExitOk);
  c.point = WriteTemp("pt2.json", Json{{"x", {0.0, 0.0, 0.0}}});
  EXPECT_EQ(RunCli(c), cli::kExitRejected);
}

TEST(Cli, ExitCodes) {
  cli::RunConfig c;
  c.command = cli::Command::kSolve;
  c.input = "/nonexistent/problem.json";
  EXPECT_EQ(RunCli(c), cli::kExitInvalidInput);
  c.input.clear();
  EXPECT_EQ(RunCli(c), cli::kExitInvalidInput);
  c.input = WriteTemp("bad.json", Json{{"A", {{1.0}}}, {"a", {0.0}}});
  c.format = cli::Format::kJson;
  std::string text;
  EXPECT_EQ(RunCli(c, &text), cli::kExitInvalidInput);
  EXPECT_EQ(Json::parse(text)["error"]["code"], "InvalidInput");
  // Empty feasible set is an input error.
  c.input = WriteTemp("empty.json", io::ProblemToJson(EtrsProblem::Ingest(
                                        MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                                        Eigen::Vector2d(1, 0), -2.0)));
  EXPECT_EQ(RunCli(c), cli::kExitInvalidInput);
}

TEST(Cli, ExamplesTable) {
  cli::RunConfig c;
  c.command = cli::Command::kExamples;
  c.budget = 20000;
  std::string text;
  EXPECT_EQ(RunCli(c, &text), cli::kExitOk);
  EXPECT_NE(text.find("example1  socpsdp   -4.1329    -4.1329"), std::string::npos) << text;
  EXPECT_NE(text.find("example1  sdp       -7.6827"), std::string::npos);
  EXPECT_NE(text.find("note: published optimum -2.4972"), std::string::npos);
}

TEST(Cli, OracleDeterministic) {
  cli::RunConfig c;
  c.command = cli::Command::kOracle;
  c.example = "example2";
  c.budget = 5000;
  c.format = cli::Format::kJson;
  std::string a, b;
  RunCli(c, &a);
  RunCli(c, &b);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(Json::parse(a)["best_value"].get<double>(), -2.8572, 1e-4);
}

}  // namespace
}  // namespace etrs
