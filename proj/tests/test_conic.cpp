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

#include <random>

#include "etrs/conic.hpp"
#include "etrs/error.hpp"
#include "etrs/linalg.hpp"
#include "support.hpp"

namespace etrs::conic {
namespace {

ConicProgram LpAtLeastOne() {
  // min x  s.t.  x - s = 1,  x, s >= 0.
  ConicProgram p;
  p.cone.blocks = {{BlockKind::kNonneg, 2, "x"}};
  p.c = Eigen::Vector2d(1, 0);
  p.A = MatrixXd(1, 2);
  p.A << 1, -1;
  p.r = VectorXd::Ones(1);
  p.row_groups = {{"bound", 0, 1}};
  return p;
}

TEST(Conic, SvecRoundTripAndInnerProduct) {
  std::mt19937_64 rng(1);
  const MatrixXd a = testing::RandomSymmetric(rng, 4);
  const MatrixXd b = testing::RandomSymmetric(rng, 4);
  EXPECT_LE((Smat(Svec(a), 4) - a).norm(), 1e-14);
  EXPECT_NEAR(Svec(a).dot(Svec(b)), (a.array() * b.array()).sum(), 1e-10);
}

TEST(Conic, LinearProgram) {
  const auto p = LpAtLeastOne();
  const auto s = Solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
  const auto duals = ExtractDual(s, p);
  EXPECT_NEAR(duals.at("bound")(0), 1.0, 1e-7);
}

TEST(Conic, SmallSdp) {
  // min trace(X)  s.t.  X11 = 1,  X PSD.
  ConicProgram p;
  p.cone.blocks = {{BlockKind::kPsd, 2, "X"}};
  p.c = Svec(MatrixXd::Identity(2, 2));
  MatrixXd e = MatrixXd::Zero(2, 2);
  e(0, 0) = 1;
  p.A = Svec(e).transpose();
  p.r = VectorXd::Ones(1);
  const auto s = Solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
  EXPECT_LE((Smat(s.s, 2) - e).norm(), 1e-4);
}

TEST(Conic, SecondOrderWithFreeVariable) {
  // min f  s.t.  (t, 3, 4) in SOC,  f = t.
  ConicProgram p;
  p.cone.blocks = {{BlockKind::kSoc, 3, "q"}, {BlockKind::kFree, 1, "f"}};
  p.c = Eigen::Vector4d(0, 0, 0, 1);
  p.A = MatrixXd::Zero(3, 4);
  p.A(0, 1) = 1;
  p.A(1, 2) = 1;
  p.A(2, 3) = 1;
  p.A(2, 0) = -1;
  p.r = Eigen::Vector3d(3, 4, 0);
  const auto s = Solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_objective, 5.0, 1e-7);
}

TEST(Conic, DetectsInfeasible) {
  ConicProgram p;
  p.cone.blocks = {{BlockKind::kNonneg, 1, "x"}};
  p.c = VectorXd::Ones(1);
  p.A = MatrixXd::Ones(1, 1);
  p.r = -VectorXd::Ones(1);
  EXPECT_EQ(Solve(p).status, Status::kInfeasible);
}

TEST(Conic, DetectsUnbounded) {
  ConicProgram p;
  p.cone.blocks = {{BlockKind::kNonneg, 2, "x"}};
  p.c = Eigen::Vector2d(-1, 0);
  p.A = MatrixXd(1, 2);
  p.A << 1, -1;
  p.r = VectorXd::Zero(1);
  EXPECT_EQ(Solve(p).status, Status::kUnbounded);
}

TEST(Conic, ValidateRejectsShapes) {
  auto p = LpAtLeastOne();
  p.c = VectorXd::Ones(3);
  try {
    p.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Conic, ExtractDualRequiresOptimal) {
  ConicProgram p;
  p.cone.blocks = {{BlockKind::kNonneg, 1, "x"}};
  p.c = VectorXd::Ones(1);
  p.A = MatrixXd::Ones(1, 1);
  p.r = -VectorXd::Ones(1);
  p.row_groups = {{"eq", 0, 1}};
  const auto s = Solve(p);
  try {
    ExtractDual(s, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotOptimal);
  }
}

MatrixXd RandomPd(std::mt19937_64& rng, int n) {
  const MatrixXd m = testing::RandomSymmetric(rng, n, -1, 1);
  return m * m.transpose() / n + 0.1 * MatrixXd::Identity(n, n);
}

// Strictly feasible primal/dual pair by construction: r = A(X0), c = A'y0 + S0.
ConicProgram RandomFeasibleSdp(std::mt19937_64& rng, int n, int m) {
  ConicProgram p;
  p.cone.blocks = {{BlockKind::kPsd, n, "X"}, {BlockKind::kSoc, 3, "q"},
                   {BlockKind::kNonneg, 2, "l"}};
  const int dim = p.cone.Dimension();
  p.A = MatrixXd(m, dim);
  for (int i = 0; i < m; ++i) p.A.row(i) = testing::RandomVector(rng, dim, -1, 1).transpose();
  VectorXd s0(dim), w0(dim);
  s0 << Svec(RandomPd(rng, n)), Eigen::Vector3d(2, 0.5, -0.3), Eigen::Vector2d(0.7, 1.2);
  w0 << Svec(RandomPd(rng, n)), Eigen::Vector3d(1.5, -0.4, 0.2), Eigen::Vector2d(0.3, 0.9);
  const VectorXd y0 = testing::RandomVector(rng, m, -1, 1);
  p.r = p.A * s0;
  p.c = p.A.transpose() * y0 + w0;
  return p;
}

TEST(Conic, RandomSdpStrongDualityAndConeMargins) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 6;
    const int m = 1 + t % (n * (n + 1) / 2 + 3);
    const auto p = RandomFeasibleSdp(rng, n, m);
    SolverOptions opt;
    opt.record_history = true;
    const auto s = Solve(p, opt);
    ASSERT_EQ(s.status, Status::kOptimal) << t;
    EXPECT_LE(std::abs(s.primal_objective - s.dual_objective), 1e-7) << t;
    // Weak duality at the returned (feasible) iterate.
    EXPECT_GE(s.primal_objective, s.dual_objective - 1e-7) << t;
    EXPECT_GE(linalg::MinEig(Smat(BlockValue(p, s.s, "X"), n)), -1e-9) << t;
    const VectorXd q = BlockValue(p, s.s, "q");
    EXPECT_LE(q.tail(2).norm(), q(0) + 1e-9) << t;
    EXPECT_GE(ConeMargin(p.cone, s.s), -1e-9);
  }
}

TEST(Conic, ResolveReproducesValue) {
  std::mt19937_64 rng(12);
  const auto p = RandomFeasibleSdp(rng, 4, 5);
  const auto a = Solve(p);
  const auto b = Solve(p);
  ASSERT_EQ(a.status, Status::kOptimal);
  EXPECT_LE(std::abs(a.primal_objective - b.primal_objective), 1e-9);
}

}  // namespace
}  // namespace etrs::conic
