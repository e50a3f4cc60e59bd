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

#include "etrs/error.hpp"
#include "etrs/oracle.hpp"
#include "etrs/solve.hpp"
#include "support.hpp"

namespace etrs {
namespace {

using testing::Example;

TEST(Oracle, ExampleThree) {
  const auto r = SampleMinimize(Example(3), 200000, 42);
  EXPECT_LE(r.best_value, -9.745);
  EXPECT_EQ(r.samples_used, 200000);
}

TEST(Oracle, ConvexOrigin) {
  const auto p = EtrsProblem::Ingest(MatrixXd::Identity(3, 3), VectorXd::Zero(3),
                                     VectorXd::Zero(3), 0.0);
  const auto r = SampleMinimize(p, 1000, 1);
  EXPECT_NEAR(r.best_value, 0.0, 1e-12);
  EXPECT_LE(r.best_x.norm(), 1e-6);
}

TEST(Oracle, ExampleTwoCanonicalValue) {
  const auto r = SampleMinimize(Example(2), 200000, 42);
  EXPECT_NEAR(r.best_value, -2.8572, 1e-4);
  EXPECT_GT(std::abs(r.best_value - (-2.4972)), 0.3);
}

TEST(Oracle, DeterministicAndMonotone) {
  const auto p = Example(4);
  const auto a = SampleMinimize(p, 5000, 9);
  const auto b = SampleMinimize(p, 5000, 9);
  EXPECT_EQ(a.best_value, b.best_value);
  EXPECT_EQ(a.best_x, b.best_x);
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const auto q = testing::RandomInstance(rng, 2 + t % 6);
    double prev = std::numeric_limits<double>::infinity();
    for (long budget : {0L, 10L, 100L, 1000L, 10000L}) {
      const double v = SampleMinimize(q, budget, 5).best_value;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(Oracle, FeasibleResult) {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 20; ++t) {
    const auto q = testing::RandomInstance(rng, 2 + t % 7);
    const auto r = SampleMinimize(q, 2000, t);
    EXPECT_LE(r.best_x.squaredNorm() - 1.0, 1e-9);
    EXPECT_LE(q.b.dot(r.best_x) - q.beta, 1e-9);
  }
}

TEST(Oracle, FixturesCloseToSolver) {
  for (int k = 1; k <= 4; ++k) {
    const auto o = SampleMinimize(Example(k), 200000, 42);
    const auto s = SolveFull(Example(k));
    EXPECT_LE(std::abs(o.best_value - s.optimal_value), 1e-2) << k;
  }
}

TEST(Oracle, EmptyFeasibleSet) {
  const auto p = EtrsProblem::Ingest(MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                                     Eigen::Vector2d(1, 0), -2.0);
  try {
    SampleMinimize(p, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyFeasibleSet);
  }
}

TEST(Oracle, ProjectionIsNearestFeasiblePoint) {
  std::mt19937_64 rng(63);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 4;
    const VectorXd b = testing::RandomVector(rng, n);
    const double beta = 0.3 * b.norm() * (t % 3 - 1);
    const VectorXd x = testing::RandomVector(rng, n, -3, 3);
    const VectorXd p = ProjectFeasible(x, b, beta);
    EXPECT_LE(p.squaredNorm(), 1 + 1e-12);
    EXPECT_LE(b.dot(p), beta + 1e-12 * (1 + b.norm()));
    const double d = (x - p).norm();
    for (int s = 0; s < 2000; ++s) {
      const VectorXd y = testing::BallPoint(rng, n);
      if (b.dot(y) <= beta) ASSERT_GE((x - y).norm(), d - 1e-12);
    }
  }
}

}  // namespace
}  // namespace etrs
