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

#include "etrs/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "etrs/error.hpp"
#include "etrs/linalg.hpp"
#include "etrs/trs.hpp"

namespace etrs {

namespace {

constexpr int kPolishSteps = 500;
// Every kStride-th accepted sample is polished in addition to the running
// record holders.
constexpr long kStride = 1000;

}  // namespace

VectorXd ProjectFeasible(const VectorXd& x, const VectorXd& b, double beta) {
  const double nx = x.norm();
  VectorXd p = nx > 1.0 ? VectorXd(x / nx) : x;
  if (b.dot(p) <= beta) return p;
  const double bb = b.squaredNorm();
  VectorXd h = x - ((b.dot(x) - beta) / bb) * b;
  if (h.squaredNorm() <= 1.0) return h;
  // Both constraints active: nearest point of the circle on the slice.
  const VectorXd c = (beta / bb) * b;
  const double r = std::sqrt(std::max(0.0, 1.0 - c.squaredNorm()));
  VectorXd t = x - (b.dot(x) / bb) * b;
  if (t.norm() <= 1e-300) {
    const MatrixXd N = linalg::OrthonormalComplement(b);
    if (N.cols() == 0) return c;
    t = N.col(0);
  }
  return c + (r / t.norm()) * t;
}

OracleResult SampleMinimize(const EtrsProblem& input, long budget,
                            std::uint64_t seed) {
  const auto [problem, scale] = Normalize(input);
  const int n = problem.n();
  const MatrixXd& A = problem.A;
  const VectorXd& a = problem.a;
  const VectorXd& b = problem.b;
  const double beta = problem.beta;
  if (beta < -b.norm()) {
    throw Error(ErrorCode::kEmptyFeasibleSet,
                "beta below the minimum of b'x over the ball");
  }
  if (b.squaredNorm() == 0.0 && beta < 0.0) {
    throw Error(ErrorCode::kEmptyFeasibleSet, "b = 0 with beta < 0");
  }
  const bool has_b = b.squaredNorm() > 0.0;
  auto project = [&](const VectorXd& x) -> VectorXd {
    if (!has_b) {
      const double nx = x.norm();
      return nx > 1.0 ? VectorXd(x / nx) : x;
    }
    return ProjectFeasible(x, b, beta);
  };

  const double step = 1.0 / (2.0 * linalg::SymEigenDecompose(A).values.cwiseAbs().maxCoeff() + 1.0);
  OracleResult res;
  res.best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](const VectorXd& x) {
    const double f = problem.Objective(x);
    if (f < res.best_value) {
      res.best_value = f;
      res.best_x = x;
    }
  };
  auto polish = [&](VectorXd x) {
    x = project(x);
    consider(x);
    for (int k = 0; k < kPolishSteps; ++k) {
      x = project(x - step * 2.0 * (A * x + a));
      ++res.polish_iterations;
    }
    consider(x);
  };

  // Deterministic starts.
  const auto eig = linalg::SymEigenDecompose(A);
  std::vector<VectorXd> starts;
  starts.push_back(VectorXd::Zero(n));
  for (int i = 0; i < n; ++i) {
    starts.push_back(eig.vectors.col(i));
    starts.push_back(-eig.vectors.col(i));
  }
  try {
    starts.push_back(trs::SolveTrsGlobal(A, a).x);
    for (const auto& p : trs::EnumerateBoundaryKkt(A, a)) starts.push_back(p.x);
  } catch (const Error&) {
    // Sampling still covers the ball.
  }
  if (has_b) starts.push_back((beta / b.squaredNorm()) * b);
  for (const auto& s : starts) polish(s);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double record = std::numeric_limits<double>::infinity();
  long accepted = 0;
  VectorXd x(n);
  for (long s = 0; s < budget; ++s) {
    for (int i = 0; i < n; ++i) x(i) = normal(rng);
    const double radius = std::pow(unif(rng), 1.0 / n);
    const double nx = x.norm();
    if (nx == 0.0) continue;
    x *= radius / nx;
    ++res.samples_used;
    if (b.dot(x) > beta) continue;
    ++accepted;
    const double f = problem.Objective(x);
    if (f < record || accepted % kStride == 0) {
      record = std::min(record, f);
      polish(x);
    }
  }
  res.best_x = scale.ToOriginal(res.best_x);
  res.best_value = scale.Value(res.best_value);
  return res;
}

}  // namespace etrs
