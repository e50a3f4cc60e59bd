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

#ifndef ETRS_TESTS_SUPPORT_HPP_
#define ETRS_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "etrs/linalg.hpp"
#include "etrs/model.hpp"

namespace etrs::testing {

inline EtrsProblem Example(int k) {
  switch (k) {
    case 1:
      return EtrsProblem::Ingest(Eigen::Vector3d(-4, 12, 11).asDiagonal().toDenseMatrix(),
                                 Eigen::Vector3d(-4, 0, 0), Eigen::Vector3d(20, 8, -14), 5);
    case 2:
      return EtrsProblem::Ingest(Eigen::Vector3d(-4, 5, 3).asDiagonal().toDenseMatrix(),
                                 Eigen::Vector3d(0.5714, 0, 0), Eigen::Vector3d(-17, 14, -2),
                                 4.4);
    case 3:
      return EtrsProblem::Ingest(Eigen::Vector3d(-4, -8, 2).asDiagonal().toDenseMatrix(),
                                 Eigen::Vector3d(0, 2.2857, 0), Eigen::Vector3d(4, -15, 18),
                                 4);
    default:
      return EtrsProblem::Ingest(Eigen::Vector3d(-4, 1, -3).asDiagonal().toDenseMatrix(),
                                 Eigen::Vector3d(0.5714, 0, 0), Eigen::Vector3d(-6, -3, 0),
                                 2.2);
  }
}

inline MatrixXd RandomSymmetric(std::mt19937_64& rng, int n, double lo = -10, double hi = 10) {
  std::uniform_real_distribution<double> u(lo, hi);
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

inline VectorXd RandomVector(std::mt19937_64& rng, int n, double lo = -10, double hi = 10) {
  std::uniform_real_distribution<double> u(lo, hi);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Entries U[-10, 10], A indefinite, Slater point present.
inline EtrsProblem RandomInstance(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-10, 10);
  for (;;) {
    MatrixXd A = RandomSymmetric(rng, n);
    const auto eig = linalg::SymEigenDecompose(A);
    if (!(eig.values(0) < 0.0 && eig.values(n - 1) > 0.0)) continue;
    VectorXd a = RandomVector(rng, n);
    VectorXd b = RandomVector(rng, n);
    const double beta = u(rng);
    EtrsProblem p = EtrsProblem::Ingest(A, a, b, beta);
    if (FindSlater(p)) return p;
  }
}

// Uniform point of the unit ball.
inline VectorXd BallPoint(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = g(rng);
  return x * (std::pow(u(rng), 1.0 / n) / x.norm());
}

inline VectorXd SpherePoint(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = g(rng);
  return x.normalized();
}

}  // namespace etrs::testing

#endif  // ETRS_TESTS_SUPPORT_HPP_
