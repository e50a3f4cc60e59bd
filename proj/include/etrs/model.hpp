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

#ifndef ETRS_MODEL_HPP_
#define ETRS_MODEL_HPP_

#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace etrs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// min x'Ax + 2a'x  s.t.  ||x||^2 <= delta^2,  b'x <= beta.
struct EtrsProblem {
  MatrixXd A;
  VectorXd a;
  VectorXd b;
  double beta = 0.0;
  double delta = 1.0;
  // Largest |A_ij - A_ji| seen on ingest, before symmetrization.
  double symmetry_defect = 0.0;

  int n() const { return static_cast<int>(A.rows()); }

  // Checks shapes and finiteness, then replaces A by (A + A')/2.
  static EtrsProblem Ingest(MatrixXd A, VectorXd a, VectorXd b, double beta,
                            double delta = 1.0);

  double Objective(const VectorXd& x) const;
};

struct ValidationReport {
  double symmetry_defect = 0.0;
  bool has_negative_eigenvalue = false;
  bool has_positive_eigenvalue = false;
  bool indefinite = false;
  bool b_zero = false;
  bool slater = false;
};

// Throws Error{kNonFiniteEntry} or Error{kDimensionMismatch}.
ValidationReport Validate(const EtrsProblem& problem);

// Feasibility tolerance scaled to the problem data.
double FeasibilityTolerance(const EtrsProblem& problem);

struct FeasiblePoint {
  VectorXd x;
  double ball_residual = 0.0;    // ||x||^2 - delta^2
  double linear_residual = 0.0;  // b'x - beta
  double objective = 0.0;

  static FeasiblePoint Evaluate(const EtrsProblem& problem, VectorXd x);
  bool Feasible(double tol) const {
    return ball_residual <= tol && linear_residual <= tol;
  }
};

struct SlaterWitness {
  VectorXd x_hat;
  std::pair<double, double> margins;  // both strictly negative
};

// Maps points of the unit-radius problem back to the original radius.
struct ScaleBack {
  double delta = 1.0;

  VectorXd ToOriginal(const VectorXd& normalized_x) const {
    return delta * normalized_x;
  }
  VectorXd ToNormalized(const VectorXd& x) const { return x / delta; }
  // Objective values are unchanged by the substitution x = delta * x~.
  double Value(double normalized_value) const { return normalized_value; }
};

std::pair<EtrsProblem, ScaleBack> Normalize(const EtrsProblem& problem);

std::optional<SlaterWitness> FindSlater(const EtrsProblem& problem);

}  // namespace etrs

#endif  // ETRS_MODEL_HPP_
