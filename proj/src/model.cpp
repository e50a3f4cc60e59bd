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

#include "etrs/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "etrs/error.hpp"
#include "etrs/linalg.hpp"

namespace etrs {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kNotOptimal: return "NotOptimal";
    case ErrorCode::kAlphaDrift: return "AlphaDrift";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kRecoveryFailed: return "RecoveryFailed";
    case ErrorCode::kInfeasibleProblem: return "InfeasibleProblem";
    case ErrorCode::kEmptyFeasibleSet: return "EmptyFeasibleSet";
    case ErrorCode::kBothPathsFailed: return "BothPathsFailed";
    case ErrorCode::kInvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace {

void CheckShapes(const EtrsProblem& p) {
  const auto n = p.A.rows();
  if (n < 1 || p.A.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "A must be a nonempty square matrix");
  }
  if (p.a.size() != n || p.b.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "a and b must have length n = " + std::to_string(n));
  }
}

void CheckFinite(const EtrsProblem& p) {
  if (!p.A.allFinite() || !p.a.allFinite() || !p.b.allFinite() ||
      !std::isfinite(p.beta) || !std::isfinite(p.delta)) {
    throw Error(ErrorCode::kNonFiniteEntry, "problem data contains NaN/Inf");
  }
}

double AsymmetryOf(const MatrixXd& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

EtrsProblem EtrsProblem::Ingest(MatrixXd A, VectorXd a, VectorXd b,
                                double beta, double delta) {
  EtrsProblem p;
  p.A = std::move(A);
  p.a = std::move(a);
  p.b = std::move(b);
  p.beta = beta;
  p.delta = delta;
  CheckShapes(p);
  CheckFinite(p);
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::kNonPositiveRadius, "delta must be positive");
  }
  p.symmetry_defect = AsymmetryOf(p.A);
  p.A = linalg::Symmetrize(p.A);
  return p;
}

double EtrsProblem::Objective(const VectorXd& x) const {
  return x.dot(A * x) + 2.0 * a.dot(x);
}

ValidationReport Validate(const EtrsProblem& problem) {
  CheckShapes(problem);
  CheckFinite(problem);
  if (!(problem.delta > 0.0)) {
    throw Error(ErrorCode::kNonPositiveRadius, "delta must be positive");
  }
  ValidationReport report;
  report.symmetry_defect =
      std::max(problem.symmetry_defect, AsymmetryOf(problem.A));
  const auto eig = linalg::SymEigenDecompose(linalg::Symmetrize(problem.A));
  const double tol = 1e-12 * (1.0 + problem.A.norm());
  report.has_negative_eigenvalue = eig.values(0) < -tol;
  report.has_positive_eigenvalue = eig.values(eig.values.size() - 1) > tol;
  report.indefinite =
      report.has_negative_eigenvalue && report.has_positive_eigenvalue;
  report.b_zero = problem.b.isZero(0.0);
  report.slater = FindSlater(problem).has_value();
  return report;
}

double FeasibilityTolerance(const EtrsProblem& problem) {
  return 1e-8 *
         (1.0 + problem.delta * problem.delta + std::abs(problem.beta));
}

FeasiblePoint FeasiblePoint::Evaluate(const EtrsProblem& problem, VectorXd x) {
  FeasiblePoint fp;
  fp.ball_residual = x.squaredNorm() - problem.delta * problem.delta;
  fp.linear_residual = problem.b.dot(x) - problem.beta;
  fp.objective = problem.Objective(x);
  fp.x = std::move(x);
  return fp;
}

std::pair<EtrsProblem, ScaleBack> Normalize(const EtrsProblem& problem) {
  if (!(problem.delta > 0.0)) {
    throw Error(ErrorCode::kNonPositiveRadius, "delta must be positive");
  }
  const double d = problem.delta;
  EtrsProblem out;
  out.A = (d * d) * problem.A;
  out.a = d * problem.a;
  out.b = d * problem.b;
  out.beta = problem.beta;
  out.delta = 1.0;
  out.symmetry_defect = problem.symmetry_defect;
  return {std::move(out), ScaleBack{d}};
}

std::optional<SlaterWitness> FindSlater(const EtrsProblem& problem) {
  const double d = problem.delta;
  const double b_norm = problem.b.norm();
  auto witness = [&](const VectorXd& x) -> std::optional<SlaterWitness> {
    const double ball = x.squaredNorm() - d * d;
    const double lin = problem.b.dot(x) - problem.beta;
    if (ball < 0.0 && lin < 0.0) return SlaterWitness{x, {ball, lin}};
    return std::nullopt;
  };

  const VectorXd origin = VectorXd::Zero(problem.n());
  if (auto w = witness(origin)) return w;
  if (b_norm == 0.0) return std::nullopt;
  // inf of b'x over the open ball is -delta*||b||, never attained.
  if (-d * b_norm >= problem.beta) return std::nullopt;

  const VectorXd dir = -problem.b / b_norm;
  for (double t : {d / 2.0, d / 4.0, d / 8.0}) {
    if (auto w = witness(t * dir)) return w;
  }
  // Thin cap: b'(t dir) = -t||b|| < beta needs t in (-beta/||b||, delta).
  const double t_min = -problem.beta / b_norm;
  const double t = 0.5 * (t_min + d);
  return witness(t * dir);
}

}  // namespace etrs
