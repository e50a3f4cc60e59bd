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

#ifndef ETRS_TRS_HPP_
#define ETRS_TRS_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

// Classical trust-region subproblem  min x'Ax + 2a'x  over the unit ball,
// solved through the secular equation on the spectral decomposition of A.
namespace etrs::trs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class KktKind {
  kGlobalTrs,           // boundary point with A + lambda I PSD, lambda >= 0
  kLngm,                // local, non-global minimizer on the sphere
  kBoundarySaddle,      // any other stationary point on the sphere
  kInteriorStationary,  // Ax = -a strictly inside the ball
};

std::string_view KktKindName(KktKind kind);

struct KktPoint {
  VectorXd x;
  double lambda = 0.0;
  KktKind kind = KktKind::kBoundarySaddle;
  double objective = 0.0;
  // min eigenvalue of A + lambda I restricted to the tangent space at x.
  double tangent_min_eig = 0.0;
};

double Objective(const MatrixXd& A, const VectorXd& a, const VectorXd& x);

// Global minimizer over ||x|| <= 1, hard case included.
// Throws Error{kNoConvergence} if the root find fails.
KktPoint SolveTrsGlobal(const MatrixXd& A, const VectorXd& a);

// Every stationary point of x'Ax + 2a'x on the unit sphere, classified.
// When a's component vanishes on an eigenspace whose pole admits a
// continuum of stationary points, two representatives are returned: the
// extremes of hint'x over that continuum when `hint` is given, otherwise
// +/- the leading eigenvector completion.
std::vector<KktPoint> EnumerateBoundaryKkt(
    const MatrixXd& A, const VectorXd& a,
    const std::optional<VectorXd>& hint = std::nullopt);

// The reported LNGM, if any (at most one).
std::optional<KktPoint> FindLngm(const std::vector<KktPoint>& points);

// Global minimizer over the sphere ||x||^2 = radius_sq, radius_sq >= 0.
KktPoint SolveEqualityTrs(const MatrixXd& A, const VectorXd& a,
                          double radius_sq);

}  // namespace etrs::trs

#endif  // ETRS_TRS_HPP_
