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

#ifndef ETRS_FORMULATE_HPP_
#define ETRS_FORMULATE_HPP_

#include <string_view>

#include <Eigen/Dense>

#include "etrs/conic.hpp"
#include "etrs/model.hpp"

// Conic programs built from a unit-radius EtrsProblem. All three share the
// lifted variable Y = [[1, x'], [x, X]], so X >= xx' is Y >= 0 with the
// corner pinned to one.
namespace etrs {

enum class RelaxationKind {
  kClassicalSdp,   // trace(X) <= 1, b'x <= beta, Y >= 0
  kDualLmi,        // max z over (z, lambda0, u0, u) with the LMI in PSD
  kPrimalSocpSdp,  // trace(X) <= 1, ||beta x - Xb|| <= beta - b'x, Y >= 0
};

std::string_view RelaxationName(RelaxationKind kind);
RelaxationKind ParseRelaxation(std::string_view name);  // sdp|lmi|socpsdp

// Multipliers of the LMI form; u0 <= -||u|| and lambda0 >= 0.
struct LmiDuals {
  double lambda0 = 0.0;
  double u0 = 0.0;
  VectorXd u;
  double z = 0.0;
};

struct LiftedSolution {
  RelaxationKind kind = RelaxationKind::kPrimalSocpSdp;
  MatrixXd Y;
  double value = 0.0;
  LmiDuals duals;

  double Alpha() const { return Y(0, 0); }
  VectorXd x() const { return Y.col(0).tail(Y.rows() - 1); }
  MatrixXd X() const {
    return Y.bottomRightCorner(Y.rows() - 1, Y.cols() - 1);
  }
};

conic::ConicProgram BuildClassicalSdp(const EtrsProblem& problem);
conic::ConicProgram BuildDualLmi(const EtrsProblem& problem);
conic::ConicProgram BuildPrimalSocpSdp(const EtrsProblem& problem);
conic::ConicProgram BuildRelaxation(RelaxationKind kind,
                                    const EtrsProblem& problem);

// Reassembles Y and the LMI multipliers from a solve of the matching
// program. Throws Error{kNotOptimal} or Error{kAlphaDrift}.
LiftedSolution ExtractLifted(const conic::ConicSolution& solution,
                             const conic::ConicProgram& program,
                             const EtrsProblem& problem, RelaxationKind kind);

// Builds, solves and extracts in one call.
LiftedSolution SolveRelaxation(RelaxationKind kind, const EtrsProblem& problem,
                               const conic::SolverOptions& options = {});

// Eigenvalues above 1e-7 * trace(Y).
int NumericalRank(const MatrixXd& Y);
inline bool IsRankOne(const MatrixXd& Y) { return NumericalRank(Y) <= 1; }

// C with C . Y = A . X + 2 a'x.
MatrixXd LiftedObjective(const EtrsProblem& problem);

}  // namespace etrs

#endif  // ETRS_FORMULATE_HPP_
