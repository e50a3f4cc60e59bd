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

#ifndef ETRS_RECOVER_HPP_
#define ETRS_RECOVER_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "etrs/formulate.hpp"
#include "etrs/model.hpp"

namespace etrs {

// J = diag(1, -I), g = (beta; -b), y_g = Y g.
struct DecompKit {
  MatrixXd J;
  VectorXd g;
  MatrixXd Y;
  VectorXd y_g;
  double t_g = 0.0;

  static DecompKit Make(const MatrixXd& Y, const EtrsProblem& problem);
};

using RankOneTerms = std::vector<VectorXd>;

// Y = sum y_i y_i' with y_i' G y_i >= -tol for every term (all ~0 when
// G . Y ~ 0). Throws Error{kPreconditionViolated} when G . Y < -1e-6.
// When drift is non-null it receives ||sum y_i y_i' - Y||_F after each
// pair update.
RankOneTerms SturmZhangDecompose(const MatrixXd& Y, const MatrixXd& G,
                                 std::vector<double>* drift = nullptr);

enum class RecoveryCase {
  kRankOne,
  kCase1,   // Y g = 0
  kCase2,   // J . Y > 0
  kCase31,  // J . Y = 0, J . y_g y_g' = 0
  kCase32,  // J . Y = 0, J . y_g y_g' > 0
};

std::string_view RecoveryCaseName(RecoveryCase c);

struct Recovery {
  FeasiblePoint point;
  RecoveryCase used = RecoveryCase::kRankOne;
  // A classification quantity sat near a case boundary; the earlier case won.
  bool ambiguous = false;
};

// Extracts an eTRS point from a lifted solution of the unit-radius problem.
// Throws Error{kRecoveryFailed} when f(x) misses lifted.value by more than
// 1e-4 (1 + |value|).
Recovery RecoverOptimal(const LiftedSolution& lifted,
                        const EtrsProblem& problem);

}  // namespace etrs

#endif  // ETRS_RECOVER_HPP_
