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

#ifndef ETRS_ORACLE_HPP_
#define ETRS_ORACLE_HPP_

#include <cstdint>

#include <Eigen/Dense>

#include "etrs/model.hpp"

namespace etrs {

struct OracleResult {
  VectorXd best_x;
  double best_value = 0.0;
  long samples_used = 0;      // draws from the ball, rejected ones included
  long polish_iterations = 0;  // projected-gradient steps over all starts
};

// Euclidean projection onto {||x|| <= 1, b'x <= beta}. Requires the set to
// be nonempty.
VectorXd ProjectFeasible(const VectorXd& x, const VectorXd& b, double beta);

// Brute-force minimizer: uniform samples in the ball, deterministic seeds,
// projected-gradient polish. Deterministic for a given (budget, seed) and
// never worse for a larger budget under the same seed.
// Throws Error{kEmptyFeasibleSet}.
OracleResult SampleMinimize(const EtrsProblem& problem, long budget,
                            std::uint64_t seed);

}  // namespace etrs

#endif  // ETRS_ORACLE_HPP_
