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

#ifndef ETRS_SOLVE_HPP_
#define ETRS_SOLVE_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "etrs/certify.hpp"
#include "etrs/conic.hpp"
#include "etrs/formulate.hpp"
#include "etrs/model.hpp"
#include "etrs/recover.hpp"
#include "etrs/trs.hpp"

namespace etrs {

enum class Activity { kInterior, kBallOnly, kLinearOnly, kBoth };
std::string_view ActivityName(Activity a);

struct Candidate {
  trs::KktPoint point;
  Activity activity = Activity::kInterior;
  // Where the candidate came from: interior, trs_global, trs_lngm,
  // boundary_saddle, linear_face, both_face.
  std::string source;
  bool feasible = false;
};

enum class SolvePath { kConic, kEnumeration, kAgreement };
std::string_view SolvePathName(SolvePath p);

struct Discrepancy {
  // cross_path, reference, bound_chain, certificate
  std::string kind;
  double expected = 0.0;
  double computed = 0.0;
  std::string message;
};

struct RelaxationValues {
  std::optional<double> sdp;
  std::optional<double> lmi;
  std::optional<double> socpsdp;
};

struct SolveOptions {
  double tol_feas = -1.0;  // < 0: FeasibilityTolerance of the normalized problem
  double tol_opt = 1e-4;   // cross-path agreement, relative to 1 + |value|
  std::optional<double> reference_value;
  double reference_tol = 1e-3;
  conic::SolverOptions conic;
  bool run_conic = true;
  bool run_enumeration = true;
};

struct SolveReport {
  VectorXd optimal_x;  // in the caller's coordinates (radius delta)
  double optimal_value = 0.0;
  SolvePath path = SolvePath::kEnumeration;
  bool reduces_to_trs = false;  // b = 0 with beta >= 0
  std::vector<Candidate> candidates;
  RelaxationValues relaxations;
  std::optional<double> enumeration_value;
  std::optional<double> conic_value;
  std::optional<RecoveryCase> recovery_case;
  bool recovery_ambiguous = false;
  // Multipliers are those of the unit-radius problem.
  std::optional<Certificate> certificate;
  std::optional<DualityReport> duality;
  std::vector<Discrepancy> discrepancies;
  std::vector<std::string> path_errors;

  bool HasDiscrepancy(std::string_view kind) const;
};

// Exact candidate enumeration over the four activity patterns of a
// unit-radius problem. Throws Error{kInfeasibleProblem}.
SolveReport SolveEnumeration(const EtrsProblem& problem, double tol_feas = -1.0);

// Both paths, all three relaxations, recovery, certificate and duality
// diagnosis. Throws Error{kBothPathsFailed} when neither path yields a point.
SolveReport SolveFull(const EtrsProblem& problem,
                      const SolveOptions& options = {});

}  // namespace etrs

#endif  // ETRS_SOLVE_HPP_
