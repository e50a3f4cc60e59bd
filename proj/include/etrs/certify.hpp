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

#ifndef ETRS_CERTIFY_HPP_
#define ETRS_CERTIFY_HPP_

#include <Eigen/Dense>

#include "etrs/formulate.hpp"
#include "etrs/model.hpp"

// Global optimality test for the unit-radius problem: x is optimal when
// multipliers lambda0 >= 0 and (-u0, u) in the second-order cone satisfy
//   (2A + 2 lambda0 I + b u' + u b') x = -(2a - beta u - b u0),
//   lambda0 (||x||^2 - 1) = 0,  (u'x - u0)(b'x - beta) = 0,
//   2A + 2 lambda0 I + b u' + u b' >= 0.
namespace etrs {

struct CertificateResiduals {
  double stationarity = 0.0;
  double comp_ball = 0.0;
  double comp_linear = 0.0;
  double psd_min_eig = 0.0;
  double soc_margin = 0.0;  // -u0 - ||u||
};

struct CertificateVerdict {
  bool feasible = false;
  bool stationarity = false;
  bool complementarity = false;
  bool psd = false;
  bool cone = false;
  bool sign = false;

  bool Pass() const {
    return feasible && stationarity && complementarity && psd && cone && sign;
  }
};

struct Certificate {
  double lambda0 = 0.0;
  double u0 = 0.0;
  VectorXd u;
  CertificateResiduals residuals;
  CertificateVerdict verdict;

  static Certificate FromDuals(const LmiDuals& duals);
};

// feas_tol < 0 selects FeasibilityTolerance(problem).
Certificate CheckCertificate(const EtrsProblem& problem, const VectorXd& x,
                             Certificate cert, double feas_tol = -1.0);

// Minimum-norm change of (lambda0, u0, u) that satisfies stationarity and
// the complementarity equalities implied by the active set at x. The
// inequalities are left to CheckCertificate.
Certificate PolishMultipliers(const EtrsProblem& problem, const VectorXd& x,
                              Certificate cert);

// 2A + 2 lambda0 I + b u' + u b'.
MatrixXd CertificateHessian(const EtrsProblem& problem, double lambda0,
                            const VectorXd& u);

struct DimensionReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;  // equals lambda1 when n = 1
  int ker_dim = 0;
  int rank_cond = 0;     // rank([A - lambda1 I, b])
  bool beck_eldar_holds = false;
  bool hsia_holds = false;
};

DimensionReport CheckDimensionConditions(const EtrsProblem& problem,
                                         double rank_tol = 1e-9);

struct DualityReport {
  double classical_gap = 0.0;  // exact - value(ClassicalSdp)
  double socpsdp_gap = 0.0;    // exact - value(PrimalSocpSdp)
  bool classical_exact = false;
  bool soc_dual_vanishes = false;    // ||u|| <= 1e-7 and |u0| > 1e-7
};

DualityReport DiagnoseDuality(double sdp_value, double socpsdp_value,
                              double exact_value, const LmiDuals& duals);

}  // namespace etrs

#endif  // ETRS_CERTIFY_HPP_
