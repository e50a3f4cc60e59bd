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

#include "etrs/certify.hpp"

#include <cmath>

#include "etrs/error.hpp"
#include "etrs/linalg.hpp"

namespace etrs {

Certificate Certificate::FromDuals(const LmiDuals& duals) {
  Certificate c;
  c.lambda0 = duals.lambda0;
  c.u0 = duals.u0;
  c.u = duals.u;
  return c;
}

MatrixXd CertificateHessian(const EtrsProblem& problem, double lambda0,
                            const VectorXd& u) {
  MatrixXd h = 2.0 * problem.A;
  h.diagonal().array() += 2.0 * lambda0;
  h.noalias() += problem.b * u.transpose() + u * problem.b.transpose();
  return h;
}

Certificate CheckCertificate(const EtrsProblem& problem, const VectorXd& x,
                             Certificate cert, double feas_tol) {
  const int n = problem.n();
  if (x.size() != n || cert.u.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "certificate and point must match the problem dimension");
  }
  if (feas_tol < 0.0) feas_tol = FeasibilityTolerance(problem);
  const auto& b = problem.b;
  const double beta = problem.beta;
  const MatrixXd h = CertificateHessian(problem, cert.lambda0, cert.u);
  const VectorXd lin = 2.0 * problem.a - beta * cert.u - b * cert.u0;

  auto& r = cert.residuals;
  r.stationarity = (h * x + lin).norm();
  r.comp_ball = std::abs(cert.lambda0 * (x.squaredNorm() - 1.0));
  r.comp_linear = std::abs((cert.u.dot(x) - cert.u0) * (b.dot(x) - beta));
  r.psd_min_eig = linalg::MinEig(h);
  r.soc_margin = -cert.u0 - cert.u.norm();

  auto& v = cert.verdict;
  const bool finite = x.allFinite();
  v.feasible = finite && x.squaredNorm() - 1.0 <= feas_tol &&
               b.dot(x) - beta <= feas_tol;
  v.stationarity = r.stationarity <= 1e-6 * (1.0 + problem.a.norm());
  v.complementarity = r.comp_ball <= 1e-6 && r.comp_linear <= 1e-6;
  v.psd = r.psd_min_eig >= -1e-7 * (1.0 + h.norm());
  v.cone = r.soc_margin >= -1e-8;
  v.sign = cert.lambda0 >= -1e-8;
  return cert;
}

Certificate PolishMultipliers(const EtrsProblem& problem, const VectorXd& x,
                              Certificate cert) {
  const int n = problem.n();
  const auto& b = problem.b;
  const double bx_gap = b.dot(x) - problem.beta;
  // Near-active constraints are treated as active; keeping a 1e-9 slack as
  // a coefficient would hand the least-squares solve a huge lever on u.
  const bool ball_active = x.squaredNorm() >= 1.0 - 1e-7;
  const bool linear_active =
      bx_gap >= -1e-7 * (1.0 + std::abs(problem.beta) + b.norm());
  const double slack = linear_active ? 0.0 : bx_gap;
  // Unknowns (lambda0, u0, u).
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  const VectorXd target = -2.0 * (problem.A * x + problem.a);
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 2);
    row(0) = 2.0 * x(i);
    row(1) = -b(i);
    row.tail(n) = b(i) * x.transpose();
    row(2 + i) += slack;
    rows.push_back(row);
    rhs.push_back(target(i));
  }
  if (!ball_active) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 2);
    row(0) = 1.0;
    rows.push_back(row);
    rhs.push_back(0.0);
  }
  if (!linear_active) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 2);
    row(1) = -1.0;
    row.tail(n) = x.transpose();
    rows.push_back(row);
    rhs.push_back(0.0);
  }
  MatrixXd k(static_cast<Eigen::Index>(rows.size()), n + 2);
  VectorXd t(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    k.row(static_cast<Eigen::Index>(i)) = rows[i];
    t(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  VectorXd theta(n + 2);
  theta(0) = cert.lambda0;
  theta(1) = cert.u0;
  theta.tail(n) = cert.u;
  const VectorXd delta =
      k.completeOrthogonalDecomposition().solve(VectorXd(t - k * theta));
  theta += delta;
  cert.lambda0 = theta(0);
  cert.u0 = theta(1);
  cert.u = theta.tail(n);
  return cert;
}

DimensionReport CheckDimensionConditions(const EtrsProblem& problem,
                                         double rank_tol) {
  const int n = problem.n();
  const auto eig = linalg::SymEigenDecompose(problem.A);
  DimensionReport rep;
  rep.lambda1 = eig.values(0);
  rep.lambda2 = n > 1 ? eig.values(1) : eig.values(0);
  const double tol = 1e-8 * (1.0 + std::abs(rep.lambda1));
  for (int i = 0; i < n; ++i) {
    if (std::abs(eig.values(i) - rep.lambda1) <= tol) ++rep.ker_dim;
  }
  MatrixXd aug(n, n + 1);
  aug.leftCols(n) = problem.A;
  aug.leftCols(n).diagonal().array() -= rep.lambda1;
  aug.col(n) = problem.b;
  rep.rank_cond = linalg::MatrixRank(aug, rank_tol);
  rep.beck_eldar_holds = n > 1 && std::abs(rep.lambda2 - rep.lambda1) <= tol;
  rep.hsia_holds = rep.rank_cond <= n - 1;
  return rep;
}

DualityReport DiagnoseDuality(double sdp_value, double socpsdp_value,
                              double exact_value, const LmiDuals& duals) {
  DualityReport rep;
  rep.classical_gap = exact_value - sdp_value;
  rep.socpsdp_gap = exact_value - socpsdp_value;
  rep.classical_exact =
      std::abs(rep.classical_gap) <= 1e-5 * (1.0 + std::abs(exact_value));
  rep.soc_dual_vanishes = duals.u.norm() <= 1e-7 && std::abs(duals.u0) > 1e-7;
  return rep;
}

}  // namespace etrs
