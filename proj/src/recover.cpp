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

#include "etrs/recover.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "etrs/error.hpp"
#include "etrs/linalg.hpp"

namespace etrs {

namespace {

double Form(const MatrixXd& G, const VectorXd& y) { return y.dot(G * y); }

MatrixXd Reassemble(const RankOneTerms& terms, Eigen::Index order) {
  MatrixXd sum = MatrixXd::Zero(order, order);
  for (const auto& y : terms) sum.noalias() += y * y.transpose();
  return sum;
}

RankOneTerms EigenTerms(const MatrixXd& Y) {
  const auto eig = linalg::SymEigenDecompose(linalg::Symmetrize(Y));
  const double keep = 1e-12 * (1.0 + std::abs(Y.trace()));
  RankOneTerms terms;
  for (Eigen::Index i = eig.values.size() - 1; i >= 0; --i) {
    if (eig.values(i) > keep) {
      terms.push_back(std::sqrt(eig.values(i)) * eig.vectors.col(i));
    }
  }
  return terms;
}

// Smaller-magnitude real root of qa t^2 + qb t + qc = 0 (qa qc < 0).
double SmallRoot(double qa, double qb, double qc) {
  const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  const double r1 = q / qa;
  const double r2 = q != 0.0 ? qc / q : r1;
  return std::abs(r1) <= std::abs(r2) ? r1 : r2;
}

}  // namespace

DecompKit DecompKit::Make(const MatrixXd& Y, const EtrsProblem& problem) {
  const int n = problem.n();
  DecompKit kit;
  kit.J = MatrixXd::Identity(n + 1, n + 1);
  kit.J.bottomRightCorner(n, n) *= -1.0;
  kit.g.resize(n + 1);
  kit.g(0) = problem.beta;
  kit.g.tail(n) = -problem.b;
  kit.Y = Y;
  kit.y_g = Y * kit.g;
  kit.t_g = kit.y_g(0);
  return kit;
}

RankOneTerms SturmZhangDecompose(const MatrixXd& Y, const MatrixXd& G_in,
                                 std::vector<double>* drift) {
  if (Y.rows() != Y.cols() || G_in.rows() != Y.rows() ||
      G_in.cols() != Y.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "decomposition needs square Y and G of equal order");
  }
  const MatrixXd G = linalg::Symmetrize(G_in);
  const double gy = (G.array() * Y.array()).sum();
  if (gy < -1e-6) {
    throw Error(ErrorCode::kPreconditionViolated,
                "G . Y = " + std::to_string(gy) + " is negative");
  }
  RankOneTerms terms = EigenTerms(Y);
  const double tol = 1e-12 * (1.0 + G.norm() * (1.0 + Y.norm()));
  std::vector<double> forms(terms.size());
  for (size_t i = 0; i < terms.size(); ++i) forms[i] = Form(G, terms[i]);

  for (size_t step = 0; step + 1 < std::max<size_t>(terms.size(), 1); ++step) {
    size_t ip = terms.size();
    size_t jn = terms.size();
    for (size_t k = 0; k < terms.size(); ++k) {
      if (forms[k] > tol && (ip == terms.size() || forms[k] > forms[ip])) ip = k;
      if (forms[k] < -tol && (jn == terms.size() || forms[k] < forms[jn])) jn = k;
    }
    if (ip == terms.size() || jn == terms.size()) break;
    const VectorXd yi = terms[ip];
    const VectorXd yj = terms[jn];
    // (yi + gamma yj)' G (yi + gamma yj) = 0.
    const double gamma = SmallRoot(forms[jn], 2.0 * yi.dot(G * yj), forms[ip]);
    const double scale = 1.0 / std::sqrt(1.0 + gamma * gamma);
    terms[ip] = scale * (yi + gamma * yj);
    terms[jn] = scale * (yj - gamma * yi);
    forms[ip] = 0.0;
    forms[jn] = Form(G, terms[jn]);
    if (drift != nullptr) {
      drift->push_back((Reassemble(terms, Y.rows()) - Y).norm());
    }
  }
  return terms;
}

std::string_view RecoveryCaseName(RecoveryCase c) {
  switch (c) {
    case RecoveryCase::kRankOne: return "rank_one";
    case RecoveryCase::kCase1: return "case1";
    case RecoveryCase::kCase2: return "case2";
    case RecoveryCase::kCase31: return "case3.1";
    case RecoveryCase::kCase32: return "case3.2";
  }
  return "unknown";
}

Recovery RecoverOptimal(const LiftedSolution& lifted,
                        const EtrsProblem& problem) {
  const int n = problem.n();
  const MatrixXd Y = linalg::Symmetrize(lifted.Y);
  if (Y.rows() != n + 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lifted matrix order does not match the problem");
  }
  Recovery out;
  VectorXd x;
  auto finish = [&]() {
    out.point = FeasiblePoint::Evaluate(problem, x);
    const double miss = std::abs(out.point.objective - lifted.value);
    if (!std::isfinite(miss) || miss > 1e-4 * (1.0 + std::abs(lifted.value))) {
      throw Error(ErrorCode::kRecoveryFailed,
                  std::string(RecoveryCaseName(out.used)) +
                      " point misses the relaxation value by " +
                      std::to_string(miss));
    }
    return out;
  };

  if (NumericalRank(Y) <= 1) {
    out.used = RecoveryCase::kRankOne;
    x = Y.col(0).tail(n) / Y(0, 0);
    return finish();
  }

  DecompKit kit = DecompKit::Make(Y, problem);
  // Classification on the unit direction of g; every case formula is
  // invariant under scaling g.
  const double gnorm = kit.g.norm();
  const VectorXd yg_unit = gnorm > 0.0 ? VectorXd(kit.y_g / gnorm) : kit.y_g;
  const double thr = 1e-7 * (1.0 + Y.norm());
  const double q1 = yg_unit.norm();
  const double q2 = Y.trace() - 2.0 * Y.bottomRightCorner(n, n).trace();
  const double q3 = yg_unit.dot(kit.J * yg_unit);
  auto near = [&](double q) {
    return std::abs(q) > 0.1 * thr && std::abs(q) <= 10.0 * thr;
  };

  auto from_vector = [&](const VectorXd& v) -> VectorXd {
    return v.tail(n) / v(0);
  };

  if (q1 <= thr) {
    out.used = RecoveryCase::kCase1;
    out.ambiguous = near(q1);
    RankOneTerms terms = SturmZhangDecompose(Y, kit.J);
    size_t best = 0;
    for (size_t k = 0; k < terms.size(); ++k) {
      if (terms[k](0) < 0.0) terms[k] = -terms[k];
      if (terms[k](0) > terms[best](0)) best = k;
    }
    x = from_vector(terms[best]);
    return finish();
  }
  out.ambiguous = near(q1);
  if (q2 > thr) {
    out.used = RecoveryCase::kCase2;
    out.ambiguous = out.ambiguous || near(q2);
    x = from_vector(kit.y_g);
    return finish();
  }
  out.ambiguous = out.ambiguous || near(q2);
  if (q3 <= thr) {
    out.used = RecoveryCase::kCase31;
    out.ambiguous = out.ambiguous || near(q3) || q3 < -thr;
    x = from_vector(kit.y_g);
    return finish();
  }
  out.used = RecoveryCase::kCase32;
  out.ambiguous = out.ambiguous || near(q3);
  const double gyg = kit.g.dot(kit.y_g);
  const MatrixXd y_tilde = Y - kit.y_g * kit.y_g.transpose() / gyg;
  // J . Y~ < 0 here, so plain eigen terms already contain a negative one.
  const RankOneTerms terms = EigenTerms(y_tilde);
  size_t pick = terms.size();
  double most = 0.0;
  for (size_t k = 0; k < terms.size(); ++k) {
    const double f = Form(kit.J, terms[k]);
    if (f < most) {
      most = f;
      pick = k;
    }
  }
  if (pick == terms.size()) {
    throw Error(ErrorCode::kRecoveryFailed,
                "no term of the residual matrix has a negative J-form");
  }
  const VectorXd& yt = terms[pick];
  // J . (y_g + alpha yt)(y_g + alpha yt)' = 0; roots have opposite signs.
  const double qa = Form(kit.J, yt);
  const double qb = 2.0 * kit.y_g.dot(kit.J * yt);
  const double qc = Form(kit.J, kit.y_g);
  const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  const double roots[2] = {q / qa, qc / q};
  VectorXd chosen;
  double best_head = -std::numeric_limits<double>::infinity();
  double best_mag = -1.0;
  for (double alpha : roots) {
    const VectorXd v = kit.y_g + alpha * yt;
    const double head = v(0);
    // Positive head wins; between two positive heads, the larger one; a
    // zero head falls back to the larger-magnitude root.
    if (head > best_head ||
        (head == best_head && std::abs(alpha) > best_mag)) {
      best_head = head;
      best_mag = std::abs(alpha);
      chosen = v;
    }
  }
  if (!(best_head > 0.0)) {
    throw Error(ErrorCode::kRecoveryFailed,
                "no root of the boundary quadratic has a positive head");
  }
  x = from_vector(chosen);
  return finish();
}

}  // namespace etrs
