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

#include "etrs/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "etrs/error.hpp"
#include "etrs/linalg.hpp"

namespace etrs {

std::string_view ActivityName(Activity a) {
  switch (a) {
    case Activity::kInterior: return "interior";
    case Activity::kBallOnly: return "ball";
    case Activity::kLinearOnly: return "linear";
    case Activity::kBoth: return "both";
  }
  return "unknown";
}

std::string_view SolvePathName(SolvePath p) {
  switch (p) {
    case SolvePath::kConic: return "conic";
    case SolvePath::kEnumeration: return "enumeration";
    case SolvePath::kAgreement: return "agreement";
  }
  return "unknown";
}

bool SolveReport::HasDiscrepancy(std::string_view kind) const {
  return std::any_of(discrepancies.begin(), discrepancies.end(),
                     [&](const Discrepancy& d) { return d.kind == kind; });
}

namespace {

void CheckNonEmpty(const EtrsProblem& problem, double tol) {
  const double bn = problem.b.norm();
  if (-bn > problem.beta + tol) {
    throw Error(ErrorCode::kInfeasibleProblem,
                "min of b'x over the ball is " + std::to_string(-bn) +
                    " > beta = " + std::to_string(problem.beta));
  }
}

const char* SourceOf(trs::KktKind kind) {
  switch (kind) {
    case trs::KktKind::kGlobalTrs: return "trs_global";
    case trs::KktKind::kLngm: return "trs_lngm";
    case trs::KktKind::kBoundarySaddle: return "boundary_saddle";
    case trs::KktKind::kInteriorStationary: return "interior";
  }
  return "unknown";
}

// Newton on the KKT system of the face that is active at x. Recovered
// conic points carry the relaxation's accuracy; refining them lets the
// certificate be checked at its own tolerances. Returns nullopt when the
// iteration does not settle at a feasible point no worse than x.
std::optional<VectorXd> RefineOnFace(const EtrsProblem& problem, const VectorXd& x0) {
  const int n = problem.n();
  const double bn = problem.b.norm();
  const bool ball = std::abs(x0.squaredNorm() - 1.0) <= 1e-6;
  const bool lin = bn > 0.0 && std::abs(problem.b.dot(x0) - problem.beta) <= 1e-6 * (1.0 + bn);
  const int m = (ball ? 1 : 0) + (lin ? 1 : 0);
  auto grads = [&](const VectorXd& x) {
    MatrixXd g(n, m);
    int k = 0;
    if (ball) g.col(k++) = 2.0 * x;
    if (lin) g.col(k++) = problem.b;
    return g;
  };
  VectorXd x = x0;
  VectorXd mult = VectorXd::Zero(m);
  if (m > 0) {
    mult = grads(x).completeOrthogonalDecomposition().solve(
        VectorXd(-2.0 * (problem.A * x + problem.a)));
  }
  auto residual = [&](const VectorXd& xv, const VectorXd& mv) {
    VectorXd f(n + m);
    f.head(n) = 2.0 * (problem.A * xv + problem.a) + grads(xv) * mv;
    int k = 0;
    if (ball) f(n + k++) = xv.squaredNorm() - 1.0;
    if (lin) f(n + k++) = problem.b.dot(xv) - problem.beta;
    return f;
  };
  const double scale = 1.0 + problem.A.norm() + problem.a.norm();
  for (int it = 0; it < 30; ++it) {
    const VectorXd f = residual(x, mult);
    if (f.norm() <= 1e-13 * scale) break;
    MatrixXd jac = MatrixXd::Zero(n + m, n + m);
    jac.topLeftCorner(n, n) = 2.0 * problem.A;
    if (ball) jac.topLeftCorner(n, n).diagonal().array() += 2.0 * mult(0);
    const MatrixXd g = grads(x);
    jac.topRightCorner(n, m) = g;
    jac.bottomLeftCorner(m, n) = g.transpose();
    const VectorXd step = jac.completeOrthogonalDecomposition().solve(VectorXd(-f));
    x += step.head(n);
    mult += step.tail(m);
  }
  if (!(residual(x, mult).norm() <= 1e-10 * scale) || (x - x0).norm() > 1e-3) {
    return std::nullopt;
  }
  const auto fp = FeasiblePoint::Evaluate(problem, x);
  if (!fp.Feasible(FeasibilityTolerance(problem))) return std::nullopt;
  if (fp.objective > problem.Objective(x0) + 1e-6 * (1.0 + std::abs(fp.objective))) {
    return std::nullopt;
  }
  return x;
}

}  // namespace

SolveReport SolveEnumeration(const EtrsProblem& problem, double tol_feas) {
  if (tol_feas < 0.0) tol_feas = FeasibilityTolerance(problem);
  CheckNonEmpty(problem, tol_feas);
  const MatrixXd& A = problem.A;
  const VectorXd& a = problem.a;
  const VectorXd& b = problem.b;
  const double beta = problem.beta;
  const double bn = b.norm();

  SolveReport rep;
  auto add = [&](trs::KktPoint p, Activity act, std::string source) {
    p.objective = problem.Objective(p.x);
    const auto fp = FeasiblePoint::Evaluate(problem, p.x);
    Candidate c{std::move(p), act, std::move(source), fp.Feasible(tol_feas)};
    rep.candidates.push_back(std::move(c));
  };

  // (a) Interior stationary point.
  const auto eig = linalg::SymEigenDecompose(A);
  if (eig.values(0) > 1e-12 * (1.0 + A.norm())) {
    if (auto x = linalg::SolveShifted(eig, 0.0, -a)) {
      if (x->squaredNorm() < 1.0 && b.dot(*x) < beta) {
        trs::KktPoint p;
        p.x = *x;
        p.lambda = 0.0;
        p.kind = trs::KktKind::kInteriorStationary;
        p.tangent_min_eig = eig.values(0);
        add(std::move(p), Activity::kInterior, "interior");
      }
    }
  }

  // (b) Sphere stationary points; a continuum is represented by its point
  // of smallest b'x so that feasibility is decided in its favour.
  const std::optional<VectorXd> hint =
      bn > 0.0 ? std::optional<VectorXd>(b) : std::nullopt;
  for (auto& p : trs::EnumerateBoundaryKkt(A, a, hint)) {
    if (b.dot(p.x) - beta > tol_feas) continue;
    const std::string source = SourceOf(p.kind);
    add(std::move(p), Activity::kBallOnly, source);
  }

  if (bn > 0.0) {
    const VectorXd x_hat = (beta / (bn * bn)) * b;
    const MatrixXd N = linalg::OrthonormalComplement(b);
    const MatrixXd reduced = linalg::Symmetrize(N.transpose() * A * N);
    const VectorXd lin = N.transpose() * (A * x_hat + a);

    // (c) Stationary point on the hyperplane, kept when it is a local min
    // strictly inside the ball.
    if (N.cols() == 0) {
      if (x_hat.squaredNorm() < 1.0) {
        trs::KktPoint p;
        p.x = x_hat;
        p.kind = trs::KktKind::kInteriorStationary;
        add(std::move(p), Activity::kLinearOnly, "linear_face");
      }
    } else {
      const auto reig = linalg::SymEigenDecompose(reduced);
      const double tol = 1e-9 * (1.0 + reduced.norm());
      if (reig.values(0) >= -tol) {
        // Least squares on the positive part of the spectrum.
        VectorXd w = VectorXd::Zero(N.cols());
        const VectorXd proj = reig.vectors.transpose() * lin;
        for (Eigen::Index i = 0; i < reig.values.size(); ++i) {
          if (reig.values(i) > tol) w -= (proj(i) / reig.values(i)) * reig.vectors.col(i);
        }
        const double resid = (reduced * w + lin).norm();
        const VectorXd x = x_hat + N * w;
        if (resid <= 1e-8 * (1.0 + lin.norm()) && x.squaredNorm() < 1.0) {
          trs::KktPoint p;
          p.x = x;
          p.kind = trs::KktKind::kInteriorStationary;
          p.tangent_min_eig = reig.values(0);
          add(std::move(p), Activity::kLinearOnly, "linear_face");
        }
      }
    }

    // (d) Both active: global minimum over the sphere slice.
    const double radius_sq = 1.0 - x_hat.squaredNorm();
    if (radius_sq >= -tol_feas) {
      trs::KktPoint p;
      if (N.cols() == 0 || radius_sq <= 0.0) {
        p.x = x_hat;
      } else {
        const trs::KktPoint s = trs::SolveEqualityTrs(reduced, lin, radius_sq);
        p.x = x_hat + N * s.x;
        p.lambda = s.lambda;
        p.tangent_min_eig = s.tangent_min_eig;
      }
      p.kind = trs::KktKind::kBoundarySaddle;
      add(std::move(p), Activity::kBoth, "both_face");
    }
  }

  const Candidate* best = nullptr;
  for (const auto& c : rep.candidates) {
    if (!c.feasible) continue;
    if (best == nullptr || c.point.objective < best->point.objective) best = &c;
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kInfeasibleProblem,
                "no feasible candidate on any face");
  }
  rep.optimal_x = best->point.x;
  rep.optimal_value = best->point.objective;
  rep.enumeration_value = rep.optimal_value;
  rep.path = SolvePath::kEnumeration;
  return rep;
}

SolveReport SolveFull(const EtrsProblem& input, const SolveOptions& options) {
  Validate(input);
  const auto [problem, scale] = Normalize(input);
  const double tol_feas =
      options.tol_feas >= 0.0 ? options.tol_feas : FeasibilityTolerance(problem);
  CheckNonEmpty(problem, tol_feas);

  SolveReport rep;
  rep.reduces_to_trs = problem.b.squaredNorm() == 0.0;
  std::optional<VectorXd> enum_x;
  if (options.run_enumeration) {
    try {
      SolveReport e = SolveEnumeration(problem, tol_feas);
      rep.candidates = std::move(e.candidates);
      rep.enumeration_value = e.optimal_value;
      enum_x = e.optimal_x;
    } catch (const Error& err) {
      rep.path_errors.push_back(std::string("enumeration: ") + err.what());
    }
  }

  std::optional<LiftedSolution> lmi;
  std::optional<LiftedSolution> socp;
  std::optional<VectorXd> conic_x;
  if (options.run_conic) {
    auto run = [&](RelaxationKind kind) -> std::optional<LiftedSolution> {
      try {
        return SolveRelaxation(kind, problem, options.conic);
      } catch (const Error& err) {
        rep.path_errors.push_back(std::string(RelaxationName(kind)) + ": " +
                                  err.what());
        return std::nullopt;
      }
    };
    if (auto s = run(RelaxationKind::kClassicalSdp)) rep.relaxations.sdp = s->value;
    lmi = run(RelaxationKind::kDualLmi);
    if (lmi) rep.relaxations.lmi = lmi->value;
    socp = run(RelaxationKind::kPrimalSocpSdp);
    if (socp) {
      rep.relaxations.socpsdp = socp->value;
      try {
        const Recovery r = RecoverOptimal(*socp, problem);
        rep.recovery_case = r.used;
        rep.recovery_ambiguous = r.ambiguous;
        conic_x = RefineOnFace(problem, r.point.x).value_or(r.point.x);
        rep.conic_value = problem.Objective(*conic_x);
      } catch (const Error& err) {
        rep.path_errors.push_back(std::string("recovery: ") + err.what());
      }
    }
  }

  if (!enum_x && !conic_x) {
    std::string msg = "no path produced a point";
    for (const auto& e : rep.path_errors) msg += "; " + e;
    throw Error(ErrorCode::kBothPathsFailed, msg);
  }

  VectorXd x;
  if (enum_x && conic_x) {
    const double ve = *rep.enumeration_value;
    const double vc = *rep.conic_value;
    const double scale_v = 1.0 + std::abs(ve);
    if (std::abs(ve - vc) > options.tol_opt * scale_v) {
      rep.discrepancies.push_back(
          {"cross_path", ve, vc,
           "enumeration and conic recovery disagree on the optimal value"});
      // Both points are feasible; report the better one.
      if (vc < ve) {
        x = *conic_x;
        rep.path = SolvePath::kConic;
      } else {
        x = *enum_x;
        rep.path = SolvePath::kEnumeration;
      }
    } else {
      // The enumeration point is exact to working precision.
      x = *enum_x;
      rep.path = SolvePath::kAgreement;
    }
  } else if (enum_x) {
    x = *enum_x;
    rep.path = SolvePath::kEnumeration;
  } else {
    x = *conic_x;
    rep.path = SolvePath::kConic;
  }
  const double value = problem.Objective(x);

  // Certificate from the conic multipliers, polished at x and re-verified.
  const double cert_feas = rep.path == SolvePath::kConic ? 1e-6 : tol_feas;
  for (const auto* lifted : {lmi ? &*lmi : nullptr, socp ? &*socp : nullptr}) {
    if (lifted == nullptr) continue;
    Certificate cert = PolishMultipliers(
        problem, x, Certificate::FromDuals(lifted->duals));
    cert = CheckCertificate(problem, x, cert, cert_feas);
    if (!rep.certificate || (cert.verdict.Pass() && !rep.certificate->verdict.Pass())) {
      rep.certificate = cert;
    }
    if (cert.verdict.Pass()) break;
  }
  if (rep.certificate && !rep.certificate->verdict.Pass()) {
    rep.discrepancies.push_back(
        {"certificate", 0.0, rep.certificate->residuals.stationarity,
         "optimality certificate failed at the returned point"});
  }

  if (rep.relaxations.sdp && rep.relaxations.socpsdp) {
    LmiDuals duals = lmi ? lmi->duals : socp->duals;
    if (rep.certificate) {
      duals.lambda0 = rep.certificate->lambda0;
      duals.u0 = rep.certificate->u0;
      duals.u = rep.certificate->u;
    }
    rep.duality = DiagnoseDuality(*rep.relaxations.sdp,
                                  *rep.relaxations.socpsdp, value, duals);
  }

  // value(sdp) <= value(socpsdp) <= optimal value.
  const double slack = 1e-6 * (1.0 + std::abs(value));
  if (rep.relaxations.sdp && rep.relaxations.socpsdp &&
      *rep.relaxations.sdp > *rep.relaxations.socpsdp + slack) {
    rep.discrepancies.push_back({"bound_chain", *rep.relaxations.socpsdp,
                                 *rep.relaxations.sdp,
                                 "classical relaxation above the exact one"});
  }
  if (rep.relaxations.socpsdp && *rep.relaxations.socpsdp > value + slack) {
    rep.discrepancies.push_back({"bound_chain", value, *rep.relaxations.socpsdp,
                                 "relaxation value above the returned objective"});
  }

  if (options.reference_value &&
      std::abs(*options.reference_value - value) > options.reference_tol) {
    rep.discrepancies.push_back(
        {"reference", *options.reference_value, value,
         "computed optimum differs from the supplied reference value"});
  }

  rep.optimal_x = scale.ToOriginal(x);
  rep.optimal_value = scale.Value(value);
  for (auto& c : rep.candidates) c.point.x = scale.ToOriginal(c.point.x);
  return rep;
}

}  // namespace etrs
