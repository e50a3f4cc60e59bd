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

#include "etrs/trs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "etrs/error.hpp"
#include "etrs/linalg.hpp"

namespace etrs::trs {

namespace {

constexpr int kMaxRootIterations = 200;

struct Cluster {
  double mu = 0.0;
  std::vector<Eigen::Index> members;
  double weight = 0.0;  // squared norm of a on the eigenspace
  bool active = false;
};

// ||x(lambda)||^2 with x(lambda) = -(A + lambda I)^+ a on the eigenbasis.
class Secular {
 public:
  Secular(const MatrixXd& A, const VectorXd& a)
      : eig_(linalg::SymEigenDecompose(A)),
        alpha_(eig_.vectors.transpose() * a),
        a_scale_(1.0 + A.norm()) {
    const double cluster_tol = 1e-10 * a_scale_;
    const double active_tol = 1e-12 * (1.0 + a.norm());
    for (Eigen::Index i = 0; i < eig_.values.size(); ++i) {
      if (clusters_.empty() ||
          eig_.values(i) - clusters_.back().mu > cluster_tol) {
        clusters_.push_back(Cluster{eig_.values(i), {}, 0.0, false});
      }
      clusters_.back().members.push_back(i);
      clusters_.back().weight += alpha_(i) * alpha_(i);
    }
    for (auto& c : clusters_) {
      c.active = std::sqrt(c.weight) > active_tol;
      if (!c.active) {
        for (auto i : c.members) alpha_(i) = 0.0;
      }
    }
  }

  const linalg::SymEigen& eig() const { return eig_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  double scale() const { return a_scale_; }
  double alpha_norm() const { return alpha_.norm(); }

  double NormSq(double lambda) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < alpha_.size(); ++i) {
      if (alpha_(i) == 0.0) continue;
      const double d = eig_.values(i) + lambda;
      s += alpha_(i) * alpha_(i) / (d * d);
    }
    return s;
  }

  double NormSqDerivative(double lambda) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < alpha_.size(); ++i) {
      if (alpha_(i) == 0.0) continue;
      const double d = eig_.values(i) + lambda;
      s -= 2.0 * alpha_(i) * alpha_(i) / (d * d * d);
    }
    return s;
  }

  VectorXd X(double lambda) const {
    VectorXd y = VectorXd::Zero(alpha_.size());
    for (Eigen::Index i = 0; i < alpha_.size(); ++i) {
      if (alpha_(i) == 0.0) continue;
      y(i) = -alpha_(i) / (eig_.values(i) + lambda);
    }
    return eig_.vectors * y;
  }

  // Finds lambda in [lo, hi] with ||x(lambda)|| = radius, assuming
  // ||x|| - radius changes sign exactly once on the interval. Newton on
  // 1/||x|| - 1/radius, which is close to linear near the root.
  // `increasing` tells whether 1/||x|| grows with lambda on the interval.
  double Root(double lo, double hi, double radius, bool increasing) const {
    auto g = [&](double lam) {
      return 1.0 / std::sqrt(NormSq(lam)) - 1.0 / radius;
    };
    auto dg = [&](double lam) {
      const double s = NormSq(lam);
      return -0.5 * NormSqDerivative(lam) / (s * std::sqrt(s));
    };
    double lam = 0.5 * (lo + hi);
    for (int it = 0; it < kMaxRootIterations; ++it) {
      const double val = g(lam);
      if (!std::isfinite(val)) {
        lam = 0.5 * (lo + hi);
        continue;
      }
      if (std::abs(val) <= 4.0 * std::numeric_limits<double>::epsilon() /
                               radius) {
        return lam;
      }
      if ((val < 0.0) == increasing) {
        lo = lam;
      } else {
        hi = lam;
      }
      if (hi - lo <=
          4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lam))) {
        return lam;
      }
      const double deriv = dg(lam);
      double next = lam - val / deriv;
      if (!(next > lo && next < hi) || !std::isfinite(next)) {
        next = 0.5 * (lo + hi);
      }
      lam = next;
    }
    throw Error(ErrorCode::kNoConvergence,
                "secular equation root find exceeded 200 iterations");
  }

  // Minimizer of ||x(lambda)||^2 strictly between two consecutive poles.
  double InnerMinimizer(double lo, double hi) const {
    for (int it = 0; it < kMaxRootIterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) return mid;
      if (NormSqDerivative(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

 private:
  linalg::SymEigen eig_;
  VectorXd alpha_;
  double a_scale_;
  std::vector<Cluster> clusters_;
};

KktPoint MakePoint(const MatrixXd& A, const VectorXd& a, VectorXd x,
                   double lambda) {
  KktPoint p;
  p.objective = Objective(A, a, x);
  p.lambda = lambda;
  p.x = std::move(x);
  return p;
}

// Sign so the first component that is clearly nonzero is positive.
VectorXd CanonicalSign(VectorXd v) {
  const double tol = 1e-12 * (1.0 + v.norm());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

void Classify(const MatrixXd& A, const linalg::SymEigen& eig, KktPoint& p) {
  const Eigen::Index n = A.rows();
  const double scale = 1.0 + A.norm();
  const double tol = 1e-7 * scale;
  const MatrixXd h = A + p.lambda * MatrixXd::Identity(n, n);
  if (n > 1) {
    const MatrixXd z = linalg::OrthonormalComplement(p.x);
    p.tangent_min_eig = linalg::MinEig(z.transpose() * h * z);
  } else {
    p.tangent_min_eig = 0.0;
  }
  const double lambda1 = eig.values(0);
  const bool nonneg = p.lambda >= -1e-9 * scale;
  const bool psd = p.lambda + lambda1 >= -tol;
  const bool local_min = p.tangent_min_eig >= -tol;
  if (psd && nonneg) {
    p.kind = KktKind::kGlobalTrs;
    return;
  }
  if (n > 1 && local_min && nonneg) {
    const double lambda2 = eig.values(1);
    if (p.lambda > -lambda2 + tol && p.lambda < -lambda1 - tol) {
      p.kind = KktKind::kLngm;
      return;
    }
  }
  p.kind = KktKind::kBoundarySaddle;
}

std::vector<KktPoint> SphereStationaryPoints(const MatrixXd& A,
                                             const VectorXd& a,
                                             const Secular& sec,
                                             double radius,
                                             const std::optional<VectorXd>& hint) {
  std::vector<std::pair<VectorXd, double>> raw;
  const auto& clusters = sec.clusters();
  const double r2 = radius * radius;

  std::vector<double> poles;  // ascending in lambda
  for (auto it = clusters.rbegin(); it != clusters.rend(); ++it) {
    if (it->active) poles.push_back(-it->mu);
  }
  if (!poles.empty()) {
    const double span = sec.alpha_norm() / radius;
    // Right outer interval: ||x|| decreases from +inf to 0.
    {
      const double lo = poles.back();
      const double lam = sec.Root(lo, lo + span, radius, true);
      raw.emplace_back(sec.X(lam), lam);
    }
    // Left outer interval: ||x|| increases from 0 to +inf.
    {
      const double hi = poles.front();
      const double lam = sec.Root(hi - span, hi, radius, false);
      raw.emplace_back(sec.X(lam), lam);
    }
    for (size_t k = 0; k + 1 < poles.size(); ++k) {
      const double lo = poles[k];
      const double hi = poles[k + 1];
      const double mid = sec.InnerMinimizer(lo, hi);
      const double min_norm_sq = sec.NormSq(mid);
      if (min_norm_sq > r2 * (1.0 + 1e-12)) continue;
      if (min_norm_sq >= r2 * (1.0 - 1e-12)) {
        raw.emplace_back(sec.X(mid), mid);
        continue;
      }
      const double l1 = sec.Root(lo, mid, radius, true);
      const double l2 = sec.Root(mid, hi, radius, false);
      raw.emplace_back(sec.X(l1), l1);
      raw.emplace_back(sec.X(l2), l2);
    }
  }

  // Continua at poles a does not excite.
  for (const auto& c : clusters) {
    if (c.active) continue;
    const double lam = -c.mu;
    const VectorXd fixed = sec.X(lam);
    const double rest = r2 - fixed.squaredNorm();
    if (rest < -1e-12 * r2) continue;
    const double t = std::sqrt(std::max(rest, 0.0));
    MatrixXd v(A.rows(), static_cast<Eigen::Index>(c.members.size()));
    for (size_t j = 0; j < c.members.size(); ++j) {
      v.col(static_cast<Eigen::Index>(j)) = sec.eig().vectors.col(c.members[j]);
    }
    VectorXd dir;
    if (hint && (v.transpose() * *hint).norm() > 1e-12 * (1.0 + hint->norm())) {
      const VectorXd coeff = v.transpose() * *hint;
      dir = -(v * coeff) / coeff.norm();  // minimizes hint'x
    } else {
      dir = CanonicalSign(v.col(0));
    }
    raw.emplace_back(VectorXd(fixed + t * dir), lam);
    if (t > 0.0) raw.emplace_back(VectorXd(fixed - t * dir), lam);
  }

  std::vector<KktPoint> out;
  const double dedupe_tol = 1e-9 * (1.0 + radius);
  for (auto& [x, lam] : raw) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const KktPoint& p) {
      return (p.x - x).norm() <= dedupe_tol;
    });
    if (dup) continue;
    out.push_back(MakePoint(A, a, std::move(x), lam));
  }
  return out;
}

}  // namespace

std::string_view KktKindName(KktKind kind) {
  switch (kind) {
    case KktKind::kGlobalTrs: return "GlobalTrs";
    case KktKind::kLngm: return "Lngm";
    case KktKind::kBoundarySaddle: return "BoundarySaddle";
    case KktKind::kInteriorStationary: return "InteriorStationary";
  }
  return "Unknown";
}

double Objective(const MatrixXd& A, const VectorXd& a, const VectorXd& x) {
  return x.dot(A * x) + 2.0 * a.dot(x);
}

KktPoint SolveEqualityTrs(const MatrixXd& A, const VectorXd& a,
                          double radius_sq) {
  const Eigen::Index n = A.rows();
  if (radius_sq <= 0.0 || n == 0) {
    KktPoint p = MakePoint(A, a, VectorXd::Zero(n), 0.0);
    p.kind = KktKind::kGlobalTrs;
    return p;
  }
  const double radius = std::sqrt(radius_sq);
  const Secular sec(A, a);
  const Cluster& bottom = sec.clusters().front();
  const double lam_min = -bottom.mu;

  KktPoint p;
  if (!bottom.active) {
    const VectorXd fixed = sec.X(lam_min);
    const double rest = radius_sq - fixed.squaredNorm();
    if (rest >= 0.0) {
      // Hard case: complete with an eigenvector of the bottom eigenspace.
      const VectorXd v =
          CanonicalSign(sec.eig().vectors.col(bottom.members.front()));
      p = MakePoint(A, a, fixed + std::sqrt(rest) * v, lam_min);
    } else {
      const double span = sec.alpha_norm() / radius;
      const double lam = sec.Root(lam_min, lam_min + span, radius, true);
      p = MakePoint(A, a, sec.X(lam), lam);
    }
  } else {
    const double span = sec.alpha_norm() / radius;
    const double lam = sec.Root(lam_min, lam_min + span, radius, true);
    p = MakePoint(A, a, sec.X(lam), lam);
  }
  p.kind = KktKind::kGlobalTrs;
  return p;
}

KktPoint SolveTrsGlobal(const MatrixXd& A, const VectorXd& a) {
  const auto eig = linalg::SymEigenDecompose(A);
  if (eig.values(0) >= -1e-12 * (1.0 + A.norm())) {
    if (auto x = linalg::SolveShifted(eig, 0.0, -a)) {
      if (x->squaredNorm() <= 1.0) {
        KktPoint p = MakePoint(A, a, *x, 0.0);
        p.kind = KktKind::kGlobalTrs;
        return p;
      }
    }
  }
  return SolveEqualityTrs(A, a, 1.0);
}

std::vector<KktPoint> EnumerateBoundaryKkt(const MatrixXd& A,
                                           const VectorXd& a,
                                           const std::optional<VectorXd>& hint) {
  const Secular sec(A, a);
  auto points = SphereStationaryPoints(A, a, sec, 1.0, hint);
  for (auto& p : points) Classify(A, sec.eig(), p);

  // At most one LNGM: keep the lowest and demote the rest.
  KktPoint* best = nullptr;
  for (auto& p : points) {
    if (p.kind != KktKind::kLngm) continue;
    if (best == nullptr || p.objective < best->objective) {
      if (best != nullptr) best->kind = KktKind::kBoundarySaddle;
      best = &p;
    } else {
      p.kind = KktKind::kBoundarySaddle;
    }
  }
  std::sort(points.begin(), points.end(),
            [](const KktPoint& l, const KktPoint& r) {
              return l.objective < r.objective;
            });
  return points;
}

std::optional<KktPoint> FindLngm(const std::vector<KktPoint>& points) {
  for (const auto& p : points) {
    if (p.kind == KktKind::kLngm) return p;
  }
  return std::nullopt;
}

}  // namespace etrs::trs
