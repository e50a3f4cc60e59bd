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

#include "etrs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "etrs/error.hpp"

namespace etrs::linalg {

namespace {
constexpr int kMaxSweeps = 100;
}  // namespace

SymEigen SymEigenDecompose(const MatrixXd& m) {
  const Eigen::Index n = m.rows();
  MatrixXd a = m;
  MatrixXd v = MatrixXd::Identity(n, n);
  const double scale = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= (eps * scale) * (eps * scale) || off == 0.0) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k != p && k != q) {
            const double akp = a(k, p);
            const double akq = a(k, q);
            a(k, p) = a(p, k) = c * akp - s * akq;
            a(k, q) = a(q, k) = s * akp + c * akq;
          }
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::kNoConvergence,
                "Jacobi eigendecomposition did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) {
                     return a(i, i) < a(j, j);
                   });
  SymEigen out{VectorXd(n), MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double MinEig(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  return SymEigenDecompose(m).values(0);
}

bool IsPsd(const MatrixXd& m, double tol) {
  return MinEig(m) >= -tol * (1.0 + m.norm());
}

std::optional<VectorXd> SolveShifted(const SymEigen& eig, double lambda,
                                     const VectorXd& rhs) {
  const double a_norm = eig.values.norm();
  const double pole_tol = 1e-12 * (1.0 + a_norm);
  const double touch_tol = 1e-10 * (1.0 + rhs.norm());
  const VectorXd coeffs = eig.vectors.transpose() * rhs;
  VectorXd y = VectorXd::Zero(rhs.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double d = eig.values(i) + lambda;
    if (std::abs(d) <= pole_tol) {
      if (std::abs(coeffs(i)) > touch_tol) return std::nullopt;
      continue;
    }
    y(i) = coeffs(i) / d;
  }
  return VectorXd(eig.vectors * y);
}

std::optional<VectorXd> SolveShifted(const MatrixXd& a, double lambda,
                                     const VectorXd& rhs) {
  return SolveShifted(SymEigenDecompose(a), lambda, rhs);
}

int MatrixRank(const MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  // Singular values directly; squaring into a Gram matrix would put the
  // default threshold below the resolution of the eigenvalues.
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double cut =
      tol * static_cast<double>(std::max(m.rows(), m.cols())) * sigma(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++rank;
  }
  return rank;
}

MatrixXd OrthonormalComplement(const VectorXd& v) {
  const Eigen::Index n = v.size();
  const MatrixXd col = v;
  Eigen::HouseholderQR<MatrixXd> qr(col);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

}  // namespace etrs::linalg
