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

#ifndef ETRS_LINALG_HPP_
#define ETRS_LINALG_HPP_

#include <optional>

#include <Eigen/Dense>

// Dense symmetric linear algebra for small problems (n up to a few dozen).
namespace etrs::linalg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SymEigen {
  VectorXd values;   // ascending
  MatrixXd vectors;  // orthonormal columns, vectors.col(i) pairs values(i)
};

// Cyclic Jacobi. Equal eigenvalues keep the order of the diagonal position
// they converged at. Throws Error{kNoConvergence} after 100 sweeps.
SymEigen SymEigenDecompose(const MatrixXd& m);

double MinEig(const MatrixXd& m);

// min_eig(m) >= -tol * (1 + ||m||_F).
bool IsPsd(const MatrixXd& m, double tol);

// Solves (A + lambda I) x = rhs through the spectral decomposition of A.
// Returns nullopt when A + lambda I is singular on a direction rhs touches;
// components of rhs are dropped on null directions it does not touch.
std::optional<VectorXd> SolveShifted(const SymEigen& eig, double lambda,
                                     const VectorXd& rhs);
std::optional<VectorXd> SolveShifted(const MatrixXd& a, double lambda,
                                     const VectorXd& rhs);

// Number of singular values above tol * max(rows, cols) * sigma_max.
int MatrixRank(const MatrixXd& m, double tol = 1e-9);

// Columns form an orthonormal basis of the complement of span{v}; v != 0.
MatrixXd OrthonormalComplement(const VectorXd& v);

inline MatrixXd Symmetrize(const MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace etrs::linalg

#endif  // ETRS_LINALG_HPP_
