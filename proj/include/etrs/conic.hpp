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

#ifndef ETRS_CONIC_HPP_
#define ETRS_CONIC_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

// Dense primal-dual interior-point solver for
//
//   minimize <c, s>  subject to  A s = r,  s in K,
//
// with K a product of PSD, second-order, nonnegative and free blocks. The
// dual is  maximize <r, y>  subject to  c - A'y = w,  w in K*.
//
// PSD blocks are stored as svec: the lower triangle taken column by
// column, off-diagonal entries scaled by sqrt(2) so that the Euclidean
// inner product of two svecs is the Frobenius product of the matrices.
// SOC blocks are (head; tail) with ||tail|| <= head.
namespace etrs::conic {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class BlockKind { kPsd, kSoc, kNonneg, kFree };

struct Block {
  BlockKind kind;
  int size;  // matrix order for PSD, vector length otherwise
  std::string name;

  int Dimension() const {
    return kind == BlockKind::kPsd ? size * (size + 1) / 2 : size;
  }
};

struct ConeSpec {
  std::vector<Block> blocks;

  int Dimension() const;
  // Offset of the named block in the scalarized vector.
  int Offset(std::string_view name) const;
  const Block& Find(std::string_view name) const;
  // Barrier degree: PSD order, 1 per SOC, 1 per nonnegative entry.
  int Degree() const;
};

struct RowGroup {
  std::string name;
  int start;
  int count;
};

struct ConicProgram {
  VectorXd c;
  MatrixXd A;  // rows x cone dimension
  VectorXd r;
  ConeSpec cone;
  std::vector<RowGroup> row_groups;

  int NumRows() const { return static_cast<int>(A.rows()); }
  // Throws Error{kDimensionMismatch} or Error{kNonFiniteEntry}.
  void Validate() const;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kMaxIter };

std::string_view StatusName(Status status);

struct SolverOptions {
  int max_iterations = 100;
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-8;
  double infeasibility_tol = 1e-8;
  double regularization = 1e-12;
  double step_fraction = 0.99;
  int refinement_steps = 10;
  bool record_history = false;
};

struct IterationLog {
  int iteration;
  double primal_objective;
  double dual_objective;
  double primal_residual;
  double dual_residual;
  double mu;
  double tau;
  double kappa;
  double step;
};

struct ConicSolution {
  Status status = Status::kMaxIter;
  VectorXd s;  // primal point (ray when Unbounded)
  VectorXd y;  // equality multipliers (ray when Infeasible)
  VectorXd w;  // dual slack
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // ||A s - r|| / (1 + ||r||)
  double dual_residual = 0.0;    // ||A'y + w - c|| / (1 + ||c||)
  double gap = 0.0;              // |<s, w>| / (1 + |primal objective|)
  int iterations = 0;
  std::vector<IterationLog> history;
};

// Homogeneous self-dual embedding with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector step. Throws Error{kNumericalBreakdown}
// when the reduced KKT matrix cannot be factored.
ConicSolution Solve(const ConicProgram& program,
                    const SolverOptions& options = {});

// Multipliers per row group. Throws Error{kNotOptimal}.
std::map<std::string, VectorXd> ExtractDual(const ConicSolution& solution,
                                            const ConicProgram& program);

// Slice of the primal point belonging to the named block.
VectorXd BlockValue(const ConicProgram& program, const VectorXd& s,
                    std::string_view name);

VectorXd Svec(const MatrixXd& m);
MatrixXd Smat(const VectorXd& v, int order);

// Min-eigenvalue / cone margin checks on a scalarized point.
double ConeMargin(const ConeSpec& cone, const VectorXd& s);

}  // namespace etrs::conic

#endif  // ETRS_CONIC_HPP_
