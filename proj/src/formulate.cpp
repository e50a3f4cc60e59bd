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

#include "etrs/formulate.hpp"

#include <cmath>
#include <string>

#include "etrs/error.hpp"
#include "etrs/linalg.hpp"

namespace etrs {

using conic::Block;
using conic::BlockKind;
using conic::ConicProgram;
using conic::Svec;

namespace {

// (e_i e_j' + e_j e_i') / 2, so that E . Y = Y_ij.
MatrixXd Unit(int order, int i, int j) {
  MatrixXd e = MatrixXd::Zero(order, order);
  e(i, j) += 0.5;
  e(j, i) += 0.5;
  return e;
}

struct ProgramBuilder {
  ConicProgram program;
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;

  explicit ProgramBuilder(std::vector<Block> blocks) {
    program.cone.blocks = std::move(blocks);
    program.c = VectorXd::Zero(program.cone.Dimension());
  }

  Eigen::RowVectorXd NewRow() const {
    return Eigen::RowVectorXd::Zero(program.cone.Dimension());
  }
  void Put(Eigen::RowVectorXd& row, std::string_view block,
           const VectorXd& coeffs) const {
    row.segment(program.cone.Offset(block), coeffs.size()) += coeffs.transpose();
  }
  void PutEntry(Eigen::RowVectorXd& row, std::string_view block, int k,
                double coeff) const {
    row(program.cone.Offset(block) + k) += coeff;
  }
  void BeginGroup(std::string name) {
    program.row_groups.push_back({std::move(name), static_cast<int>(rows.size()), 0});
  }
  void Add(Eigen::RowVectorXd row, double value) {
    rows.push_back(std::move(row));
    rhs.push_back(value);
    program.row_groups.back().count++;
  }
  ConicProgram Finish() {
    program.A.resize(static_cast<Eigen::Index>(rows.size()),
                     program.cone.Dimension());
    program.r.resize(static_cast<Eigen::Index>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) {
      program.A.row(static_cast<Eigen::Index>(k)) = rows[k];
      program.r(static_cast<Eigen::Index>(k)) = rhs[k];
    }
    program.Validate();
    return std::move(program);
  }
};

MatrixXd TraceOfX(int order) {
  MatrixXd t = MatrixXd::Identity(order, order);
  t(0, 0) = 0.0;
  return t;
}

double Segment(const ConicProgram& program, const conic::ConicSolution& sol,
               std::string_view block) {
  return conic::BlockValue(program, sol.s, block)(0);
}

}  // namespace

std::string_view RelaxationName(RelaxationKind kind) {
  switch (kind) {
    case RelaxationKind::kClassicalSdp: return "sdp";
    case RelaxationKind::kDualLmi: return "lmi";
    case RelaxationKind::kPrimalSocpSdp: return "socpsdp";
  }
  return "unknown";
}

RelaxationKind ParseRelaxation(std::string_view name) {
  if (name == "sdp") return RelaxationKind::kClassicalSdp;
  if (name == "lmi") return RelaxationKind::kDualLmi;
  if (name == "socpsdp") return RelaxationKind::kPrimalSocpSdp;
  throw Error(ErrorCode::kInvalidInput,
              "unknown relaxation kind: " + std::string(name));
}

MatrixXd LiftedObjective(const EtrsProblem& problem) {
  const int n = problem.n();
  MatrixXd c = MatrixXd::Zero(n + 1, n + 1);
  c.bottomRightCorner(n, n) = problem.A;
  c.block(1, 0, n, 1) = problem.a;
  c.block(0, 1, 1, n) = problem.a.transpose();
  return c;
}

ConicProgram BuildClassicalSdp(const EtrsProblem& problem) {
  const int n = problem.n();
  const int order = n + 1;
  ProgramBuilder pb({{BlockKind::kPsd, order, "Y"},
                     {BlockKind::kNonneg, 1, "trace_slack"},
                     {BlockKind::kNonneg, 1, "linear_slack"}});
  pb.program.c.segment(0, order * (order + 1) / 2) =
      Svec(LiftedObjective(problem));

  pb.BeginGroup("corner");
  {
    auto row = pb.NewRow();
    pb.Put(row, "Y", Svec(Unit(order, 0, 0)));
    pb.Add(row, 1.0);
  }
  pb.BeginGroup("trace");
  {
    auto row = pb.NewRow();
    pb.Put(row, "Y", Svec(TraceOfX(order)));
    pb.PutEntry(row, "trace_slack", 0, 1.0);
    pb.Add(row, 1.0);
  }
  pb.BeginGroup("linear");
  {
    MatrixXd e = MatrixXd::Zero(order, order);
    e.block(1, 0, n, 1) = 0.5 * problem.b;
    e.block(0, 1, 1, n) = 0.5 * problem.b.transpose();
    auto row = pb.NewRow();
    pb.Put(row, "Y", Svec(e));
    pb.PutEntry(row, "linear_slack", 0, 1.0);
    pb.Add(row, problem.beta);
  }
  return pb.Finish();
}

ConicProgram BuildPrimalSocpSdp(const EtrsProblem& problem) {
  const int n = problem.n();
  const int order = n + 1;
  ProgramBuilder pb({{BlockKind::kPsd, order, "Y"},
                     {BlockKind::kSoc, order, "soc"},
                     {BlockKind::kNonneg, 1, "trace_slack"}});
  pb.program.c.segment(0, order * (order + 1) / 2) =
      Svec(LiftedObjective(problem));

  pb.BeginGroup("corner");
  {
    auto row = pb.NewRow();
    pb.Put(row, "Y", Svec(Unit(order, 0, 0)));
    pb.Add(row, 1.0);
  }
  pb.BeginGroup("trace");
  {
    auto row = pb.NewRow();
    pb.Put(row, "Y", Svec(TraceOfX(order)));
    pb.PutEntry(row, "trace_slack", 0, 1.0);
    pb.Add(row, 1.0);
  }
  // soc = Y g with g = (beta; -b): head beta - b'x, tail beta x - X b.
  VectorXd g(order);
  g(0) = problem.beta;
  g.tail(n) = -problem.b;
  pb.BeginGroup("soc_link");
  for (int k = 0; k < order; ++k) {
    MatrixXd e = MatrixXd::Zero(order, order);
    e.row(k) += 0.5 * g.transpose();
    e.col(k) += 0.5 * g;
    auto row = pb.NewRow();
    pb.Put(row, "Y", -Svec(e));
    pb.PutEntry(row, "soc", k, 1.0);
    pb.Add(row, 0.0);
  }
  return pb.Finish();
}

ConicProgram BuildDualLmi(const EtrsProblem& problem) {
  const int n = problem.n();
  const int order = n + 1;
  // soc holds (-u0; u).
  ProgramBuilder pb({{BlockKind::kPsd, order, "S"},
                     {BlockKind::kSoc, order, "soc"},
                     {BlockKind::kNonneg, 1, "lambda0"},
                     {BlockKind::kFree, 1, "z"}});
  pb.program.c(pb.program.cone.Offset("z")) = -1.0;
  const double beta = problem.beta;

  pb.BeginGroup("lmi");
  for (int j = 0; j < order; ++j) {
    for (int i = j; i < order; ++i) {
      auto row = pb.NewRow();
      pb.Put(row, "S", Svec(Unit(order, i, j)));
      double constant = 0.0;
      if (i == 0 && j == 0) {
        // -lambda0 + beta u0 - z = -lambda0 - beta w0 - z
        pb.PutEntry(row, "lambda0", 0, 1.0);
        pb.PutEntry(row, "soc", 0, beta);
        pb.PutEntry(row, "z", 0, 1.0);
      } else if (j == 0) {
        // a_i - beta u_i / 2 - b_i u0 / 2
        const int k = i - 1;
        constant = problem.a(k);
        pb.PutEntry(row, "soc", i, 0.5 * beta);
        pb.PutEntry(row, "soc", 0, -0.5 * problem.b(k));
      } else {
        // A_kl + lambda0 delta_kl + (b_k u_l + u_k b_l) / 2
        const int k = i - 1;
        const int l = j - 1;
        constant = problem.A(k, l);
        if (k == l) pb.PutEntry(row, "lambda0", 0, -1.0);
        pb.PutEntry(row, "soc", 1 + l, -0.5 * problem.b(k));
        pb.PutEntry(row, "soc", 1 + k, -0.5 * problem.b(l));
      }
      pb.Add(row, constant);
    }
  }
  return pb.Finish();
}

ConicProgram BuildRelaxation(RelaxationKind kind, const EtrsProblem& problem) {
  switch (kind) {
    case RelaxationKind::kClassicalSdp: return BuildClassicalSdp(problem);
    case RelaxationKind::kDualLmi: return BuildDualLmi(problem);
    case RelaxationKind::kPrimalSocpSdp: return BuildPrimalSocpSdp(problem);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown relaxation kind");
}

LiftedSolution ExtractLifted(const conic::ConicSolution& solution,
                             const ConicProgram& program,
                             const EtrsProblem& problem, RelaxationKind kind) {
  if (solution.status != conic::Status::kOptimal) {
    throw Error(ErrorCode::kNotOptimal,
                std::string("relaxation solve ended with status ") +
                    std::string(conic::StatusName(solution.status)));
  }
  const int n = problem.n();
  const int order = n + 1;
  LiftedSolution out;
  out.kind = kind;
  const auto duals = conic::ExtractDual(solution, program);

  switch (kind) {
    case RelaxationKind::kClassicalSdp:
    case RelaxationKind::kPrimalSocpSdp: {
      out.Y = conic::Smat(conic::BlockValue(program, solution.s, "Y"), order);
      out.value = solution.primal_objective;
      const double y_corner = duals.at("corner")(0);
      const double y_trace = duals.at("trace")(0);
      out.duals.lambda0 = -y_trace;
      if (kind == RelaxationKind::kPrimalSocpSdp) {
        const VectorXd y_soc = duals.at("soc_link");
        out.duals.u0 = y_soc(0);
        out.duals.u = -y_soc.tail(n);
        out.duals.z = y_corner + y_trace;
      } else {
        const double y_lin = duals.at("linear")(0);
        out.duals.u0 = y_lin;
        out.duals.u = VectorXd::Zero(n);
        out.duals.z = y_corner + y_trace + problem.beta * y_lin;
      }
      break;
    }
    case RelaxationKind::kDualLmi: {
      // The LMI rows' multipliers are -(sum y_ij E_ij) = Y.
      const VectorXd y = duals.at("lmi");
      MatrixXd ym(order, order);
      int k = 0;
      for (int j = 0; j < order; ++j) {
        for (int i = j; i < order; ++i) {
          const double v = y(k++);
          if (i == j) {
            ym(i, i) = -v;
          } else {
            ym(i, j) = ym(j, i) = -0.5 * v;
          }
        }
      }
      out.Y = ym;
      out.value = -solution.primal_objective;
      const VectorXd w = conic::BlockValue(program, solution.s, "soc");
      out.duals.lambda0 = Segment(program, solution, "lambda0");
      out.duals.u0 = -w(0);
      out.duals.u = w.tail(n);
      out.duals.z = Segment(program, solution, "z");
      break;
    }
  }
  if (std::abs(out.Alpha() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kAlphaDrift,
                "lifted corner Y00 = " + std::to_string(out.Alpha()));
  }
  return out;
}

LiftedSolution SolveRelaxation(RelaxationKind kind, const EtrsProblem& problem,
                               const conic::SolverOptions& options) {
  const ConicProgram program = BuildRelaxation(kind, problem);
  const conic::ConicSolution solution = conic::Solve(program, options);
  return ExtractLifted(solution, program, problem, kind);
}

int NumericalRank(const MatrixXd& Y) {
  const auto eig = linalg::SymEigenDecompose(linalg::Symmetrize(Y));
  const double cut = 1e-7 * Y.trace();
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cut) ++rank;
  }
  return rank;
}

}  // namespace etrs
