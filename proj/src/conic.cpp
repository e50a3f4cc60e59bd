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

#include "etrs/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "etrs/error.hpp"

namespace etrs::conic {

namespace {

// LDL' without pivoting. Pivots below eps * (largest diagonal) are set to
// 1e128, so the corresponding component of the solution is zeroed.
class GuardedCholesky {
 public:
  GuardedCholesky() = default;
  GuardedCholesky(const MatrixXd& m, double reg) {
    const Eigen::Index k = m.rows();
    l_ = MatrixXd::Identity(k, k);
    d_ = VectorXd::Zero(k);
    const double scale = k > 0 ? std::max(1.0, m.diagonal().maxCoeff()) : 1.0;
    const double tiny = 1e-15 * scale;
    for (Eigen::Index j = 0; j < k; ++j) {
      double dj = m(j, j) + reg;
      for (Eigen::Index p = 0; p < j; ++p) dj -= l_(j, p) * l_(j, p) * d_(p);
      if (!(dj > tiny)) {
        dj = 1e128;
        ++dropped_;
      }
      d_(j) = dj;
      for (Eigen::Index i = j + 1; i < k; ++i) {
        double v = m(i, j);
        for (Eigen::Index p = 0; p < j; ++p) v -= l_(i, p) * l_(j, p) * d_(p);
        l_(i, j) = v / dj;
      }
    }
    if (!d_.allFinite() || !l_.allFinite()) {
      throw Error(ErrorCode::kNumericalBreakdown,
                  "reduced KKT factorization produced non-finite values");
    }
  }

  MatrixXd solve(const MatrixXd& rhs) const {
    MatrixXd out = l_.triangularView<Eigen::UnitLower>().solve(rhs);
    out = d_.cwiseInverse().asDiagonal() * out;
    return l_.transpose().triangularView<Eigen::UnitUpper>().solve(out);
  }
  int dropped() const { return dropped_; }

 private:
  MatrixXd l_;
  VectorXd d_;
  int dropped_ = 0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

// NT scaling of one cone block: W x = W^{-T} z = lambda.
// Least-squares view of the reduced system. With Bt = [W^{-T} A_K'; sqrt(reg) I]
// and Bt P = Q R, M = Bt'Bt = P R'R P'. Solve(g, ft) returns
// M^{-1} (g + Bt'[ft; 0]) without forming M; directions along numerically
// zero pivots are dropped.
class NormalSolver {
 public:
  explicit NormalSolver(const MatrixXd& bt) : qr_(bt), rows_(bt.rows()) {
    const Eigen::Index k = bt.cols();
    const MatrixXd& qr = qr_.matrixQR();
    const double top = k > 0 ? std::abs(qr(0, 0)) : 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (std::abs(qr(i, i)) > 1e-15 * top) ++rank_;
    }
  }

  MatrixXd Solve(const MatrixXd& g, const MatrixXd& ft) const {
    const Eigen::Index k = g.rows();
    MatrixXd t = MatrixXd::Zero(rank_, g.cols());
    const auto rr = qr_.matrixQR()
                        .topLeftCorner(rank_, rank_)
                        .triangularView<Eigen::Upper>();
    if (rank_ > 0) {
      const MatrixXd pg = qr_.colsPermutation().transpose() * g;
      t = rr.transpose().solve(pg.topRows(rank_));
      if (ft.size() > 0) {
        MatrixXd fext = MatrixXd::Zero(rows_, g.cols());
        fext.topRows(ft.rows()) = ft;
        const MatrixXd qf = qr_.householderQ().adjoint() * fext;
        t += qf.topRows(rank_);
      }
    }
    MatrixXd u = MatrixXd::Zero(k, g.cols());
    if (rank_ > 0) u.topRows(rank_) = rr.solve(t);
    return qr_.colsPermutation() * u;
  }

 private:
  Eigen::ColPivHouseholderQR<MatrixXd> qr_;
  Eigen::Index rows_ = 0;
  Eigen::Index rank_ = 0;
};

struct Scaling {
  BlockKind kind;
  int off = 0;
  int dim = 0;
  int order = 0;
  VectorXd d;       // nonneg: W = diag(d)
  MatrixXd w;       // soc / psd
  MatrixXd w_inv;
  MatrixXd h_inv;   // W^{-1} W^{-T}
  VectorXd lambda;  // scaled point
  VectorXd lam_eig;  // psd: lambda is Svec(diag(lam_eig))
};

MatrixXd SymmetricMap(const MatrixXd& left, int order) {
  // Matrix of U -> left * U * left' on svec coordinates.
  const int t = order * (order + 1) / 2;
  MatrixXd out(t, t);
  VectorXd e = VectorXd::Zero(t);
  for (int k = 0; k < t; ++k) {
    e.setZero();
    e(k) = 1.0;
    const MatrixXd u = Smat(e, order);
    out.col(k) = Svec(left * u * left.transpose());
  }
  return out;
}

Scaling MakeScaling(const Block& block, int off, const VectorXd& x,
                    const VectorXd& z) {
  Scaling sc;
  sc.kind = block.kind;
  sc.off = off;
  sc.dim = block.Dimension();
  sc.order = block.size;
  const auto xb = x.segment(off, sc.dim);
  const auto zb = z.segment(off, sc.dim);
  switch (block.kind) {
    case BlockKind::kNonneg: {
      sc.d = (zb.array() / xb.array()).sqrt();
      sc.lambda = (xb.array() * zb.array()).sqrt();
      break;
    }
    case BlockKind::kSoc: {
      const int n = sc.dim;
      auto jnorm = [](const VectorXd& v) {
        return std::sqrt(std::max(
            v(0) * v(0) - v.tail(v.size() - 1).squaredNorm(), 0.0));
      };
      const VectorXd xv = xb;
      const VectorXd zv = zb;
      const double xn = jnorm(xv);
      const double zn = jnorm(zv);
      if (!(xn > 0.0) || !(zn > 0.0)) {
        throw Error(ErrorCode::kNumericalBreakdown,
                    "iterate left the second-order cone interior");
      }
      const VectorXd xbar = xv / xn;
      const VectorXd zbar = zv / zn;
      const double gamma = std::sqrt(0.5 * (1.0 + xbar.dot(zbar)));
      VectorXd jx = xbar;
      jx.tail(n - 1) *= -1.0;
      const VectorXd wbar = (zbar + jx) / (2.0 * gamma);
      const double eta = std::sqrt(zn / xn);
      const double w0 = wbar(0);
      const VectorXd w1 = wbar.tail(n - 1);
      MatrixXd core = MatrixXd::Identity(n - 1, n - 1);
      core.noalias() += w1 * w1.transpose() / (1.0 + w0);
      sc.w.resize(n, n);
      sc.w(0, 0) = w0;
      sc.w.block(0, 1, 1, n - 1) = w1.transpose();
      sc.w.block(1, 0, n - 1, 1) = w1;
      sc.w.block(1, 1, n - 1, n - 1) = core;
      sc.w_inv = sc.w;
      sc.w_inv.block(0, 1, 1, n - 1) *= -1.0;
      sc.w_inv.block(1, 0, n - 1, 1) *= -1.0;
      sc.w *= eta;
      sc.w_inv /= eta;
      sc.h_inv = sc.w_inv * sc.w_inv.transpose();
      sc.lambda = sc.w * xv;
      break;
    }
    case BlockKind::kPsd: {
      const MatrixXd xm = Smat(xb, sc.order);
      const MatrixXd zm = Smat(zb, sc.order);
      Eigen::LLT<MatrixXd> lx(xm);
      Eigen::LLT<MatrixXd> lz(zm);
      if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) {
        throw Error(ErrorCode::kNumericalBreakdown,
                    "iterate left the PSD cone interior");
      }
      const MatrixXd l1 = lx.matrixL();
      const MatrixXd l2 = lz.matrixL();
      Eigen::JacobiSVD<MatrixXd> svd(l2.transpose() * l1,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
      sc.lam_eig = svd.singularValues();
      const VectorXd inv_sqrt = sc.lam_eig.array().rsqrt();
      const MatrixXd rmat = l1 * svd.matrixV() * inv_sqrt.asDiagonal();
      const MatrixXd r_inv = rmat.inverse();
      sc.w = SymmetricMap(r_inv, sc.order);
      sc.w_inv = SymmetricMap(rmat, sc.order);
      const MatrixXd g = rmat * rmat.transpose();
      sc.h_inv = SymmetricMap(g, sc.order);
      sc.lambda = Svec(MatrixXd(sc.lam_eig.asDiagonal()));
      break;
    }
    case BlockKind::kFree:
      break;
  }
  return sc;
}

VectorXd ApplyW(const Scaling& sc, const VectorXd& v) {
  if (sc.kind == BlockKind::kNonneg) return sc.d.cwiseProduct(v);
  return sc.w * v;
}
VectorXd ApplyWT(const Scaling& sc, const VectorXd& v) {
  if (sc.kind == BlockKind::kNonneg) return sc.d.cwiseProduct(v);
  return sc.w.transpose() * v;
}
VectorXd ApplyWinv(const Scaling& sc, const VectorXd& v) {
  if (sc.kind == BlockKind::kNonneg) return v.cwiseQuotient(sc.d);
  return sc.w_inv * v;
}
VectorXd ApplyWinvT(const Scaling& sc, const VectorXd& v) {
  if (sc.kind == BlockKind::kNonneg) return v.cwiseQuotient(sc.d);
  return sc.w_inv.transpose() * v;
}

// Jordan product u o v.
VectorXd Prod(BlockKind kind, int order, const VectorXd& u, const VectorXd& v) {
  switch (kind) {
    case BlockKind::kNonneg:
      return u.cwiseProduct(v);
    case BlockKind::kSoc: {
      VectorXd out(u.size());
      out(0) = u.dot(v);
      out.tail(u.size() - 1) =
          u(0) * v.tail(v.size() - 1) + v(0) * u.tail(u.size() - 1);
      return out;
    }
    case BlockKind::kPsd: {
      const MatrixXd um = Smat(u, order);
      const MatrixXd vm = Smat(v, order);
      return Svec(0.5 * (um * vm + vm * um));
    }
    case BlockKind::kFree:
      break;
  }
  return VectorXd();
}

// Solves lambda o w = d for w.
VectorXd InvProd(const Scaling& sc, const VectorXd& d) {
  switch (sc.kind) {
    case BlockKind::kNonneg:
      return d.cwiseQuotient(sc.lambda);
    case BlockKind::kSoc: {
      const VectorXd& l = sc.lambda;
      const int n = static_cast<int>(l.size());
      const double det = l(0) * l(0) - l.tail(n - 1).squaredNorm();
      VectorXd w(n);
      w(0) = (l(0) * d(0) - l.tail(n - 1).dot(d.tail(n - 1))) / det;
      w.tail(n - 1) = (d.tail(n - 1) - w(0) * l.tail(n - 1)) / l(0);
      return w;
    }
    case BlockKind::kPsd: {
      MatrixXd dm = Smat(d, sc.order);
      for (int j = 0; j < sc.order; ++j) {
        for (int i = 0; i < sc.order; ++i) {
          dm(i, j) *= 2.0 / (sc.lam_eig(i) + sc.lam_eig(j));
        }
      }
      return Svec(dm);
    }
    case BlockKind::kFree:
      break;
  }
  return VectorXd();
}

VectorXd Identity(BlockKind kind, int order, int dim) {
  switch (kind) {
    case BlockKind::kNonneg:
      return VectorXd::Ones(dim);
    case BlockKind::kSoc: {
      VectorXd e = VectorXd::Zero(dim);
      e(0) = 1.0;
      return e;
    }
    case BlockKind::kPsd:
      return Svec(MatrixXd::Identity(order, order));
    case BlockKind::kFree:
      return VectorXd::Zero(dim);
  }
  return VectorXd();
}

// Largest alpha with x + alpha dx in the block (kInf if unbounded).
double MaxStep(BlockKind kind, int order, const VectorXd& x,
               const VectorXd& dx) {
  switch (kind) {
    case BlockKind::kNonneg: {
      double alpha = kInf;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (dx(i) < 0.0) alpha = std::min(alpha, -x(i) / dx(i));
      }
      return alpha;
    }
    case BlockKind::kSoc: {
      const int n = static_cast<int>(x.size());
      const double qa = dx(0) * dx(0) - dx.tail(n - 1).squaredNorm();
      const double qb =
          2.0 * (x(0) * dx(0) - x.tail(n - 1).dot(dx.tail(n - 1)));
      const double qc = x(0) * x(0) - x.tail(n - 1).squaredNorm();
      double alpha = kInf;
      auto consider = [&](double root) {
        if (root > 0.0 && std::isfinite(root)) alpha = std::min(alpha, root);
      };
      const double scale = std::max({std::abs(qa), std::abs(qb), qc});
      if (std::abs(qa) <= 1e-15 * scale) {
        if (qb < 0.0) consider(-qc / qb);
      } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
          const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
          if (q != 0.0) {
            consider(q / qa);
            consider(qc / q);
          }
        }
      }
      // The head must stay positive as well.
      if (dx(0) < 0.0) alpha = std::min(alpha, -x(0) / dx(0));
      return alpha;
    }
    case BlockKind::kPsd: {
      const MatrixXd xm = Smat(x, order);
      const MatrixXd dm = Smat(dx, order);
      Eigen::LLT<MatrixXd> llt(xm);
      if (llt.info() != Eigen::Success) return 0.0;
      const MatrixXd l = llt.matrixL();
      const MatrixXd tmp = l.triangularView<Eigen::Lower>().solve(dm);
      const MatrixXd m = l.triangularView<Eigen::Lower>()
                             .solve(tmp.transpose())
                             .transpose();
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()),
                                                 Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues()(0);
      return lo < 0.0 ? -1.0 / lo : kInf;
    }
    case BlockKind::kFree:
      return kInf;
  }
  return kInf;
}

struct Layout {
  std::vector<int> offsets;
  std::vector<int> free_idx;
};

Layout MakeLayout(const ConeSpec& cone) {
  Layout lay;
  int off = 0;
  for (const auto& b : cone.blocks) {
    lay.offsets.push_back(off);
    if (b.kind == BlockKind::kFree) {
      for (int i = 0; i < b.size; ++i) lay.free_idx.push_back(off + i);
    }
    off += b.Dimension();
  }
  return lay;
}

}  // namespace

VectorXd Svec(const MatrixXd& m) {
  const int s = static_cast<int>(m.rows());
  VectorXd v(s * (s + 1) / 2);
  int k = 0;
  for (int j = 0; j < s; ++j) {
    for (int i = j; i < s; ++i) {
      v(k++) = (i == j) ? m(i, i) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return v;
}

MatrixXd Smat(const VectorXd& v, int order) {
  MatrixXd m(order, order);
  int k = 0;
  for (int j = 0; j < order; ++j) {
    for (int i = j; i < order; ++i) {
      if (i == j) {
        m(i, i) = v(k++);
      } else {
        m(i, j) = m(j, i) = v(k++) / kSqrt2;
      }
    }
  }
  return m;
}

int ConeSpec::Dimension() const {
  int d = 0;
  for (const auto& b : blocks) d += b.Dimension();
  return d;
}

int ConeSpec::Offset(std::string_view name) const {
  int off = 0;
  for (const auto& b : blocks) {
    if (b.name == name) return off;
    off += b.Dimension();
  }
  throw Error(ErrorCode::kInvalidInput,
              "no cone block named " + std::string(name));
}

const Block& ConeSpec::Find(std::string_view name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return b;
  }
  throw Error(ErrorCode::kInvalidInput,
              "no cone block named " + std::string(name));
}

int ConeSpec::Degree() const {
  int d = 0;
  for (const auto& b : blocks) {
    switch (b.kind) {
      case BlockKind::kPsd: d += b.size; break;
      case BlockKind::kSoc: d += 1; break;
      case BlockKind::kNonneg: d += b.size; break;
      case BlockKind::kFree: break;
    }
  }
  return d;
}

void ConicProgram::Validate() const {
  const int dim = cone.Dimension();
  for (const auto& b : cone.blocks) {
    if (b.size <= 0 || (b.kind == BlockKind::kSoc && b.size < 2)) {
      throw Error(ErrorCode::kDimensionMismatch, "bad block size: " + b.name);
    }
  }
  if (c.size() != dim || A.cols() != dim || A.rows() != r.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "objective/constraint sizes disagree with the cone");
  }
  if (!c.allFinite() || !A.allFinite() || !r.allFinite()) {
    throw Error(ErrorCode::kNonFiniteEntry, "conic data contains NaN/Inf");
  }
}

std::string_view StatusName(Status status) {
  switch (status) {
    case Status::kOptimal: return "Optimal";
    case Status::kInfeasible: return "Infeasible";
    case Status::kUnbounded: return "Unbounded";
    case Status::kMaxIter: return "MaxIter";
  }
  return "Unknown";
}

ConicSolution Solve(const ConicProgram& program, const SolverOptions& opt) {
  program.Validate();
  const ConeSpec& cone = program.cone;
  const MatrixXd& A = program.A;
  const VectorXd& c = program.c;
  const VectorXd& r = program.r;
  const int n = cone.Dimension();
  const int m = program.NumRows();
  const Layout lay = MakeLayout(cone);
  const int nf = static_cast<int>(lay.free_idx.size());
  const int n_cone = n - nf;
  const double nu = cone.Degree();
  const double r_scale = 1.0 + r.norm();
  const double c_scale = 1.0 + c.norm();

  MatrixXd a_free(m, nf);
  for (int k = 0; k < nf; ++k) a_free.col(k) = A.col(lay.free_idx[k]);

  VectorXd x = VectorXd::Zero(n);
  VectorXd z = VectorXd::Zero(n);
  for (size_t b = 0; b < cone.blocks.size(); ++b) {
    const auto& blk = cone.blocks[b];
    if (blk.kind == BlockKind::kFree) continue;
    const VectorXd e = Identity(blk.kind, blk.size, blk.Dimension());
    x.segment(lay.offsets[b], blk.Dimension()) = e;
    z.segment(lay.offsets[b], blk.Dimension()) = e;
  }
  VectorXd y = VectorXd::Zero(m);
  double tau = 1.0;
  double kappa = 1.0;

  ConicSolution sol;
  auto finish = [&](Status status) {
    sol.status = status;
    const double t = (status == Status::kOptimal || status == Status::kMaxIter)
                         ? tau
                         : 1.0;
    sol.s = x / t;
    sol.y = y / t;
    sol.w = z / t;
    sol.primal_objective = c.dot(sol.s);
    sol.dual_objective = r.dot(sol.y);
    sol.primal_residual = (A * sol.s - r).norm() / r_scale;
    sol.dual_residual = (A.transpose() * sol.y + sol.w - c).norm() / c_scale;
    sol.gap = std::abs(sol.s.dot(sol.w)) /
              (1.0 + std::abs(sol.primal_objective));
    return sol;
  };

  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    sol.iterations = iter;
    const VectorXd res_p = A * x - r * tau;
    const VectorXd res_d = A.transpose() * y + z - c * tau;
    const double res_g = r.dot(y) - c.dot(x) - kappa;

    const double pobj = c.dot(x) / tau;
    const double dobj = r.dot(y) / tau;
    const double pres = res_p.norm() / tau / r_scale;
    const double dres = res_d.norm() / tau / c_scale;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const double compl_gap = x.dot(z) / (tau * tau) / (1.0 + std::abs(pobj));
    const double mu = (x.dot(z) + tau * kappa) / (nu + 1.0);

    if (opt.record_history) {
      sol.history.push_back(
          {iter, pobj, dobj, pres, dres, mu, tau, kappa, 0.0});
    }
    if (pres <= opt.feasibility_tol && dres <= opt.feasibility_tol &&
        gap <= opt.gap_tol && compl_gap <= opt.gap_tol) {
      return finish(Status::kOptimal);
    }
    // Certificates of infeasibility, checked on the ray direction.
    const double ry = r.dot(y);
    if (ry > 0.0 && tau < kappa &&
        (A.transpose() * y + z).norm() / ry <= opt.infeasibility_tol) {
      y /= ry;
      z /= ry;
      return finish(Status::kInfeasible);
    }
    const double cx = c.dot(x);
    if (cx < 0.0 && tau < kappa &&
        (A * x).norm() / (-cx) <= opt.infeasibility_tol) {
      x /= -cx;
      return finish(Status::kUnbounded);
    }
    if (iter == opt.max_iterations) break;

    // Scalings. The reduced matrix is B B' with B = A_K W^{-1}; it is
    // factored through a pivoted QR of B' so its conditioning is not squared.
    std::vector<Scaling> sc;
    MatrixXd bt(n_cone + m, m);
    {
      int row = 0;
      for (size_t b = 0; b < cone.blocks.size(); ++b) {
        const auto& blk = cone.blocks[b];
        if (blk.kind == BlockKind::kFree) continue;
        sc.push_back(MakeScaling(blk, lay.offsets[b], x, z));
        const auto& s = sc.back();
        const auto ab = A.middleCols(s.off, s.dim);
        if (s.kind == BlockKind::kNonneg) {
          bt.middleRows(row, s.dim) =
              s.d.cwiseInverse().asDiagonal() * ab.transpose();
        } else {
          bt.middleRows(row, s.dim) = s.w_inv.transpose() * ab.transpose();
        }
        row += s.dim;
      }
      bt.bottomRows(m) =
          std::sqrt(opt.regularization) * MatrixXd::Identity(m, m);
    }
    const NormalSolver normal(bt);
    const auto bk = bt.topRows(n_cone);  // W^{-T} A_K'
    MatrixXd kinv_af;
    GuardedCholesky free_chol;
    if (nf > 0) {
      kinv_af = normal.Solve(a_free, MatrixXd());
      MatrixXd schur = a_free.transpose() * kinv_af;
      schur = 0.5 * (schur + schur.transpose()).eval();
      free_chol = GuardedCholesky(schur, opt.regularization);
    }

    // H maps cone parts (W'W), zero on free parts.
    auto apply_h = [&](const VectorXd& v) {
      VectorXd out = VectorXd::Zero(n);
      for (const auto& s : sc) {
        out.segment(s.off, s.dim) =
            ApplyWT(s, ApplyW(s, v.segment(s.off, s.dim)));
      }
      return out;
    };
    // In scaled coordinates xt = W dx_K the system [-H A'; A 0] becomes
    //   -xt + Bk dy = ft,  A_F' dy = ff,  Bk' xt + A_F dx_F = g
    // with ft = W^{-T} f_K.
    struct Scaled {
      VectorXd xt, xf, dy;
    };
    auto solve_scaled = [&](const VectorXd& ft, const VectorXd& ff,
                            const VectorXd& g) {
      Scaled out;
      const VectorXd u = normal.Solve(g, ft);
      if (nf > 0) {
        out.xf = free_chol.solve(a_free.transpose() * u - ff);
        out.dy = u - kinv_af * out.xf;
      } else {
        out.xf = VectorXd::Zero(0);
        out.dy = u;
      }
      out.xt = bk * out.dy - ft;
      return out;
    };
    auto scaled_residual = [&](const Scaled& v, const VectorXd& ft,
                               const VectorXd& ff, const VectorXd& g,
                               VectorXd& r1, VectorXd& r2, VectorXd& r3) {
      r1 = ft - (-v.xt + bk * v.dy);
      r2 = nf > 0 ? VectorXd(ff - a_free.transpose() * v.dy) : VectorXd();
      r3 = g - bk.transpose() * v.xt;
      if (nf > 0) r3 -= a_free * v.xf;
      return std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
    };
    auto solve_kkt = [&](const VectorXd& f, const VectorXd& g, VectorXd& dx,
                         VectorXd& dy) {
      VectorXd ft(n_cone);
      {
        int row = 0;
        for (const auto& s : sc) {
          ft.segment(row, s.dim) = ApplyWinvT(s, f.segment(s.off, s.dim));
          row += s.dim;
        }
      }
      VectorXd ff(nf);
      for (int k = 0; k < nf; ++k) ff(k) = f(lay.free_idx[k]);

      Scaled sol_v = solve_scaled(ft, ff, g);
      VectorXd r1, r2, r3;
      double err = scaled_residual(sol_v, ft, ff, g, r1, r2, r3);
      const double floor = 1e-15 * (1.0 + ft.norm() + ff.norm() + g.norm());
      for (int k = 0; k < opt.refinement_steps && err > floor; ++k) {
        const Scaled e = solve_scaled(r1, r2, r3);
        Scaled next{sol_v.xt + e.xt, sol_v.xf + e.xf, sol_v.dy + e.dy};
        VectorXd n1, n2, n3;
        const double next_err = scaled_residual(next, ft, ff, g, n1, n2, n3);
        // Refinement can stall once regularization dominates; keep the best.
        if (!(next_err < err)) break;
        sol_v = std::move(next);
        r1 = std::move(n1);
        r2 = std::move(n2);
        r3 = std::move(n3);
        err = next_err;
      }
      dx = VectorXd::Zero(n);
      int row = 0;
      for (const auto& s : sc) {
        dx.segment(s.off, s.dim) = ApplyWinv(s, sol_v.xt.segment(row, s.dim));
        row += s.dim;
      }
      for (int k = 0; k < nf; ++k) dx(lay.free_idx[k]) = sol_v.xf(k);
      dy = sol_v.dy;
    };

    VectorXd p2x, p2y;
    solve_kkt(c, r, p2x, p2y);
    // -c'p2x + r'p2y equals p2x' H p2x; the quadratic form avoids the
    // cancellation between two large terms.
    const double denom_tau = kappa / tau + p2x.dot(apply_h(p2x));

    struct Direction {
      VectorXd dx, dy, dz;
      double dtau = 0.0, dkappa = 0.0;
    };
    // ds: per-block complementarity target in scaled space.
    auto direction = [&](double eta, const VectorXd& ds, double dk) {
      VectorXd ls = VectorXd::Zero(n);
      VectorXd rhs_x = -eta * res_d;
      for (const auto& s : sc) {
        const VectorXd l = InvProd(s, ds.segment(s.off, s.dim));
        ls.segment(s.off, s.dim) = l;
        rhs_x.segment(s.off, s.dim) += ApplyWT(s, l);
      }
      const VectorXd rhs_y = -eta * res_p;
      const double rhs_t = -eta * res_g - dk / tau;
      VectorXd p1x, p1y;
      solve_kkt(rhs_x, rhs_y, p1x, p1y);
      Direction d;
      d.dtau = (rhs_t + c.dot(p1x) - r.dot(p1y)) / denom_tau;
      d.dx = p1x + d.dtau * p2x;
      d.dy = p1y + d.dtau * p2y;
      // From the dual residual row, which keeps that equation exact; the
      // solve error lands in complementarity where the step rule sees it.
      const VectorXd dz_all = -eta * res_d - A.transpose() * d.dy + c * d.dtau;
      d.dz = VectorXd::Zero(n);
      for (const auto& s : sc) {
        d.dz.segment(s.off, s.dim) = dz_all.segment(s.off, s.dim);
      }
      d.dkappa = (-dk - kappa * d.dtau) / tau;
      return d;
    };
    auto max_step = [&](const Direction& d) {
      double alpha = kInf;
      for (const auto& s : sc) {
        alpha = std::min(alpha, MaxStep(s.kind, s.order, x.segment(s.off, s.dim),
                                        d.dx.segment(s.off, s.dim)));
        alpha = std::min(alpha, MaxStep(s.kind, s.order, z.segment(s.off, s.dim),
                                        d.dz.segment(s.off, s.dim)));
      }
      if (d.dtau < 0.0) alpha = std::min(alpha, -tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -kappa / d.dkappa);
      return alpha;
    };

    // Predictor.
    VectorXd ds_aff = VectorXd::Zero(n);
    for (const auto& s : sc) {
      ds_aff.segment(s.off, s.dim) = Prod(s.kind, s.order, s.lambda, s.lambda);
    }
    const Direction aff = direction(1.0, ds_aff, tau * kappa);
    const double alpha_aff = std::min(1.0, max_step(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    // Corrector.
    VectorXd ds = VectorXd::Zero(n);
    for (const auto& s : sc) {
      const VectorXd wdx = ApplyW(s, aff.dx.segment(s.off, s.dim));
      const VectorXd wdz = ApplyWinvT(s, aff.dz.segment(s.off, s.dim));
      ds.segment(s.off, s.dim) =
          ds_aff.segment(s.off, s.dim) + Prod(s.kind, s.order, wdz, wdx) -
          sigma * mu * Identity(s.kind, s.order, s.dim);
    }
    const double dk = tau * kappa + aff.dtau * aff.dkappa - sigma * mu;
    const Direction dir = direction(1.0 - sigma, ds, dk);
    const double alpha = std::min(1.0, opt.step_fraction * max_step(dir));

    x += alpha * dir.dx;
    y += alpha * dir.dy;
    z += alpha * dir.dz;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
    if (opt.record_history) sol.history.back().step = alpha;
  }
  return finish(Status::kMaxIter);
}

std::map<std::string, VectorXd> ExtractDual(const ConicSolution& solution,
                                            const ConicProgram& program) {
  if (solution.status != Status::kOptimal) {
    throw Error(ErrorCode::kNotOptimal,
                "duals requested from a non-optimal solve");
  }
  std::map<std::string, VectorXd> out;
  for (const auto& g : program.row_groups) {
    out[g.name] = solution.y.segment(g.start, g.count);
  }
  return out;
}

VectorXd BlockValue(const ConicProgram& program, const VectorXd& s,
                    std::string_view name) {
  const Block& b = program.cone.Find(name);
  return s.segment(program.cone.Offset(name), b.Dimension());
}

double ConeMargin(const ConeSpec& cone, const VectorXd& s) {
  double margin = kInf;
  int off = 0;
  for (const auto& b : cone.blocks) {
    const auto seg = s.segment(off, b.Dimension());
    switch (b.kind) {
      case BlockKind::kNonneg:
        margin = std::min(margin, seg.minCoeff());
        break;
      case BlockKind::kSoc:
        margin = std::min(margin, seg(0) - seg.tail(b.size - 1).norm());
        break;
      case BlockKind::kPsd: {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Smat(seg, b.size),
                                                   Eigen::EigenvaluesOnly);
        margin = std::min(margin, es.eigenvalues()(0));
        break;
      }
      case BlockKind::kFree:
        break;
    }
    off += b.Dimension();
  }
  return margin;
}

}  // namespace etrs::conic
