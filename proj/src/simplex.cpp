// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/simplex.hpp"

#include "qpureb/errors.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>

namespace qpureb {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Working tableau over [A | I] with the artificial columns at n..n+m-1.
class RevisedSimplex {
 public:
  RevisedSimplex(const RealMatrix& a, const RealVector& b, const SimplexOptions& opts)
      : m_(a.rows()), n_(a.cols()), opts_(opts), a_(m_, n_ + m_), b_(b), sign_(RealVector::Ones(a.rows())) {
    a_.leftCols(n_) = a;
    a_.rightCols(m_).setIdentity();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        a_.row(i).head(n_) *= -1.0;
        b_[i] = -b_[i];
        sign_[i] = -1.0;
      }
    }
    basis_.resize(m_);
    basic_.assign(n_ + m_, 0);
    for (Eigen::Index i = 0; i < m_; ++i) {
      basis_[i] = static_cast<int>(n_ + i);
      basic_[n_ + i] = 1;
    }
    binv_ = RealMatrix::Identity(m_, m_);
    xb_ = b_;
  }

  // Columns at or beyond `entering_limit` never enter.
  LpStatus optimize(const RealVector& cost, Eigen::Index entering_limit, int& iterations) {
    int degenerate = 0;
    int since_refactor = 0;
    while (iterations < opts_.max_iters) {
      if (since_refactor >= opts_.refactor_every) {
        refactor();
        since_refactor = 0;
      }
      const RealVector y = dual(cost);
      const bool bland = degenerate >= opts_.degenerate_limit;
      Eigen::Index enter = -1;
      double best = opts_.optimality_tol;
      for (Eigen::Index j = 0; j < entering_limit; ++j) {
        if (in_basis(j)) continue;
        const double d = cost[j] - y.dot(a_.col(j));
        if (d > best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      const RealVector col = binv_ * a_.col(enter);
      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      double pivot = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (col[i] <= opts_.pivot_tol) continue;
        const double r = std::max(xb_[i], 0.0) / col[i];
        const bool better =
            leave < 0 || r < ratio - 1e-12 ||
            (r <= ratio + 1e-12 && (bland ? basis_[i] < basis_[leave] : col[i] > pivot));
        if (better) {
          leave = i;
          ratio = r;
          pivot = col[i];
        }
      }
      if (leave < 0) return LpStatus::unbounded;

      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot_on(leave, enter, col);
      ++iterations;
      ++since_refactor;
    }
    return LpStatus::iteration_limit;
  }

  // Installs a structural basis; false when it is singular.
  bool set_basis(const std::vector<int>& cols) {
    if (static_cast<Eigen::Index>(cols.size()) != m_) return false;
    std::vector<char> seen(n_ + m_, 0);
    for (int j : cols) {
      if (j < 0 || j >= n_ || seen[j]) return false;
      seen[j] = 1;
    }
    RealMatrix bm(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) bm.col(i) = a_.col(cols[i]);
    Eigen::FullPivLU<RealMatrix> lu(bm);
    if (!lu.isInvertible()) return false;
    basis_ = cols;
    basic_ = seen;
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
    return true;
  }

  RealVector basic_solution() const { return xb_; }

  // Replaces the right-hand side (given in the caller's row signs) and
  // recomputes the basic solution.
  void set_rhs(const RealVector& b) {
    b_ = sign_.cwiseProduct(b);
    refactor();
  }

  // Dual simplex pivots restoring primal feasibility of a dual feasible basis.
  LpStatus dual_simplex(const RealVector& cost, Eigen::Index entering_limit, int& iterations) {
    while (iterations < opts_.max_iters) {
      Eigen::Index leave = -1;
      double worst = -opts_.feasibility_tol;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (xb_[i] < worst) {
          worst = xb_[i];
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::optimal;
      const RealVector y = dual(cost);
      const RealVector row = binv_.row(leave) * a_.leftCols(entering_limit);
      Eigen::Index enter = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < entering_limit; ++j) {
        if (in_basis(j) || row[j] >= -opts_.pivot_tol) continue;
        const double d = std::min(cost[j] - y.dot(a_.col(j)), 0.0);
        const double r = d / row[j];
        if (r < ratio) {
          ratio = r;
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::infeasible;
      pivot_on(leave, enter, binv_ * a_.col(enter));
      ++iterations;
    }
    return LpStatus::iteration_limit;
  }

  // Pivots basic artificials out where a structural column can replace them.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      const RealVector row = binv_.row(i) * a_.leftCols(n_);
      Eigen::Index best = -1;
      double mag = opts_.pivot_tol;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (!in_basis(j) && std::abs(row[j]) > mag) {
          mag = std::abs(row[j]);
          best = j;
        }
      }
      if (best >= 0) pivot_on(i, best, binv_ * a_.col(best));
    }
    refactor();
  }

  RealVector dual(const RealVector& cost) const {
    RealVector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
    return binv_.transpose() * cb;
  }

  RealVector solution() const {
    RealVector x = RealVector::Zero(n_ + m_);
    for (Eigen::Index i = 0; i < m_; ++i) x[basis_[i]] = std::max(xb_[i], 0.0);
    return x;
  }

  const std::vector<int>& basis() const { return basis_; }
  Eigen::Index rows() const { return m_; }
  Eigen::Index cols() const { return n_; }

 private:
  bool in_basis(Eigen::Index j) const { return basic_[j] != 0; }

  void pivot_on(Eigen::Index leave, Eigen::Index enter, const RealVector& col) {
    const double p = col[leave];
    const RealVector pivot_row = binv_.row(leave) / p;
    const double x_enter = xb_[leave] / p;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == leave) continue;
      binv_.row(i) -= col[i] * pivot_row;
      xb_[i] -= col[i] * x_enter;
    }
    binv_.row(leave) = pivot_row;
    xb_[leave] = x_enter;
    basic_[basis_[leave]] = 0;
    basic_[enter] = 1;
    basis_[leave] = static_cast<int>(enter);
  }

  void refactor() {
    RealMatrix bm(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) bm.col(i) = a_.col(basis_[i]);
    Eigen::PartialPivLU<RealMatrix> lu(bm);
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
  }

  Eigen::Index m_, n_;
  SimplexOptions opts_;
  RealMatrix a_;
  RealVector b_;
  RealVector sign_;
  std::vector<int> basis_;
  std::vector<char> basic_;
  RealMatrix binv_;
  RealVector xb_;
};

}  // namespace

LpResult simplex_maximize(const RealMatrix& a, const RealVector& b, const RealVector& c,
                          const SimplexOptions& opts, const std::vector<int>* warm_basis) {
  if (a.rows() != b.size() || a.cols() != c.size()) {
    throw ArgumentError("simplex_maximize: dimension mismatch");
  }
  if (a.rows() == 0) throw ArgumentError("simplex_maximize: no constraints");
  const Eigen::Index m = a.rows(), n = a.cols();
  std::mt19937_64 rng(opts.perturbation_seed);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  LpResult result;

  // Zero right-hand sides make the vertices highly degenerate; solve a
  // randomly perturbed problem first, then restore b by dual simplex pivots.
  // A warm basis B is kept feasible by perturbing along B u with u > 0.
  RealVector perturbed = b;
  bool warm = false;
  std::optional<RevisedSimplex> lp;
  if (warm_basis) {
    lp.emplace(a, b, opts);
    if (lp->set_basis(*warm_basis) && lp->basic_solution().minCoeff() >= -opts.feasibility_tol) {
      warm = true;
      if (opts.perturbation > 0.0) {
        RealVector shift(m);
        for (Eigen::Index i = 0; i < m; ++i) shift[i] = opts.perturbation * u(rng);
        RealMatrix bm(m, m);
        for (Eigen::Index i = 0; i < m; ++i) bm.col(i) = a.col((*warm_basis)[i]);
        perturbed = b + bm * shift;
        lp.emplace(a, perturbed, opts);
        warm = lp->set_basis(*warm_basis) && lp->basic_solution().minCoeff() >= 0.0;
      }
    }
  }
  if (!warm) {
    perturbed = b;
    if (opts.perturbation > 0.0) {
      for (Eigen::Index i = 0; i < m; ++i) perturbed[i] += (b[i] < 0.0 ? -1.0 : 1.0) * opts.perturbation * u(rng);
    }
    lp.emplace(a, perturbed, opts);

    // Phase 1: drive the artificials to zero.
    RealVector phase1 = RealVector::Zero(n + m);
    phase1.tail(m).setConstant(-1.0);
    const LpStatus s1 = lp->optimize(phase1, n + m, result.iterations);
    const RealVector x1 = lp->solution();
    if (s1 == LpStatus::iteration_limit) {
      result.status = s1;
      return result;
    }
    if (x1.tail(m).sum() > opts.feasibility_tol * std::max(1.0, perturbed.cwiseAbs().sum())) {
      result.status = LpStatus::infeasible;
      return result;
    }
    lp->expel_artificials();
  }

  // Phase 2 over the structural columns.
  RealVector cost = RealVector::Zero(n + m);
  cost.head(n) = c;
  result.status = lp->optimize(cost, n, result.iterations);
  if (result.status == LpStatus::optimal && opts.perturbation > 0.0) {
    lp->set_rhs(b);
    result.status = lp->dual_simplex(cost, n, result.iterations);
    if (result.status == LpStatus::optimal) result.status = lp->optimize(cost, n, result.iterations);
  }
  const RealVector x = lp->solution();
  result.x = x.head(n);
  result.objective = c.dot(result.x);
  RealVector y = lp->dual(cost);
  for (Eigen::Index i = 0; i < m; ++i)
    if (perturbed[i] < 0.0) y[i] = -y[i];
  result.dual = std::move(y);
  result.basis = lp->basis();
  return result;
}

}  // namespace qpureb
