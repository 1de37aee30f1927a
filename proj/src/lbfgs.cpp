// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/lbfgs.hpp"

#include "qpureb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace qpureb {
namespace {

struct Trial {
  double a = 0.0;
  double f = 0.0;
  double dphi = 0.0;
};

struct Evaluator {
  const LbfgsObjective& fun;
  const RealVector& x;
  const RealVector& d;
  RealVector x_trial;
  RealVector g_trial;
  int evaluations = 0;

  Trial operator()(double a) {
    x_trial = x + a * d;
    g_trial.resize(x.size());
    double f = fun(x_trial, g_trial);
    ++evaluations;
    if (!std::isfinite(f) || !g_trial.allFinite()) f = std::numeric_limits<double>::infinity();
    return {a, f, std::isfinite(f) ? g_trial.dot(d) : 0.0};
  }
};

// Minimizer of the cubic interpolating (a, f, dphi) at both ends, or NaN.
double cubic_min(const Trial& p, const Trial& q) {
  const double d1 = p.dphi + q.dphi - 3.0 * (p.f - q.f) / (p.a - q.a);
  const double disc = d1 * d1 - p.dphi * q.dphi;
  if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), q.a - p.a);
  const double denom = q.dphi - p.dphi + 2.0 * d2;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return q.a - (q.a - p.a) * (q.dphi + d2 - d1) / denom;
}

struct LineSearchOutcome {
  bool ok = false;
  double a = 0.0;
  double f = 0.0;
  RealVector x;
  RealVector g;
};

LineSearchOutcome strong_wolfe(Evaluator& eval, double f0, double dphi0, double a_init,
                               const LbfgsOptions& opts) {
  LineSearchOutcome out;
  const double c1 = opts.c1, c2 = opts.c2;
  Trial best{0.0, f0, dphi0};  // best point satisfying sufficient decrease
  RealVector best_x, best_g;

  auto accept = [&](const Trial& t) {
    out.ok = true;
    out.a = t.a;
    out.f = t.f;
    out.x = eval.x_trial;
    out.g = eval.g_trial;
  };
  auto remember = [&](const Trial& t) {
    if (t.f <= f0 + c1 * t.a * dphi0 && t.f < best.f) {
      best = t;
      best_x = eval.x_trial;
      best_g = eval.g_trial;
    }
  };
  auto fallback = [&]() {
    if (best.a > 0.0) {
      out.ok = true;
      out.a = best.a;
      out.f = best.f;
      out.x = best_x;
      out.g = best_g;
    }
    return out;
  };

  auto zoom = [&](Trial lo, Trial hi) -> LineSearchOutcome {
    for (int j = 0; j < opts.max_line_search; ++j) {
      const double width = hi.a - lo.a;
      double a = cubic_min(lo, hi);
      const double left = std::min(lo.a, hi.a), right = std::max(lo.a, hi.a);
      const double margin = 0.1 * (right - left);
      if (!std::isfinite(a) || a < left + margin || a > right - margin) a = 0.5 * (lo.a + hi.a);
      if (std::abs(width) <= 1e-16 * std::max(1.0, std::abs(lo.a))) break;
      const Trial t = eval(a);
      remember(t);
      if (t.f > f0 + c1 * a * dphi0 || t.f >= lo.f) {
        hi = t;
      } else {
        if (std::abs(t.dphi) <= -c2 * dphi0) {
          accept(t);
          return out;
        }
        if (t.dphi * (hi.a - lo.a) >= 0.0) hi = lo;
        lo = t;
      }
    }
    return fallback();
  };

  Trial prev{0.0, f0, dphi0};
  double a = a_init;
  for (int i = 0; i < opts.max_line_search; ++i) {
    const Trial t = eval(a);
    remember(t);
    if (t.f > f0 + c1 * a * dphi0 || (i > 0 && t.f >= prev.f)) return zoom(prev, t);
    if (std::abs(t.dphi) <= -c2 * dphi0) {
      accept(t);
      return out;
    }
    if (t.dphi >= 0.0) return zoom(t, prev);
    prev = t;
    a *= 2.0;
  }
  return fallback();
}

}  // namespace

LbfgsResult lbfgs_minimize(const LbfgsObjective& fun, RealVector x0, const LbfgsOptions& opts) {
  if (opts.memory < 1 || opts.max_iters < 0) throw ArgumentError("lbfgs_minimize: invalid options");
  LbfgsResult res;
  RealVector x = std::move(x0);
  RealVector g(x.size());
  double f = fun(x, g);
  res.evaluations = 1;
  res.history.push_back(f);
  if (!std::isfinite(f)) {
    res.x = x;
    res.f = f;
    res.reason = "non-finite objective at start";
    return res;
  }

  std::deque<RealVector> s_hist, y_hist;
  std::deque<double> rho_hist;
  int consecutive_failures = 0;
  RealVector d(x.size());

  auto finish = [&](bool converged, std::string reason) {
    res.x = x;
    res.f = f;
    res.converged = converged;
    res.reason = std::move(reason);
    return res;
  };

  if (f <= opts.stop_below) return finish(true, "below target");

  for (int it = 0; it < opts.max_iters; ++it) {
    if (g.cwiseAbs().maxCoeff() <= opts.gtol) return finish(true, "gradient tolerance");

    // Two-loop recursion.
    d = -g;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(d);
      d -= alpha[k] * y_hist[k];
    }
    if (m > 0) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(d);
      d += (alpha[k] - beta) * s_hist[k];
    }
    double dphi0 = g.dot(d);
    if (!(dphi0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      dphi0 = g.dot(d);
    }
    const double a_init = s_hist.empty() ? std::min(1.0, 1.0 / std::max(d.norm(), 1e-300)) : 1.0;

    Evaluator eval{fun, x, d, {}, {}, 0};
    LineSearchOutcome ls;
    if (consecutive_failures < 2) {
      ls = strong_wolfe(eval, f, dphi0, a_init, opts);
    } else {
      // Backtracking steepest descent.
      d = -g;
      dphi0 = g.dot(d);
      double a = 1.0 / std::max(g.norm(), 1e-300);
      for (int b = 0; b < 80; ++b) {
        const Trial t = eval(a);
        if (t.f <= f + opts.c1 * a * dphi0) {
          ls.ok = true;
          ls.a = a;
          ls.f = t.f;
          ls.x = eval.x_trial;
          ls.g = eval.g_trial;
          break;
        }
        a *= 0.5;
      }
    }
    res.evaluations += eval.evaluations;

    if (!ls.ok) {
      ++consecutive_failures;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      if (consecutive_failures > 2) return finish(false, "line search failed");
      continue;
    }
    consecutive_failures = 0;

    RealVector s = ls.x - x;
    RealVector y = ls.g - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (static_cast<int>(s_hist.size()) == opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }

    const double f_old = f;
    x = std::move(ls.x);
    g = std::move(ls.g);
    f = ls.f;
    ++res.iterations;
    res.history.push_back(f);

    if (f <= opts.stop_below) return finish(true, "below target");
    const double scale = std::max({1.0, std::abs(f_old), std::abs(f)});
    if (std::abs(f_old - f) <= opts.ftol * scale) return finish(true, "objective tolerance");
  }
  return finish(false, "iteration limit");
}

}  // namespace qpureb
