#pragma once

// Inexact Levenberg-Marquardt iteration on H(x) = 0 with a descent safeguard
// and Armijo backtracking, plus multi-start orchestration with solution
// clustering.

#include <chrono>
#include <functional>

#include "tave/ncp.hpp"

namespace tave {

enum class SolveStatus { Converged, MaxIter, StalledLineSearch, StationaryNonzero };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max-iter";
    case SolveStatus::StalledLineSearch: return "stalled-line-search";
    case SolveStatus::StationaryNonzero: return "stationary-nonzero";
  }
  return "?";
}

enum class DirectionSource { Lm, GradientFallback };

struct SolverConfig {
  double epsilon = 1e-6;      // stop tolerance on ||H||
  double rho_descent = 1e-10; // descent-test coefficient
  double p = 2.1;             // descent-test exponent, > 2
  double beta = 1e-4;         // Armijo parameter, in (0, 1/2)
  int max_iter = 300;
  int max_backtracks = 50;
  bool inexact = false;
  JacobianConvention convention = JacobianConvention::TrueDerivative;
  // LM parameter schedule; bounded, constant 0.3 by default.
  std::function<double(int)> mu = [](int) { return 0.3; };
  // Inexactness schedule, in (0,1) with alpha_k -> 0.
  std::function<double(int)> alpha = [](int k) { return std::min(0.5, 1.0 / (k + 2)); };
  // Gradient-stationarity exit so unsolvable instances terminate informatively.
  double stationary_tol = 1e-12;
  bool record_iterates = false;

  void validate() const {
    if (epsilon < 0) throw std::invalid_argument("SolverConfig: epsilon must be >= 0");
    if (!(beta > 0 && beta < 0.5))
      throw std::invalid_argument("SolverConfig: beta must be in (0, 1/2)");
    if (p <= 2) throw std::invalid_argument("SolverConfig: p must be > 2");
    if (rho_descent <= 0) throw std::invalid_argument("SolverConfig: rho must be > 0");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  }
};

struct IterRecord {
  int k = 0;
  double norm_H = 0.0;
  double norm_gradPsi = 0.0;
  double step = 0.0;                              // t_k; 0 on the terminal record
  DirectionSource source = DirectionSource::Lm;   // meaningful when step > 0
  double r_norm = 0.0;                            // inexact linear residual
  std::optional<Vec> x;
};

struct SolverReport {
  SolveStatus status = SolveStatus::MaxIter;
  Vec x_final;
  int iterations = 0;
  std::vector<IterRecord> trace;  // length iterations + 1
  double wall_time_sec = 0.0;
};

// Solve (Q^T Q + mu I) d = -Q^T H. Exact mode factorizes; mu = 0 falls back
// to the least-squares solution of Q d = -H. Inexact mode runs CG until the
// linear residual satisfies ||r|| <= alpha ||gradPsi||.
inline std::pair<Vec, double> lm_direction(const Mat& q, const Vec& h, const Vec& grad_psi,
                                           double mu, bool inexact, double alpha) {
  if (mu < 0) throw std::invalid_argument("lm_direction: mu must be >= 0");
  const int n = static_cast<int>(q.cols());
  if (h.size() != q.rows() || grad_psi.size() != n)
    throw std::invalid_argument("lm_direction: dimension mismatch");
  Vec rhs = -(q.transpose() * h);

  if (!inexact) {
    if (mu == 0.0) {
      Vec d = q.colPivHouseholderQr().solve(-h);
      return {d, 0.0};
    }
    Mat lhs = q.transpose() * q;
    lhs.diagonal().array() += mu;
    Eigen::LLT<Mat> llt(lhs);
    if (llt.info() != Eigen::Success) {
      lhs.diagonal().array() += 1e-14;  // mu > 0 makes this SPD; jitter covers roundoff
      llt.compute(lhs);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("lm_direction: SPD factorization failed");
    }
    return {llt.solve(rhs), 0.0};
  }

  // Conjugate gradients on the SPD system, absolute residual stop.
  Mat lhs = q.transpose() * q;
  lhs.diagonal().array() += mu;
  double target = alpha * grad_psi.norm();
  Vec d = Vec::Zero(n);
  Vec r = rhs;
  Vec pdir = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < 10 * n && std::sqrt(rr) > target; ++it) {
    Vec ap = lhs * pdir;
    double denom = pdir.dot(ap);
    if (denom <= 0) break;
    double step = rr / denom;
    d += step * pdir;
    r -= step * ap;
    double rr_new = r.squaredNorm();
    pdir = r + (rr_new / rr) * pdir;
    rr = rr_new;
  }
  return {d, std::sqrt(rr)};
}

// Keep d if grad^T d <= -rho ||d||^p, otherwise take the steepest descent
// direction. d = 0 fails the test whenever the gradient is nonzero.
inline std::pair<Vec, DirectionSource> safeguard_direction(const Vec& d, const Vec& grad_psi,
                                                           double rho_descent, double p) {
  double dn = d.norm();
  if (dn > 0.0 && grad_psi.dot(d) <= -rho_descent * std::pow(dn, p))
    return {d, DirectionSource::Lm};
  return {-grad_psi, DirectionSource::GradientFallback};
}

struct ArmijoResult {
  bool ok = false;
  double t = 0.0;
  int backtracks = 0;
};

// Smallest i >= 0 with Psi(x + 2^{-i} d) <= Psi(x) + beta 2^{-i} grad^T d.
inline ArmijoResult armijo_search(const TaveProblem& p, const Vec& x, const Vec& d,
                                  double psi_x, double grad_dot_d, double beta,
                                  int max_backtracks) {
  if (grad_dot_d >= 0.0)
    throw std::invalid_argument("armijo_search: non-descent direction");
  double t = 1.0;
  for (int i = 0; i <= max_backtracks; ++i) {
    if (eval_Psi(p, x + t * d) <= psi_x + beta * t * grad_dot_d) return {true, t, i};
    t *= 0.5;
  }
  return {false, 0.0, max_backtracks};
}

inline SolverReport solve(const TaveProblem& prob, const Vec& x0, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (x0.size() != prob.dim()) throw std::invalid_argument("solve: x0 dimension mismatch");
  auto t_start = std::chrono::steady_clock::now();

  SolverReport rep;
  Vec x = x0;
  for (int k = 0;; ++k) {
    Vec h = eval_H(prob, x);
    double norm_h = h.norm();
    Mat q = select_Q(prob, x, cfg.convention);
    Vec grad = q.transpose() * h;

    IterRecord rec;
    rec.k = k;
    rec.norm_H = norm_h;
    rec.norm_gradPsi = grad.norm();
    if (cfg.record_iterates) rec.x = x;
    rep.trace.push_back(rec);

    if (norm_h <= cfg.epsilon) {
      rep.status = SolveStatus::Converged;
      break;
    }
    if (grad.norm() <= cfg.stationary_tol) {
      rep.status = SolveStatus::StationaryNonzero;
      break;
    }
    if (k >= cfg.max_iter) {
      rep.status = SolveStatus::MaxIter;
      break;
    }

    auto [d_raw, r_norm] =
        lm_direction(q, h, grad, cfg.mu(k), cfg.inexact, cfg.alpha(k));
    auto [d, source] = safeguard_direction(d_raw, grad, cfg.rho_descent, cfg.p);
    double gd = grad.dot(d);
    ArmijoResult ls = armijo_search(prob, x, d, 0.5 * norm_h * norm_h, gd, cfg.beta,
                                    cfg.max_backtracks);
    if (!ls.ok) {
      rep.status = SolveStatus::StalledLineSearch;
      break;
    }
    rep.trace.back().step = ls.t;
    rep.trace.back().source = source;
    rep.trace.back().r_norm = r_norm;
    x += ls.t * d;
  }
  rep.x_final = x;
  rep.iterations = static_cast<int>(rep.trace.size()) - 1;
  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

struct SolutionCluster {
  Vec representative;
  int hits = 0;
  double best_norm_H = 0.0;
};

struct MultiStartResult {
  std::vector<SolutionCluster> clusters;
  int attempts = 0;
  int converged = 0;
};

// Run solve per start, keep converged results, merge solutions within
// l-infinity distance `cluster_tol`. Deterministic in the start order.
inline MultiStartResult multi_start(const TaveProblem& prob, const std::vector<Vec>& starts,
                                    const SolverConfig& cfg = {}, double cluster_tol = 1e-4) {
  MultiStartResult res;
  res.attempts = static_cast<int>(starts.size());
  for (const Vec& x0 : starts) {
    SolverReport rep = solve(prob, x0, cfg);
    if (rep.status != SolveStatus::Converged) continue;
    ++res.converged;
    double norm_h = rep.trace.back().norm_H;
    bool merged = false;
    for (auto& c : res.clusters) {
      if ((c.representative - rep.x_final).lpNorm<Eigen::Infinity>() <= cluster_tol) {
        ++c.hits;
        if (norm_h < c.best_norm_H) {
          c.representative = rep.x_final;
          c.best_norm_H = norm_h;
        }
        merged = true;
        break;
      }
    }
    if (!merged) res.clusters.push_back({rep.x_final, 1, norm_h});
  }
  return res;
}

}  // namespace tave
