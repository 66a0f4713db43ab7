#pragma once

// Fischer-Burmeister reformulation of the generalized tensor complementarity
// problem: the semismooth map H(x), merit function Psi, and selection of a
// generalized-Jacobian element Q with the degenerate-index branch.

#include <set>

#include "tave/model.hpp"

namespace tave {

enum class NcpKind { FischerBurmeister, Min };

// phi(a,b) = 0  <=>  a >= 0, b >= 0, ab = 0.
inline double phi(NcpKind kind, double a, double b) {
  if (kind == NcpKind::Min) return std::min(a, b);
  return a + b - std::hypot(a, b);
}

// Element of the FB generalized gradient. Off the origin it is the smooth
// gradient; at (0,0) the caller-supplied (1-xi, 1-sigma) with xi^2+sigma^2 <= 1.
inline std::pair<double, double> fb_subgradient(double a, double b,
                                                std::pair<double, double> fallback = {1.0, 1.0},
                                                double degen_tol = 1e-10) {
  double xi = 1.0 - fallback.first;
  double sg = 1.0 - fallback.second;
  if (xi * xi + sg * sg > 1.0 + 1e-12)
    throw std::invalid_argument("fb_subgradient: fallback outside the generalized gradient");
  double nrm = std::hypot(a, b);
  if (nrm > degen_tol) return {1.0 - a / nrm, 1.0 - b / nrm};
  return fallback;
}

// Scale-aware tolerance used to detect F_i = G_i = 0 in floating point.
inline double degeneracy_tol(double fi, double gi) {
  return 1e-10 * (1.0 + std::abs(fi) + std::abs(gi));
}

struct DegenerateSet {
  std::set<int> indices;
  Vec indicator;  // 0/1 vector z

  static DegenerateSet build(const Vec& f, const Vec& g) {
    DegenerateSet s;
    s.indicator = Vec::Zero(f.size());
    for (int i = 0; i < f.size(); ++i) {
      double tol = degeneracy_tol(f[i], g[i]);
      if (std::abs(f[i]) <= tol && std::abs(g[i]) <= tol) {
        s.indices.insert(i);
        s.indicator[i] = 1.0;
      }
    }
    return s;
  }
};

// H_i(x) = phi_FB(F_i(x), G_i(x)); zero exactly at TAVE solutions.
inline Vec eval_H(const TaveProblem& p, const Vec& x) {
  Vec f = eval_F(p, x);
  Vec g = eval_G(p, x);
  Vec h(f.size());
  for (int i = 0; i < f.size(); ++i) h[i] = phi(NcpKind::FischerBurmeister, f[i], g[i]);
  return h;
}

inline double eval_Psi(const TaveProblem& p, const Vec& x) {
  return 0.5 * eval_H(p, x).squaredNorm();
}

namespace detail {

// Jacobians of F and G under the chosen convention. The unit-tensor part is
// diag(x^{[m-2]}), times (m-1) for the true derivative.
inline void jacobians_FG(const TaveProblem& p, const Vec& x, JacobianConvention conv,
                         Mat& jf, Mat& jg) {
  Mat ja = p.A.jacobian_vec(x, conv);
  double fac = conv == JacobianConvention::TrueDerivative ? p.order() - 1 : 1.0;
  Vec di = fac * sign_power(x, p.order() - 2);
  jf = ja;
  jg = ja;
  jf.diagonal() += di;
  jg.diagonal() -= di;
}

}  // namespace detail

// One element Q of the generalized Jacobian of H:
// Q = diag(a_i) JF + diag(b_i) JG with FB weights per row; on degenerate rows
// the weights use the directional terms (grad F_i^T z, grad G_i^T z), falling
// back to (1,1) when those also vanish.
inline Mat select_Q(const TaveProblem& p, const Vec& x,
                    JacobianConvention conv = JacobianConvention::TrueDerivative) {
  Vec f = eval_F(p, x);
  Vec g = eval_G(p, x);
  Mat jf, jg;
  detail::jacobians_FG(p, x, conv, jf, jg);
  DegenerateSet lambda = DegenerateSet::build(f, g);
  const int n = p.dim();
  Vec wa(n), wb(n);
  for (int i = 0; i < n; ++i) {
    double a, b;
    if (lambda.indices.count(i)) {
      a = jf.row(i).dot(lambda.indicator);
      b = jg.row(i).dot(lambda.indicator);
    } else {
      a = f[i];
      b = g[i];
    }
    auto [va, vb] = fb_subgradient(a, b, {1.0, 1.0}, degeneracy_tol(a, b));
    wa[i] = va;
    wb[i] = vb;
  }
  return wa.asDiagonal() * jf + wb.asDiagonal() * jg;
}

// grad Psi(x) = Q^T H(x) for any Q in the generalized Jacobian.
inline Vec grad_Psi(const TaveProblem& p, const Vec& x,
                    JacobianConvention conv = JacobianConvention::TrueDerivative) {
  return select_Q(p, x, conv).transpose() * eval_H(p, x);
}

}  // namespace tave
