#pragma once

// The TAVE problem A x^{m-1} - |x|^{[m-1]} = b: residual, the complementarity
// maps F and G, structural existence certificates for the shifted M-tensor
// form, and the sign-diagonal constructive solution.

#include <optional>

#include "tave/tensor.hpp"

namespace tave {

struct TaveProblem {
  Tensor A;
  Vec b;

  TaveProblem(Tensor a, Vec rhs) : A(std::move(a)), b(std::move(rhs)) {
    if (A.dim() != b.size())
      throw std::invalid_argument("TaveProblem: dim(A) != length(b)");
  }
  int order() const { return A.order(); }
  int dim() const { return A.dim(); }
};

inline Vec residual(const TaveProblem& p, const Vec& x) {
  return p.A.apply_vec(x) - abs_power(x, p.order() - 1) - p.b;
}

// F(x) = (A+I) x^{m-1} - b
inline Vec eval_F(const TaveProblem& p, const Vec& x) {
  return p.A.apply_vec(x) + sign_power(x, p.order() - 1) - p.b;
}

// G(x) = (A-I) x^{m-1} - b
inline Vec eval_G(const TaveProblem& p, const Vec& x) {
  return p.A.apply_vec(x) - sign_power(x, p.order() - 1) - p.b;
}

struct GtcpGap {
  double min_F;
  double min_G;
  double inner_product;
};

// x solves the TAVE iff min_F >= 0, min_G >= 0 and the inner product is 0
// (up to the caller's tolerance).
inline GtcpGap gtcp_gap(const TaveProblem& p, const Vec& x) {
  Vec f = eval_F(p, x);
  Vec g = eval_G(p, x);
  return {f.minCoeff(), g.minCoeff(), f.dot(g)};
}

inline bool is_z_tensor(const Tensor& a) {
  bool ok = true;
  a.for_each_entry([&](const Index& idx, double v) {
    bool diag = std::all_of(idx.begin(), idx.end(), [&](int i) { return i == idx[0]; });
    if (diag ? v < 0.0 : v > 0.0) ok = false;
  });
  return ok;
}

enum class ShiftVerdict { StrongMShiftCertified, MShiftBoundary, NotCertified };

struct StructureCertificate {
  bool is_z_tensor = false;
  std::optional<double> shift_c;
  std::optional<Tensor> B_remainder;
  std::optional<double> rho_upper;
  ShiftVerdict verdict = ShiftVerdict::NotCertified;
};

inline const char* to_string(ShiftVerdict v) {
  switch (v) {
    case ShiftVerdict::StrongMShiftCertified: return "strong-M-shift-certified";
    case ShiftVerdict::MShiftBoundary: return "M-shift-boundary";
    case ShiftVerdict::NotCertified: return "not-certified";
  }
  return "?";
}

// Sufficient certificate that A - I is a strong M-tensor, via A = cI - B
// with B >= 0 and the collapse bound on rho(B). The shift c starts at the
// max diagonal and is refined by c <- 1 + bound(cI - A), clamped so B stays
// nonnegative; the smallest certifying c encountered is kept. The collapse
// bound can overestimate rho(B), so not-certified does not refute strong-M.
inline StructureCertificate certify_strong_m_shift(const Tensor& a,
                                                   double boundary_tol = 1e-8) {
  StructureCertificate cert;
  cert.is_z_tensor = is_z_tensor(a);
  bool offdiag_ok = true;
  a.for_each_entry([&](const Index& idx, double v) {
    bool diag = std::all_of(idx.begin(), idx.end(), [&](int i) { return i == idx[0]; });
    if (!diag && v > 0.0) offdiag_ok = false;
  });
  if (!offdiag_ok) return cert;

  const double c_min = a.max_diagonal();
  auto remainder = [&](double c) { return a.shifted_diag(-c).negated(); };
  double c = c_min;
  std::optional<double> best_c;
  double best_rho = 0.0;
  for (int round = 0; round < 10; ++round) {
    Tensor b = remainder(c);
    double rho = spectral_radius_bounds(b).upper_bound;
    if (c - 1.0 > rho && (!best_c || c < *best_c)) {
      best_c = c;
      best_rho = rho;
    }
    double c_next = std::max(1.0 + rho, c_min);
    if (std::abs(c_next - c) <= 1e-12 * (1.0 + std::abs(c))) {
      c = c_next;
      break;
    }
    c = c_next;
  }
  double final_c = best_c.value_or(c);
  Tensor b = remainder(final_c);
  double rho = best_c ? best_rho : spectral_radius_bounds(b).upper_bound;
  cert.shift_c = final_c;
  cert.B_remainder = b;
  cert.rho_upper = rho;
  if (final_c - 1.0 > rho + boundary_tol * (1.0 + rho))
    cert.verdict = ShiftVerdict::StrongMShiftCertified;
  else if (std::abs(final_c - 1.0 - rho) <= boundary_tol * (1.0 + rho))
    cert.verdict = ShiftVerdict::MShiftBoundary;
  else if (final_c - 1.0 > rho)
    cert.verdict = ShiftVerdict::StrongMShiftCertified;
  return cert;
}

// Boundary-case existence hypothesis: given a candidate v >= 0, check
// (A - I) v^{m-1} >= b componentwise. No search is attempted.
inline bool shift_boundary_feasible(const TaveProblem& p, const Vec& v) {
  if (v.minCoeff() < 0.0) return false;
  Vec lhs = p.A.apply_vec(v) - sign_power(v, p.order() - 1);
  return ((lhs - p.b).array() >= 0.0).all();
}

// A = cI - B with c = 1 + (1+margin) max_i (B e^{m-1})_i, which certifies
// the strong-M shift by construction.
inline std::pair<Tensor, double> build_shifted(const Tensor& b_in, double margin) {
  if (margin <= 0.0) throw std::invalid_argument("build_shifted: margin must be > 0");
  if (!b_in.is_nonnegative())
    throw std::invalid_argument("build_shifted: B has a negative entry");
  Tensor b = b_in.layout() == Layout::Symmetric ? b_in : b_in.compressed();
  double bound = b.apply_vec(Vec::Ones(b.dim())).maxCoeff();
  double c = 1.0 + (1.0 + margin) * bound;
  Tensor a = b.negated().shifted_diag(c);
  return {a, c};
}

struct ConstructedSolution {
  Tensor A;
  Vec x_star;
  Vec b;
};

// Constructive solution: from z* >= 0 build b = (C - I) z*^{m-1}, set
// A = C D and x*_i = d_i z*_i (the odd root of d_i z*_i^{m-1}).
inline ConstructedSolution theorem34_construct(const Tensor& c, const SignDiagonal& d,
                                               const Vec& z_star) {
  if (c.order() % 2 != 0)
    throw std::invalid_argument("theorem34_construct: order must be even");
  if (z_star.minCoeff() < 0.0)
    throw std::invalid_argument("theorem34_construct: z* must be nonnegative");
  Vec b = c.apply_vec(z_star) - sign_power(z_star, c.order() - 1);
  Tensor a = sign_diag_product(c, d);
  Vec x(z_star.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = d.sign(static_cast<int>(i)) * z_star[i];
  return {std::move(a), std::move(x), std::move(b)};
}

}  // namespace tave
