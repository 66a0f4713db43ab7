#pragma once

// Dense and symmetric-compressed storage for order-m real tensors over R^n,
// with the tensor-vector products T x^{m-1}, T x^{m-2}, Jacobians, the unit
// tensor, sign-diagonal scaling and a spectral-radius estimate for
// nonnegative tensors.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tave {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Multi-index, 0-based internally (the JSON interface is 1-based).
using Index = std::vector<int>;

enum class Layout { Dense, Symmetric };

// Which Jacobian of x -> T x^{m-1} to report. TrueDerivative is the chain
// rule result; PaperLiteral is T x^{m-2} without the (m-1) factor.
enum class JacobianConvention { TrueDerivative, PaperLiteral };

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Number of distinct permutations of a multiset given by element counts.
inline double multiset_perms(const std::vector<int>& counts, int total) {
  double p = factorial(total);
  for (int c : counts) p /= factorial(c);
  return p;
}

}  // namespace detail

// Diagonal tensor with +/-1 diagonal entries.
class SignDiagonal {
 public:
  explicit SignDiagonal(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_)
      if (s != 1 && s != -1)
        throw std::invalid_argument("SignDiagonal: entries must be +1 or -1");
  }
  static SignDiagonal all_plus(int n) { return SignDiagonal(std::vector<int>(n, 1)); }
  // Bits of `mask` select the sign per coordinate (bit set -> +1).
  static SignDiagonal from_mask(int n, std::uint64_t mask) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? 1 : -1;
    return SignDiagonal(std::move(s));
  }
  int dim() const { return static_cast<int>(signs_.size()); }
  int sign(int i) const { return signs_[i]; }
  const std::vector<int>& signs() const { return signs_; }
  Vec as_vector() const {
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = signs_[i];
    return v;
  }

 private:
  std::vector<int> signs_;
};

struct SpectralEstimate {
  double upper_bound = 0.0;  // max_i (B e^{m-1})_i, certified bound on rho(B)
  std::optional<double> power_estimate;
  int iterations_used = 0;
  bool converged = false;
};

class Tensor {
 public:
  Tensor(int order, int dim, Layout layout)
      : order_(order), dim_(dim), layout_(layout) {
    if (order < 2) throw std::invalid_argument("Tensor: order must be >= 2");
    if (dim < 1) throw std::invalid_argument("Tensor: dim must be >= 1");
    if (layout == Layout::Dense) {
      std::size_t size = 1;
      for (int k = 0; k < order; ++k) size *= static_cast<std::size_t>(dim);
      dense_.assign(size, 0.0);
    }
  }

  static Tensor dense(int order, int dim) { return Tensor(order, dim, Layout::Dense); }
  static Tensor symmetric(int order, int dim) { return Tensor(order, dim, Layout::Symmetric); }

  // Unit tensor: ones exactly on the diagonal (i,...,i).
  static Tensor unit(int order, int dim) {
    Tensor t = symmetric(order, dim);
    for (int i = 0; i < dim; ++i) t.set(Index(order, i), 1.0);
    return t;
  }

  int order() const { return order_; }
  int dim() const { return dim_; }
  Layout layout() const { return layout_; }

  double at(Index idx) const {
    check_index(idx);
    if (layout_ == Layout::Dense) return dense_[flat(idx)];
    std::sort(idx.begin(), idx.end());
    auto it = sym_.find(idx);
    return it == sym_.end() ? 0.0 : it->second;
  }

  void set(Index idx, double value) {
    check_index(idx);
    if (layout_ == Layout::Dense) {
      dense_[flat(idx)] = value;
    } else {
      std::sort(idx.begin(), idx.end());
      if (value == 0.0)
        sym_.erase(idx);
      else
        sym_[idx] = value;
    }
  }

  const std::map<Index, double>& entries() const {
    if (layout_ != Layout::Symmetric)
      throw std::logic_error("entries(): symmetric layout only");
    return sym_;
  }

  // T x^{m-1}: contract the trailing m-1 modes with x.
  Vec apply_vec(const Vec& x) const {
    check_vec(x);
    if (layout_ == Layout::Dense) return dense_apply(x, 1);
    Vec y = Vec::Zero(dim_);
    for (const auto& [key, value] : sym_) sym_apply_vec_entry(key, value, x, y);
    return y;
  }

  // T x^{m-2} as the n x n matrix of Theorem-style mode-(1,2) slices.
  Mat apply_mat(const Vec& x) const {
    check_vec(x);
    if (order_ == 2) return as_matrix();
    if (layout_ == Layout::Dense) {
      Vec flat2 = dense_apply(x, 2);
      return Eigen::Map<const Mat>(flat2.data(), dim_, dim_).transpose();
    }
    Mat M = Mat::Zero(dim_, dim_);
    for (const auto& [key, value] : sym_) sym_apply_mat_entry(key, value, x, M);
    return M;
  }

  // Jacobian of x -> apply_vec(x).
  Mat jacobian_vec(const Vec& x, JacobianConvention conv) const {
    check_vec(x);
    if (conv == JacobianConvention::PaperLiteral) return apply_mat(x);
    if (order_ == 2) return as_matrix();
    // A symmetric tensor's derivative collapses to (m-1) T x^{m-2}.
    if (layout_ == Layout::Symmetric) return (order_ - 1) * apply_mat(x);
    return dense_jacobian(x);
  }

  bool is_symmetric(double tol = 0.0) const {
    if (layout_ == Layout::Symmetric) return true;
    Index idx(order_, 0);
    do {
      Index sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      if (std::abs(dense_[flat(idx)] - dense_[flat(sorted)]) > tol) return false;
    } while (next_index(idx));
    return true;
  }

  Tensor expanded() const {
    if (layout_ == Layout::Dense) return *this;
    Tensor t = dense(order_, dim_);
    Index idx(order_, 0);
    do {
      Index sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      auto it = sym_.find(sorted);
      if (it != sym_.end()) t.dense_[t.flat(idx)] = it->second;
    } while (next_index(idx));
    return t;
  }

  Tensor compressed(double tol = 0.0) const {
    if (layout_ == Layout::Symmetric) return *this;
    if (!is_symmetric(tol))
      throw std::invalid_argument("compressed(): tensor is not symmetric");
    Tensor t = symmetric(order_, dim_);
    Index idx(order_, 0);
    do {
      if (std::is_sorted(idx.begin(), idx.end())) {
        double v = dense_[flat(idx)];
        if (v != 0.0) t.sym_[idx] = v;
      }
    } while (next_index(idx));
    return t;
  }

  double max_diagonal() const {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim_; ++i) m = std::max(m, at(Index(order_, i)));
    return m;
  }

  // Visit every structurally distinct entry: (sorted-or-dense index, value).
  template <typename F>
  void for_each_entry(F&& f) const {
    if (layout_ == Layout::Symmetric) {
      for (const auto& [key, value] : sym_) f(key, value);
    } else {
      Index idx(order_, 0);
      do {
        f(idx, dense_[flat(idx)]);
      } while (next_index(idx));
    }
  }

  bool is_nonnegative() const {
    bool ok = true;
    for_each_entry([&](const Index&, double v) { ok = ok && v >= 0.0; });
    return ok;
  }

  Tensor negated() const { return scaled(-1.0); }

  Tensor scaled(double s) const {
    Tensor t = *this;
    if (layout_ == Layout::Dense)
      for (double& v : t.dense_) v *= s;
    else
      for (auto& [key, value] : t.sym_) value *= s;
    return t;
  }

  // this + s * unit (diagonal shift), preserving the layout.
  Tensor shifted_diag(double s) const {
    Tensor t = *this;
    for (int i = 0; i < dim_; ++i) {
      Index d(order_, i);
      t.set(d, t.at(d) + s);
    }
    return t;
  }

  bool operator==(const Tensor& o) const {
    if (order_ != o.order_ || dim_ != o.dim_) return false;
    bool eq = true;
    Index idx(order_, 0);
    do {
      Index i = idx;
      if (at(i) != o.at(i)) {
        eq = false;
        break;
      }
    } while (next_index(idx));
    return eq;
  }

 private:
  int order_, dim_;
  Layout layout_;
  std::vector<double> dense_;
  std::map<Index, double> sym_;

  void check_index(const Index& idx) const {
    if (static_cast<int>(idx.size()) != order_)
      throw std::invalid_argument("Tensor: index arity mismatch");
    for (int i : idx)
      if (i < 0 || i >= dim_) throw std::out_of_range("Tensor: index out of range");
  }

  void check_vec(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("Tensor: vector dimension mismatch");
  }

  std::size_t flat(const Index& idx) const {
    std::size_t f = 0;
    for (int k = 0; k < order_; ++k) f = f * dim_ + idx[k];
    return f;
  }

  bool next_index(Index& idx) const {
    for (int k = order_ - 1; k >= 0; --k) {
      if (++idx[k] < dim_) return true;
      idx[k] = 0;
    }
    return false;
  }

  Mat as_matrix() const {
    Mat M(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) M(i, j) = at({i, j});
    return M;
  }

  // Contract trailing modes with x until `keep` modes remain; returns the
  // flattened result of size dim^keep.
  Vec dense_apply(const Vec& x, int keep) const {
    std::size_t size = dense_.size();
    Vec cur = Eigen::Map<const Vec>(dense_.data(), static_cast<Eigen::Index>(size));
    for (int step = order_; step > keep; --step) {
      std::size_t rows = size / dim_;
      Eigen::Map<const Mat> view(cur.data(), dim_, static_cast<Eigen::Index>(rows));
      Vec next = view.transpose() * x;  // row-major trailing index
      cur = next;
      size = rows;
    }
    return cur;
  }

  Mat dense_jacobian(const Vec& x) const {
    Mat J = Mat::Zero(dim_, dim_);
    Index tail(order_ - 1, 0);
    std::vector<double> xt(order_ - 1);
    bool more = true;
    while (more) {
      int zeros = 0;
      double prod_nz = 1.0;
      for (int k = 0; k < order_ - 1; ++k) {
        xt[k] = x[tail[k]];
        if (xt[k] == 0.0)
          ++zeros;
        else
          prod_nz *= xt[k];
      }
      if (zeros <= 1) {
        for (int i = 0; i < dim_; ++i) {
          Index full(order_);
          full[0] = i;
          std::copy(tail.begin(), tail.end(), full.begin() + 1);
          double t = dense_[flat(full)];
          if (t == 0.0) continue;
          for (int k = 0; k < order_ - 1; ++k) {
            double dfac;
            if (zeros == 0)
              dfac = prod_nz / xt[k];
            else
              dfac = (xt[k] == 0.0) ? prod_nz : 0.0;
            J(i, tail[k]) += t * dfac;
          }
        }
      }
      more = false;
      for (int k = order_ - 2; k >= 0; --k) {
        if (++tail[k] < dim_) {
          more = true;
          break;
        }
        tail[k] = 0;
      }
    }
    return J;
  }

  // Contribution of one stored sorted entry to T x^{m-1}: every permutation
  // with a given leading index carries the same tail product.
  void sym_apply_vec_entry(const Index& key, double value, const Vec& x, Vec& y) const {
    int prev = -1;
    for (std::size_t p = 0; p < key.size(); ++p) {
      int i = key[p];
      if (i == prev) continue;
      prev = i;
      std::vector<int> counts;
      std::vector<int> elems;
      tail_counts(key, i, elems, counts);
      double mult = detail::multiset_perms(counts, order_ - 1);
      double prod = 1.0;
      for (std::size_t q = 0; q < elems.size(); ++q)
        prod *= std::pow(x[elems[q]], counts[q]);
      y[i] += value * mult * prod;
    }
  }

  void sym_apply_mat_entry(const Index& key, double value, const Vec& x, Mat& M) const {
    int prev_i = -1;
    for (std::size_t p = 0; p < key.size(); ++p) {
      int i = key[p];
      if (i == prev_i) continue;
      prev_i = i;
      std::vector<int> elems, counts;
      tail_counts(key, i, elems, counts);
      // now fix the second slot to each distinct remaining element
      for (std::size_t q = 0; q < elems.size(); ++q) {
        if (counts[q] == 0) continue;
        int j = elems[q];
        std::vector<int> c2 = counts;
        --c2[q];
        double mult = detail::multiset_perms(c2, order_ - 2);
        double prod = 1.0;
        for (std::size_t r = 0; r < elems.size(); ++r)
          prod *= std::pow(x[elems[r]], c2[r]);
        M(i, j) += value * mult * prod;
      }
    }
  }

  // Element/count decomposition of `key` with one occurrence of `drop` removed.
  static void tail_counts(const Index& key, int drop, std::vector<int>& elems,
                          std::vector<int>& counts) {
    elems.clear();
    counts.clear();
    bool dropped = false;
    for (int v : key) {
      if (!dropped && v == drop) {
        dropped = true;
        continue;
      }
      if (!elems.empty() && elems.back() == v)
        ++counts.back();
      else {
        elems.push_back(v);
        counts.push_back(1);
      }
    }
  }
};

// Componentwise x_i^k.
inline Vec sign_power(const Vec& x, int k) {
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = std::pow(x[i], k);
  return y;
}

// Componentwise |x_i|^k.
inline Vec abs_power(const Vec& x, int k) {
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = std::pow(std::abs(x[i]), k);
  return y;
}

// Product C * D of Definition-3.1 type: mode-2..m scaling by the +/-1 signs.
// Requires even order; d^{1/(m-1)} is d itself since m-1 is odd.
inline Tensor sign_diag_product(const Tensor& c, const SignDiagonal& d) {
  if (c.order() % 2 != 0)
    throw std::invalid_argument("sign_diag_product: order must be even");
  if (c.dim() != d.dim())
    throw std::invalid_argument("sign_diag_product: dimension mismatch");
  const Tensor src = c.layout() == Layout::Dense ? c : c.expanded();
  Tensor a = Tensor::dense(c.order(), c.dim());
  Index idx(c.order(), 0);
  bool more = true;
  while (more) {
    double s = 1.0;
    for (int k = 1; k < c.order(); ++k) s *= d.sign(idx[k]);
    double v = src.at(idx);
    if (v != 0.0) a.set(idx, v * s);
    more = false;
    for (int k = c.order() - 1; k >= 0; --k) {
      if (++idx[k] < c.dim()) {
        more = true;
        break;
      }
      idx[k] = 0;
    }
  }
  return a;
}

// Collapse bound max_i (B e^{m-1})_i plus a power-iteration estimate of
// rho(B) for entrywise-nonnegative B. The bound is the certified quantity;
// the estimate is heuristic (irreducibility is not checked).
inline SpectralEstimate spectral_radius_bounds(const Tensor& b, int max_iters = 200,
                                               double tol = 1e-10) {
  if (!b.is_nonnegative())
    throw std::invalid_argument("spectral_radius_bounds: tensor has a negative entry");
  SpectralEstimate est;
  const int n = b.dim();
  const int m = b.order();
  Vec ones = Vec::Ones(n);
  est.upper_bound = b.apply_vec(ones).maxCoeff();
  if (est.upper_bound == 0.0) {
    est.power_estimate = 0.0;
    est.converged = true;
    return est;
  }
  Vec x = ones;
  double lo = 0.0, hi = est.upper_bound;
  for (int it = 0; it < max_iters; ++it) {
    est.iterations_used = it + 1;
    Vec y = b.apply_vec(x);
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (int i = 0; i < n; ++i) {
      double xi = std::pow(x[i], m - 1);
      if (xi > 1e-300) {
        double r = y[i] / xi;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    if (!std::isfinite(lo)) {  // iterate collapsed
      lo = hi = 0.0;
      break;
    }
    if (hi - lo <= tol * std::max(1.0, hi)) {
      est.converged = true;
      break;
    }
    Vec next(n);
    for (int i = 0; i < n; ++i) next[i] = std::pow(y[i], 1.0 / (m - 1));
    double mx = next.maxCoeff();
    if (mx <= 0.0) {
      lo = hi = 0.0;
      break;
    }
    x = next / mx;
  }
  est.power_estimate = hi;
  return est;
}

}  // namespace tave
