#include <doctest.h>

#include "tave/paper_data.hpp"
#include "tave/rng.hpp"
#include "tave/tensor.hpp"

using namespace tave;

namespace {

Vec make_vec(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

Tensor random_symmetric(int m, int n, Rng& rng) {
  Tensor t = Tensor::symmetric(m, n);
  Index idx(m, 0);
  while (true) {
    t.set(idx, rng.uniform(-1.0, 1.0));
    int k = m - 1;
    while (k >= 0 && idx[k] == n - 1) --k;
    if (k < 0) break;
    int v = idx[k] + 1;
    for (int j = k; j < m; ++j) idx[j] = v;
  }
  return t;
}

Tensor random_dense(int m, int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t = Tensor::dense(m, n);
  Index idx(m, 0);
  bool more = true;
  while (more) {
    t.set(idx, rng.uniform(lo, hi));
    more = false;
    for (int k = m - 1; k >= 0; --k) {
      if (++idx[k] < n) {
        more = true;
        break;
      }
      idx[k] = 0;
    }
  }
  return t;
}

// Central finite differences of x -> T x^{m-1}.
Mat fd_jacobian(const Tensor& t, const Vec& x) {
  double h = 1e-5 * (1.0 + x.norm());
  Mat j(t.dim(), t.dim());
  for (int c = 0; c < t.dim(); ++c) {
    Vec xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    j.col(c) = (t.apply_vec(xp) - t.apply_vec(xm)) / (2.0 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("unit tensor") {
  Tensor i42 = Tensor::unit(4, 2);
  CHECK(i42.at({0, 0, 0, 0}) == 1.0);
  CHECK(i42.at({1, 1, 1, 1}) == 1.0);
  CHECK(i42.at({0, 1, 1, 1}) == 0.0);
  CHECK(i42.layout() == Layout::Symmetric);

  Vec y = i42.apply_vec(make_vec({2, -2}));
  CHECK(y[0] == doctest::Approx(8));
  CHECK(y[1] == doctest::Approx(-8));

  Tensor i23 = Tensor::unit(2, 3);
  Mat m = i23.apply_mat(make_vec({5, 6, 7}));
  CHECK(m.isApprox(Mat::Identity(3, 3)));

  CHECK_THROWS(Tensor::unit(1, 3));
}

TEST_CASE("apply_vec") {
  SUBCASE("no-solution example tensor at (1,1)") {
    Vec y = paper::example21_problem().A.apply_vec(make_vec({1, 1}));
    CHECK(y[0] == doctest::Approx(0));
    CHECK(y[1] == doctest::Approx(-1));
  }
  SUBCASE("symmetric entry contributes with permutation multiplicity") {
    Tensor t = Tensor::symmetric(3, 2);
    t.set({0, 0, 1}, 1.0);
    Vec y = t.apply_vec(make_vec({1, 1}));
    CHECK(y[0] == doctest::Approx(2));  // (t_112 + t_121) x1 x2
    CHECK(y[1] == doctest::Approx(1));  // t_211 x1^2
  }
  SUBCASE("table5 collapse value") {
    Vec y = paper::table5_B().apply_vec(Vec::Ones(4));
    CHECK(std::abs(y.maxCoeff() - 40.2162) <= 1e-3);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS(Tensor::unit(3, 3).apply_vec(make_vec({1, 2})));
  }
}

TEST_CASE("apply_mat") {
  Tensor i42 = Tensor::unit(4, 2);
  Mat m = i42.apply_mat(make_vec({1, 2}));
  CHECK(m(0, 0) == doctest::Approx(1));
  CHECK(m(1, 1) == doctest::Approx(4));
  CHECK(m(0, 1) == doctest::Approx(0));

  SUBCASE("order 2 returns the matrix unchanged") {
    Tensor t = Tensor::dense(2, 2);
    t.set({0, 1}, 3.0);
    t.set({1, 0}, -2.0);
    Mat a = t.apply_mat(make_vec({9, 9}));
    CHECK(a(0, 1) == 3.0);
    CHECK(a(1, 0) == -2.0);
  }
  SUBCASE("section 3 tensor C at (1,1)") {
    Mat m2 = paper::section3_C().apply_mat(make_vec({1, 1}));
    CHECK(m2(0, 0) == doctest::Approx(1));
    CHECK(m2(0, 1) == doctest::Approx(1));
    CHECK(m2(1, 0) == doctest::Approx(1));
    CHECK(m2(1, 1) == doctest::Approx(1));
  }
}

TEST_CASE("jacobian_vec conventions") {
  Tensor i42 = Tensor::unit(4, 2);
  Vec x = make_vec({1, 2});
  Mat jt = i42.jacobian_vec(x, JacobianConvention::TrueDerivative);
  CHECK(jt(0, 0) == doctest::Approx(3));
  CHECK(jt(1, 1) == doctest::Approx(12));
  Mat jp = i42.jacobian_vec(x, JacobianConvention::PaperLiteral);
  CHECK(jp(0, 0) == doctest::Approx(1));
  CHECK(jp(1, 1) == doctest::Approx(4));

  SUBCASE("true derivative matches finite differences, symmetric S(4,4)") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
      Tensor t = random_symmetric(4, 4, rng);
      Vec xr(4);
      for (int i = 0; i < 4; ++i) xr[i] = rng.uniform(-2.0, 2.0);
      Mat j = t.jacobian_vec(xr, JacobianConvention::TrueDerivative);
      Mat fd = fd_jacobian(t, xr);
      CHECK((j - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
    }
  }
  SUBCASE("true derivative matches finite differences, dense non-symmetric") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      Tensor t = random_dense(4, 3, rng);
      Vec xr(3);
      for (int i = 0; i < 3; ++i) xr[i] = rng.uniform(-2.0, 2.0);
      Mat j = t.jacobian_vec(xr, JacobianConvention::TrueDerivative);
      Mat fd = fd_jacobian(t, xr);
      CHECK((j - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
    }
  }
  SUBCASE("derivative at a point with zero components") {
    Rng rng(8);
    Tensor t = random_dense(4, 3, rng);
    Vec xr = make_vec({0.0, 1.5, -0.5});
    Mat j = t.jacobian_vec(xr, JacobianConvention::TrueDerivative);
    Mat fd = fd_jacobian(t, xr);
    CHECK((j - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
  }
}

TEST_CASE("symmetric identity: true jacobian = (m-1) apply_mat") {
  Rng rng(11);
  for (int m : {3, 4, 6}) {
    Tensor t = random_symmetric(m, 3, rng);
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-1.5, 1.5);
    Mat j = t.jacobian_vec(x, JacobianConvention::TrueDerivative);
    Mat am = (m - 1) * t.apply_mat(x);
    CHECK((j - am).norm() <= 1e-12 * (1.0 + am.norm()));
    // and the dense expansion agrees with the compressed path
    Mat jd = t.expanded().jacobian_vec(x, JacobianConvention::TrueDerivative);
    CHECK((jd - j).norm() <= 1e-12 * (1.0 + j.norm()));
  }
}

TEST_CASE("symmetric-compressed vs dense expansion agree") {
  Rng rng(12);
  for (int m : {3, 4, 6}) {
    for (int n : {2, 3, 5}) {
      Tensor t = random_symmetric(m, n, rng);
      Tensor d = t.expanded();
      CHECK(d.is_symmetric());
      CHECK(d.compressed() == t);
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
      Vec ys = t.apply_vec(x);
      Vec yd = d.apply_vec(x);
      CHECK((ys - yd).norm() <= 1e-12 * (1.0 + yd.norm()));
      Mat ms = t.apply_mat(x);
      Mat md = d.apply_mat(x);
      CHECK((ms - md).norm() <= 1e-12 * (1.0 + md.norm()));
    }
  }
}

TEST_CASE("sign powers") {
  Vec x = make_vec({2, -2});
  Vec sp = sign_power(x, 3);
  Vec ap = abs_power(x, 3);
  CHECK(sp[0] == 8);
  CHECK(sp[1] == -8);
  CHECK(ap[0] == 8);
  CHECK(ap[1] == 8);
  CHECK(sign_power(Vec::Zero(3), 5).isZero());
  CHECK(abs_power(Vec::Zero(3), 5).isZero());

  // |x|^{[m-1]} equals the sign-diagonal image of x^{[m-1]} for even m
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = rng.uniform(-3.0, 3.0);
    Vec lhs = abs_power(v, 3);
    for (int i = 0; i < 4; ++i) {
      double d = v[i] >= 0 ? 1.0 : -1.0;
      CHECK(lhs[i] == d * sign_power(v, 3)[i]);
    }
  }
}

TEST_CASE("sign_diag_product") {
  SUBCASE("section 3 example") {
    Tensor a = sign_diag_product(paper::section3_C(), SignDiagonal({1, -1}));
    CHECK(a.at({0, 0, 0, 0}) == 1.0);
    CHECK(a.at({1, 0, 0, 0}) == 1.0);
    CHECK(a.at({0, 1, 1, 1}) == -1.0);
    CHECK(a.at({1, 1, 1, 1}) == -1.0);
    CHECK(a.at({0, 0, 1, 1}) == 0.0);
  }
  SUBCASE("all-plus signs leave the tensor unchanged") {
    Rng rng(5);
    Tensor c = random_dense(4, 3, rng);
    Tensor a = sign_diag_product(c, SignDiagonal::all_plus(3));
    CHECK(a == c);
  }
  SUBCASE("odd order rejected") {
    Rng rng(5);
    CHECK_THROWS(sign_diag_product(random_dense(3, 2, rng), SignDiagonal::all_plus(2)));
  }
  SUBCASE("product identity (CD) x^{m-1} = C (D x^{m-1})") {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
      Tensor c = random_dense(4, 3, rng);
      std::vector<int> s(3);
      for (int i = 0; i < 3; ++i) s[i] = rng.sign();
      SignDiagonal d(s);
      Vec x(3);
      for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-2.0, 2.0);
      Vec lhs = sign_diag_product(c, d).apply_vec(x);
      // u = (D x^{m-1})^{[1/(m-1)]}: odd root keeps the sign
      Vec u(3);
      for (int i = 0; i < 3; ++i) u[i] = s[i] * x[i];
      Vec rhs = c.apply_vec(u);
      CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }
  }
}

TEST_CASE("spectral_radius_bounds") {
  SUBCASE("unit tensor") {
    SpectralEstimate e = spectral_radius_bounds(Tensor::unit(4, 2));
    CHECK(e.upper_bound == doctest::Approx(1));
    CHECK(e.power_estimate.value() == doctest::Approx(1));
    CHECK(e.converged);
  }
  SUBCASE("table5") {
    SpectralEstimate e = spectral_radius_bounds(paper::table5_B());
    CHECK(std::abs(e.upper_bound - 40.2162) <= 1e-3);
    CHECK(e.power_estimate.value() <= e.upper_bound + 1e-10);
  }
  SUBCASE("zero tensor") {
    SpectralEstimate e = spectral_radius_bounds(Tensor::dense(4, 3));
    CHECK(e.upper_bound == 0.0);
    CHECK(e.power_estimate.value() == 0.0);
  }
  SUBCASE("negative entry rejected") {
    Tensor t = Tensor::dense(4, 2);
    t.set({0, 1, 0, 1}, -0.5);
    CHECK_THROWS(spectral_radius_bounds(t));
  }
  SUBCASE("estimate never exceeds the bound") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      Tensor t = random_dense(4, 4, rng, 0.0, 1.0);
      SpectralEstimate e = spectral_radius_bounds(t);
      CHECK(e.power_estimate.value() <= e.upper_bound + 1e-8);
    }
  }
}

TEST_CASE("dense is_symmetric detection") {
  Tensor t = Tensor::dense(3, 2);
  t.set({0, 0, 1}, 2.0);
  CHECK_FALSE(t.is_symmetric());
  t.set({0, 1, 0}, 2.0);
  t.set({1, 0, 0}, 2.0);
  CHECK(t.is_symmetric());
}
