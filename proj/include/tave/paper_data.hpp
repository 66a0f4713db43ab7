#pragma once

// Built-in reference instances and golden tables used by verify-paper and the
// acceptance suite.

#include "tave/model.hpp"

namespace tave::paper {

// Symmetric nonnegative B in S(4,4); one value per sorted index tuple,
// applying to every permutation.
inline Tensor table5_B() {
  struct E { int i, j, k, l; double v; };
  static const E entries[] = {
      {1,1,1,1,0.8147},{1,1,1,2,0.9058},{1,1,1,3,0.1270},{1,1,1,4,0.9134},{1,1,2,2,0.6324},
      {1,1,2,3,0.0975},{1,1,2,4,0.2785},{1,1,3,3,0.5469},{1,1,3,4,0.9575},{1,1,4,4,0.9649},
      {1,2,2,2,0.1576},{1,2,2,3,0.9706},{1,2,2,4,0.9572},{1,2,3,3,0.4854},{1,2,3,4,0.8003},
      {1,2,4,4,0.1419},{1,3,3,3,0.4218},{1,3,3,4,0.9157},{1,3,4,4,0.7922},{1,4,4,4,0.9595},
      {2,2,2,2,0.6557},{2,2,2,3,0.0357},{2,2,2,4,0.8491},{2,2,3,3,0.9340},{2,2,3,4,0.6787},
      {2,2,4,4,0.7577},{2,3,3,3,0.7431},{2,3,3,4,0.3922},{2,3,4,4,0.6555},{2,4,4,4,0.1712},
      {3,3,3,3,0.7060},{3,3,3,4,0.0318},{3,3,4,4,0.2769},{3,4,4,4,0.0462},{4,4,4,4,0.0971}};
  Tensor t = Tensor::symmetric(4, 4);
  for (const E& e : entries) t.set({e.i - 1, e.j - 1, e.k - 1, e.l - 1}, e.v);
  return t;
}

// The shifted strong-M instance A = cI - B printed alongside Table 5.
inline Tensor table6_A() {
  Tensor a = table5_B().negated();
  static const double diag[] = {40.8037, 40.9627, 40.9124, 41.5213};
  for (int i = 0; i < 4; ++i) a.set({i, i, i, i}, diag[i]);
  return a;
}

inline constexpr double table6_c = 41.6184;  // = a_1111 + b_1111

struct SolutionRow {
  Vec x;
  Vec b;
};

// Third-experiment (solution, rhs) pairs for the table6 tensor.
inline std::vector<SolutionRow> table7_rows() {
  static const double data[10][8] = {
      {0.8100,0.7881,0.7786,0.8003, 1.4193,0.2916,0.1978,1.5877},
      {0.7285,0.7212,0.7156,0.7098, 0.8045,0.6966,0.8351,0.2437},
      {0.7219,0.7313,0.7230,0.7098, 0.2157,1.1658,1.1480,0.1049},
      {0.8453,0.8603,0.8294,0.8276, 0.7223,2.5855,0.6669,0.1873},
      {0.8445,0.8584,0.8321,0.8507, 0.0825,1.9330,0.4390,1.7947},
      {0.7104,0.7055,0.6849,0.6957, 0.8404,0.8880,0.1001,0.5445},
      {0.6775,0.6771,0.6677,0.6750, 0.3035,0.6003,0.4900,0.7394},
      {0.9021,0.8787,0.8894,0.8805, 1.7119,0.1941,2.1384,0.8396},
      {0.8104,0.8007,0.7908,0.7841, 1.3546,1.0722,0.9610,0.1240},
      {0.8957,0.8939,0.8661,0.8808, 1.4367,1.9609,0.1977,1.2078}};
  std::vector<SolutionRow> rows;
  for (const auto& r : data) {
    Vec x(4), b(4);
    for (int i = 0; i < 4; ++i) { x[i] = r[i]; b[i] = r[4 + i]; }
    rows.push_back({x, b});
  }
  return rows;
}

inline Vec table8_b() {
  Vec b(4);
  b << -1, 1, 1, 1;
  return b;
}

// The three solutions reported for b = (-1,1,1,1); the last is the positive one.
inline std::vector<Vec> table8_solutions() {
  static const double data[3][4] = {
      {0.0800, 0.3629, 0.3543, 0.3505},
      {-0.2593, 0.2948, 0.2891, 0.2903},
      {0.6258, 0.6600, 0.6522, 0.6537}};
  std::vector<Vec> xs;
  for (const auto& r : data) {
    Vec x(4);
    for (int i = 0; i < 4; ++i) x[i] = r[i];
    xs.push_back(x);
  }
  return xs;
}

// The z* vector of the second experiment (m = 4, n = 10).
inline Vec experiment2_z_star() {
  Vec z(10);
  z << 0.1040, 0.7455, 0.7363, 0.5619, 0.1842, 0.5972, 0.2999, 0.1341, 0.2126, 0.8949;
  return z;
}

// Worked construction: C with c_1111 = c_1222 = c_2111 = c_2222 = 1,
// D = diag(1,-1), b = (8,8); solution x* = (2,-2).
inline Tensor section3_C() {
  Tensor c = Tensor::dense(4, 2);
  c.set({0, 0, 0, 0}, 1.0);
  c.set({0, 1, 1, 1}, 1.0);
  c.set({1, 0, 0, 0}, 1.0);
  c.set({1, 1, 1, 1}, 1.0);
  return c;
}

inline TaveProblem section3_problem() {
  Tensor a = sign_diag_product(section3_C(), SignDiagonal({1, -1}));
  Vec b(2);
  b << 8, 8;
  return TaveProblem(std::move(a), std::move(b));
}

inline Vec section3_solution() {
  Vec x(2);
  x << 2, -2;
  return x;
}

// The no-solution instance, taken from the displayed system
// x1^3 - x2^3 - |x1|^3 = 1, -2 x1^3 + x2^3 - |x2|^3 = 2 (the entry list
// printed next to it is inconsistent with the no-solution claim).
inline TaveProblem example21_problem() {
  Tensor a = Tensor::dense(4, 2);
  a.set({0, 0, 0, 0}, 1.0);
  a.set({0, 1, 1, 1}, -1.0);
  a.set({1, 0, 0, 0}, -2.0);
  a.set({1, 1, 1, 1}, 1.0);
  Vec b(2);
  b << 1, 2;
  return TaveProblem(std::move(a), std::move(b));
}

}  // namespace tave::paper
