#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "modbanach/linalg.hpp"
#include "modbanach/rng.hpp"

using namespace modbanach;

TEST(Linalg, MatrixProductAndTranspose) {
  Matrix a(2, 3, {1, 2, 3, 4, 5, 6});
  Matrix b = a.transpose();
  Matrix c = a * b;
  EXPECT_EQ(c, Matrix(2, 2, {14, 32, 32, 77}));
  auto v = a.apply(std::vector<double>{1, 0, -1});
  EXPECT_EQ(v, (std::vector<double>{-2, -2}));
}

TEST(Linalg, JacobiDiagonalInput) {
  auto e = symmetric_eigenvalues(Matrix(3, 3, {2, 0, 0, 0, -1, 0, 0, 0, 5}));
  EXPECT_EQ(e, (std::vector<double>{5, 2, -1}));
}

TEST(Linalg, JacobiTwoByTwoClosedForm) {
  // [[a, b], [b, c]] has eigenvalues (a+c)/2 +- sqrt(((a-c)/2)^2 + b^2).
  const double a = 1.3, b = -0.7, c = 0.2;
  const double mid = (a + c) / 2, rad = std::hypot((a - c) / 2, b);
  auto e = symmetric_eigenvalues(Matrix(2, 2, {a, b, b, c}));
  EXPECT_NEAR(e[0], mid + rad, 1e-14);
  EXPECT_NEAR(e[1], mid - rad, 1e-14);
}

TEST(Linalg, JacobiTraceAndFrobeniusInvariants) {
  Rng rng(11);
  for (std::size_t n : {3u, 5u, 8u}) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.gaussian();
    auto e = symmetric_eigenvalues(a);
    double trace = 0, fro = 0;
    for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
    for (double v : a.data()) fro += v * v;
    EXPECT_NEAR(std::accumulate(e.begin(), e.end(), 0.0), trace, 1e-12);
    EXPECT_NEAR(std::inner_product(e.begin(), e.end(), e.begin(), 0.0), fro, 1e-11);
    EXPECT_TRUE(std::is_sorted(e.rbegin(), e.rend()));
  }
}

TEST(Linalg, HermitianEigenvaluesOfKnownMatrix) {
  // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
  ComplexMatrix h(2, 2);
  h(0, 0) = 2;
  h(0, 1) = {0, 1};
  h(1, 0) = {0, -1};
  h(1, 1) = 2;
  auto e = hermitian_eigenvalues(h);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e[0], 3.0, 1e-13);
  EXPECT_NEAR(e[1], 1.0, 1e-13);
}

TEST(Linalg, OrthonormalColumnsDropsDependentColumns) {
  Matrix a(3, 3, {1, 2, 0, 0, 0, 1, 1, 2, 0});  // column 1 = 2 * column 0
  Matrix q = orthonormal_columns(a);
  ASSERT_EQ(q.cols(), 2u);
  Matrix g = q.transpose() * q;
  EXPECT_NEAR(g(0, 0), 1, 1e-14);
  EXPECT_NEAR(g(1, 1), 1, 1e-14);
  EXPECT_NEAR(g(0, 1), 0, 1e-14);
}
