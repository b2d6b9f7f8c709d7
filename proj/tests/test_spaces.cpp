#include <gtest/gtest.h>

#include <cmath>

#include "modbanach/error.hpp"
#include "modbanach/rng.hpp"
#include "modbanach/spaces.hpp"

using namespace modbanach;

namespace {

Vector gaussian(std::size_t d, Rng& rng, bool complex = false) {
  std::vector<double> re(d), im;
  for (double& v : re) v = rng.gaussian();
  if (!complex) return Vector(re);
  im.resize(d);
  for (double& v : im) v = rng.gaussian();
  return Vector(re, im);
}

double power_sum_norm(const Vector& x, double p) {
  double s = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += std::pow(std::abs(x[i]), p);
  return std::pow(s, 1 / p);
}

// Singular values of a real 2x2 matrix [[a, b], [c, d]] in closed form.
std::pair<double, double> sv2(double a, double b, double c, double d) {
  const double s1 = a * a + b * b + c * c + d * d;
  const double det = std::abs(a * d - b * c);
  const double root = std::sqrt(std::max(0.0, s1 * s1 / 4 - det * det));
  return {std::sqrt(s1 / 2 + root), std::sqrt(std::max(0.0, s1 / 2 - root))};
}

}  // namespace

TEST(Norm, Examples) {
  EXPECT_NEAR(norm(FiniteNormedSpace::lp(3, 2), {1, 1}), std::cbrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(norm(FiniteNormedSpace::euclid(3), {3, 4, 0}), 5.0);
  EXPECT_NEAR(norm(FiniteNormedSpace::schatten(4, 2), {1, 0, 0, 2}), std::pow(17.0, 0.25), 1e-12);
}

TEST(Norm, EndpointsAndZero) {
  auto linf = FiniteNormedSpace::lp(kInfinity, 3);
  EXPECT_EQ(linf.norm({1, -7, 2}), 7.0);
  EXPECT_EQ(FiniteNormedSpace::lp(1, 3).norm({1, -7, 2}), 10.0);
  EXPECT_EQ(FiniteNormedSpace::lp(3.5, 4).norm(Vector::zeros(4)), 0.0);
  // Operator norm of [[1, 1], [0, 1]] is the golden ratio.
  EXPECT_NEAR(FiniteNormedSpace::schatten(kInfinity, 2).norm({1, 1, 0, 1}), (1 + std::sqrt(5.0)) / 2, 1e-13);
}

TEST(Norm, RejectsBadInput) {
  auto s = FiniteNormedSpace::lp(3, 2);
  EXPECT_THROW(s.norm({1, 2, 3}), DimensionError);
  EXPECT_THROW(s.norm({1, std::nan("")}), DomainError);
  EXPECT_THROW(s.norm(Vector({1, 2}, {0, 1})), DomainError);
  EXPECT_THROW(FiniteNormedSpace::lp(0.5, 2), DomainError);
  EXPECT_THROW(FiniteNormedSpace::euclid(0), DomainError);
}

TEST(Norm, LpMatchesPowerSumOracle) {
  Rng rng(3);
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.5}) {
    auto s = FiniteNormedSpace::lp(p, 6);
    for (int k = 0; k < 50; ++k) {
      auto x = gaussian(6, rng);
      EXPECT_NEAR(s.norm(x), power_sum_norm(x, p), 1e-13 * power_sum_norm(x, p));
    }
  }
}

TEST(Norm, LpTwoAgreesWithEuclid) {
  Rng rng(4);
  auto l2 = FiniteNormedSpace::lp(2, 5);
  auto e = FiniteNormedSpace::euclid(5);
  for (int k = 0; k < 200; ++k) {
    auto x = gaussian(5, rng);
    EXPECT_NEAR(l2.norm(x), e.norm(x), 1e-12 * e.norm(x));
  }
}

TEST(Norm, TriangleAndHomogeneityOnSamples) {
  Rng rng(5);
  std::vector<FiniteNormedSpace> spaces{FiniteNormedSpace::lp(1.3, 4), FiniteNormedSpace::lp(4, 4),
                                        FiniteNormedSpace::euclid(4), FiniteNormedSpace::schatten(3, 2),
                                        FiniteNormedSpace::schatten(1, 2),
                                        FiniteNormedSpace::two_sum({FiniteNormedSpace::lp(4, 2),
                                                                    FiniteNormedSpace::euclid(2)})};
  for (const auto& s : spaces)
    for (int k = 0; k < 200; ++k) {
      auto x = gaussian(s.dim(), rng), y = gaussian(s.dim(), rng);
      const double lambda = 3 * rng.gaussian();
      EXPECT_LE(s.norm(x + y), (s.norm(x) + s.norm(y)) * (1 + 1e-10)) << s.describe();
      EXPECT_NEAR(s.norm(lambda * x), std::abs(lambda) * s.norm(x), 1e-10 * std::abs(lambda) * s.norm(x));
    }
}

TEST(Schatten, DiagonalReducesToLp) {
  Rng rng(6);
  for (double p : {1.0, 2.5, 4.0}) {
    auto s = FiniteNormedSpace::schatten(p, 3);
    for (int k = 0; k < 20; ++k) {
      Vector diag = gaussian(3, rng);
      Vector m = Vector::zeros(9);
      for (int i = 0; i < 3; ++i) m[i * 4] = diag[i];
      EXPECT_NEAR(s.norm(m), power_sum_norm(diag, p), 1e-10 * power_sum_norm(diag, p));
    }
  }
}

TEST(Schatten, TwoByTwoClosedFormSingularValues) {
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    const double a = rng.gaussian(), b = rng.gaussian(), c = rng.gaussian(), d = rng.gaussian();
    auto [s1, s2] = sv2(a, b, c, d);
    auto sv = singular_values(Matrix(2, 2, {a, b, c, d}));
    EXPECT_NEAR(sv[0], s1, 1e-12 * s1);
    EXPECT_NEAR(sv[1], s2, 1e-7 * s1);  // small singular values lose digits through m^T m
    const double p = 3;
    EXPECT_NEAR(FiniteNormedSpace::schatten(p, 2).norm({a, b, c, d}),
                std::pow(std::pow(s1, p) + std::pow(s2, p), 1 / p), 1e-10 * s1);
  }
}

TEST(Schatten, SingularValueExamples) {
  auto e11 = singular_values(Matrix(2, 2, {1, 0, 0, 0}));
  EXPECT_EQ(e11, (std::vector<double>{1, 0}));
  auto diag = singular_values(Matrix(2, 2, {1, 0, 0, 0.5}));
  EXPECT_NEAR(diag[0], 1, 1e-15);
  EXPECT_NEAR(diag[1], 0.5, 1e-15);
  EXPECT_THROW(singular_values(Matrix(2, 3)), DimensionError);
}

TEST(Schatten, FrobeniusIdentity) {
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    Matrix m(3, 3);
    double fro = 0;
    for (double& v : m.data()) {
      v = rng.gaussian();
      fro += v * v;
    }
    double s2 = 0;
    for (double s : singular_values(m)) s2 += s * s;
    EXPECT_NEAR(s2, fro, 1e-10 * fro);
  }
}

TEST(Schatten, ComplexFrobeniusAndUnitaryInvariance) {
  Rng rng(9);
  auto s2 = FiniteNormedSpace::schatten(2, 3);
  auto s4 = FiniteNormedSpace::schatten(4, 3);
  for (int k = 0; k < 50; ++k) {
    Vector x = gaussian(9, rng, true);
    double fro = 0;
    for (std::size_t i = 0; i < 9; ++i) fro += std::norm(x.entry(i));
    EXPECT_NEAR(s2.norm(x), std::sqrt(fro), 1e-10 * std::sqrt(fro));

    // Left-multiply by a real rotation in the (0, 1) plane.
    const double th = rng.uniform(0, 6.283185307179586);
    const double c = std::cos(th), s = std::sin(th);
    std::vector<double> re(9), im(9);
    for (int j = 0; j < 3; ++j) {
      for (int part = 0; part < 2; ++part) {
        auto src = part == 0 ? x.real() : x.imag();
        auto& dst = part == 0 ? re : im;
        dst[j] = c * src[j] - s * src[3 + j];
        dst[3 + j] = s * src[j] + c * src[3 + j];
        dst[6 + j] = src[6 + j];
      }
    }
    EXPECT_NEAR(s4.norm(Vector(re, im)), s4.norm(x), 1e-9 * s4.norm(x));
  }
}

TEST(Exponents, DualExponent) {
  EXPECT_EQ(dual_exponent(2), 2);
  EXPECT_NEAR(dual_exponent(4), 4.0 / 3, 1e-15);
  EXPECT_EQ(dual_exponent(1), kInfinity);
  EXPECT_EQ(dual_exponent(kInfinity), 1);
  for (double p : {1.1, 1.5, 3.0, 10.0}) EXPECT_NEAR(dual_exponent(dual_exponent(p)), p, 1e-12 * p);
  EXPECT_THROW(dual_exponent(0.9), DomainError);
}

TEST(Exponents, BanachMazur) {
  EXPECT_EQ(banach_mazur_lp_vs_hilbert(2, 100), 1.0);
  EXPECT_NEAR(banach_mazur_lp_vs_hilbert(4, 16), 2.0, 1e-15);
  EXPECT_NEAR(banach_mazur_lp_vs_hilbert(1, 4), 2.0, 1e-15);
  EXPECT_THROW(banach_mazur_lp_vs_hilbert(kInfinity, 4), DomainError);
}

TEST(Spaces, TwoSumIsHilbertianCombination) {
  auto s = FiniteNormedSpace::two_sum({FiniteNormedSpace::lp(4, 2), FiniteNormedSpace::lp(1, 2)});
  EXPECT_EQ(s.dim(), 4u);
  const double a = std::pow(2.0, 0.25), b = 3.0;
  EXPECT_NEAR(s.norm({1, 1, 1, -2}), std::hypot(a, b), 1e-14);
}

TEST(Spaces, CustomOracleOutputIsChecked) {
  auto bad = FiniteNormedSpace::custom(2, [](const Vector&) { return -1.0; });
  EXPECT_THROW(bad.norm({1, 1}), NumericalError);
  auto ok = FiniteNormedSpace::custom(2, [](const Vector& v) { return std::abs(v[0]) + 2 * std::abs(v[1]); });
  EXPECT_EQ(ok.norm({1, -1}), 3.0);
}
