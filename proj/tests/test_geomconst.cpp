#include <gtest/gtest.h>

#include <cmath>

#include "modbanach/error.hpp"
#include "modbanach/geomconst.hpp"
#include "modbanach/rng.hpp"

using namespace modbanach;

namespace {

const double kPi = 3.141592653589793;

double lp2(double a, double b, double p) { return std::pow(std::pow(std::abs(a), p) + std::pow(std::abs(b), p), 1 / p); }

// Max of the JvN ratio over unit-circle direction pairs on a 720 x 720 grid,
// with the norm evaluated by the power-sum formula.
double angle_grid_oracle(double p) {
  double best = 0;
  for (int i = 0; i < 720; ++i)
    for (int j = 0; j < 720; ++j) {
      const double s = 2 * kPi * i / 720, t = 2 * kPi * j / 720;
      const double x0 = std::cos(s), x1 = std::sin(s), y0 = std::cos(t), y1 = std::sin(t);
      const double num = std::pow(lp2(x0 + y0, x1 + y1, p), 2) + std::pow(lp2(x0 - y0, x1 - y1, p), 2);
      const double den = 2 * (std::pow(lp2(x0, x1, p), 2) + std::pow(lp2(y0, y1, p), 2));
      best = std::max(best, num / den);
    }
  return best;
}

}  // namespace

TEST(JvnRatio, Examples) {
  Rng rng(1);
  auto e = FiniteNormedSpace::euclid(4);
  for (int k = 0; k < 20; ++k) {
    Vector x{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    Vector y{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    EXPECT_NEAR(jvn_ratio(e, x, y), 1.0, 1e-14);
  }
  EXPECT_NEAR(jvn_ratio(FiniteNormedSpace::lp(1, 2), {1, 0}, {0, 1}), 2.0, 1e-15);
  EXPECT_NEAR(jvn_ratio(FiniteNormedSpace::lp(4, 2), {1, 1}, {1, -1}), std::sqrt(2.0), 1e-14);
  EXPECT_THROW(jvn_ratio(e, Vector::zeros(4), Vector::zeros(4)), DomainError);
}

TEST(JvnRatio, ScaleInvariantAndCapped) {
  Rng rng(2);
  for (double p : {1.0, 1.5, 3.0, kInfinity}) {
    auto s = FiniteNormedSpace::lp(p, 3);
    for (int k = 0; k < 100; ++k) {
      Vector x{rng.gaussian(), rng.gaussian(), rng.gaussian()}, y{rng.gaussian(), rng.gaussian(), rng.gaussian()};
      const double r = jvn_ratio(s, x, y);
      const double t = std::exp(3 * rng.gaussian()) * (k % 2 ? -1 : 1);
      EXPECT_NEAR(jvn_ratio(s, t * x, t * y), r, 1e-12 * r);
      EXPECT_LE(r, 2 + 1e-12);
      // Either the pair or its (x+y, x-y) transform reaches at least 1.
      EXPECT_GE(std::max(r, jvn_ratio(s, x + y, x - y)), 1 - 1e-9);
    }
  }
}

TEST(JvnLowerBound, EuclidIsOne) {
  for (std::size_t d = 1; d <= 8; ++d)
    EXPECT_NEAR(jvn_lower_bound(FiniteNormedSpace::euclid(d), 64, 7).lower_bound, 1.0, 1e-9) << d;
}

TEST(JvnLowerBound, Lp42MatchesAngleGridOracle) {
  const double oracle = angle_grid_oracle(4);
  EXPECT_NEAR(oracle, std::sqrt(2.0), 1e-9);
  auto est = jvn_lower_bound(FiniteNormedSpace::lp(4, 2), 64, 11);
  EXPECT_NEAR(est.lower_bound, oracle, 1e-6);
  EXPECT_LE(est.lower_bound, jvn_upper_bound_clarkson(4) + 1e-9);
  EXPECT_NEAR(jvn_ratio(FiniteNormedSpace::lp(4, 2), est.witness.x, est.witness.y), est.lower_bound, 1e-10);
}

TEST(JvnLowerBound, L1ReachesTheCap) {
  EXPECT_NEAR(jvn_lower_bound(FiniteNormedSpace::lp(1, 2), 64, 3).lower_bound, 2.0, 1e-6);
}

TEST(JvnLowerBound, NeverAboveClarksonBound) {
  for (double p : {1.2, 1.5, 3.0, 6.0})
    for (std::size_t d : {2u, 3u}) {
      auto est = jvn_lower_bound(FiniteNormedSpace::lp(p, d), 24, 5);
      EXPECT_LE(est.lower_bound, jvn_upper_bound_clarkson(p) + 1e-6) << p << " " << d;
      EXPECT_GE(est.lower_bound, 1 - 1e-9);
    }
}

TEST(JvnLowerBound, DeterministicAcrossJobs) {
  auto s = FiniteNormedSpace::lp(3, 3);
  JvnOptions one, many;
  many.jobs = 4;
  auto a = jvn_lower_bound(s, 20, 99, one), b = jvn_lower_bound(s, 20, 99, many);
  EXPECT_EQ(a.lower_bound, b.lower_bound);
  EXPECT_EQ(a.witness.x, b.witness.x);
  EXPECT_EQ(a.witness.y, b.witness.y);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(ClarksonBound, Values) {
  EXPECT_EQ(jvn_upper_bound_clarkson(2), 1.0);
  EXPECT_NEAR(jvn_upper_bound_clarkson(4), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(jvn_upper_bound_clarkson(1), 2.0, 1e-15);
  EXPECT_THROW(jvn_upper_bound_clarkson(kInfinity), DomainError);
}

TEST(DualityGap, SmallForConjugatePairs) {
  EXPECT_LE(duality_gap(2, 2, 64, 1), 2e-9);
  EXPECT_LE(duality_gap(4, 2, 64, 1), 1e-4);
  EXPECT_LE(duality_gap(3, 2, 64, 1), 1e-3);
  // Both sides against the grid oracle.
  const double p3 = angle_grid_oracle(3), p3d = angle_grid_oracle(1.5);
  EXPECT_NEAR(jvn_lower_bound(FiniteNormedSpace::lp(3, 2), 64, 1).lower_bound, p3, 1e-5);
  EXPECT_NEAR(jvn_lower_bound(FiniteNormedSpace::lp(1.5, 2), 64, 1).lower_bound, p3d, 1e-5);
}

TEST(AlphaBeta, Examples) {
  EXPECT_EQ(alpha_of(2, 1), 1.0);
  EXPECT_NEAR(alpha_of(4, std::sqrt(2.0)), 8.0, 1e-13);
  const std::vector<double> p{4, 3, 2.5, 2.2, 2.1};
  const std::vector<double> a{std::sqrt(2.0), 1.2, 1.1, 1.05, 1.0};
  auto r = alpha_beta(p, a);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(r.alpha[i], alpha_of(p[i], a[i]));
    EXPECT_GE(r.beta[i], r.alpha[i]);
    if (i) {
      EXPECT_LE(r.beta[i], r.beta[i - 1]);
    }
  }
  EXPECT_THROW(alpha_beta(p, std::vector<double>{1, 1}), DimensionError);
  EXPECT_THROW(alpha_beta(std::vector<double>{2}, std::vector<double>{0.5}), DomainError);
}

TEST(AlphaBeta, ClarksonInputsAlongPowerFamily) {
  NakanoSpec spec{ExponentSequence::power(1.0), BlockSequence::matching_lp(2)};
  auto r = alpha_beta_clarkson(spec, 1000);
  ASSERT_EQ(r.beta.size(), 1000u);
  for (std::size_t i = 1; i < r.beta.size(); ++i) {
    EXPECT_LE(r.beta[i], r.beta[i - 1]);
    EXPECT_GE(r.beta[i], r.alpha[i]);
  }
  // For p > 2 with a = 2^{1 - 2/p}: alpha = 2^{(1 - 2/p) p / 2 + p - 2} = 2^{1.5 (p - 2)}.
  for (std::size_t n : {1u, 10u, 500u}) EXPECT_NEAR(r.alpha[n - 1], std::pow(2.0, 1.5 / n), 1e-12);
  EXPECT_NEAR(r.beta[9], std::pow(2.0, 0.15), 1e-12);
  EXPECT_LT(r.beta[9] - 1, 0.35);
  EXPECT_LT(r.beta.back() - 1, 0.01);
}

TEST(TailParallelogram, HilbertBlocksGiveOne) {
  NakanoSpec spec{ExponentSequence::constant(2), BlockSequence::uniform(FiniteNormedSpace::euclid(3))};
  auto r = tail_parallelogram_defect(spec, 3, 200, 4);
  EXPECT_NEAR(r.max_ratio, 1.0, 1e-12);
}

TEST(TailParallelogram, BoundedByBeta) {
  NakanoSpec spec{ExponentSequence::power(1.0), BlockSequence::matching_lp(2)};
  auto ab = alpha_beta_clarkson(spec, 100);
  for (std::size_t cutoff : {1u, 10u, 40u}) {
    auto r = tail_parallelogram_defect(spec, cutoff, 1000, 8);
    EXPECT_NEAR(r.beta, ab.beta[cutoff - 1], 1e-12);
    EXPECT_LE(r.max_ratio, r.beta + 1e-9) << cutoff;
    EXPECT_NEAR(tail_parallelogram_ratio(spec, r.worst_x, r.worst_y), r.max_ratio, 1e-12);
  }
}

TEST(TailParallelogram, DeterministicAcrossJobs) {
  NakanoSpec spec{ExponentSequence::log(1.0), BlockSequence::matching_schatten(2)};
  auto a = tail_parallelogram_defect(spec, 5, 600, 21, 8, 1);
  auto b = tail_parallelogram_defect(spec, 5, 600, 21, 8, 8);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_THROW(tail_parallelogram_defect(spec, 5, 0, 1), DomainError);
}

TEST(BlockBound, Kinds) {
  EXPECT_EQ(block_jvn_upper_bound(FiniteNormedSpace::euclid(5)), 1.0);
  EXPECT_EQ(block_jvn_upper_bound(FiniteNormedSpace::lp(7, 1)), 1.0);
  EXPECT_NEAR(block_jvn_upper_bound(FiniteNormedSpace::schatten(4, 2)), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(block_jvn_upper_bound(FiniteNormedSpace::lp(kInfinity, 2)), 2.0);
  EXPECT_THROW(block_jvn_upper_bound(FiniteNormedSpace::custom(2, [](const Vector&) { return 1.0; })),
               DomainError);
}
