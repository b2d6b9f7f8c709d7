#include <gtest/gtest.h>

#include <cmath>

#include "modbanach/error.hpp"
#include "modbanach/rng.hpp"
#include "modbanach/verify.hpp"

using namespace modbanach;

namespace {

SamplingOptions opts(std::size_t samples, std::uint64_t seed = 1, std::size_t jobs = 1) { return {samples, seed, jobs}; }

// The matrix unit e_{ij} of a side x side Schatten space.
Vector unit(std::size_t side, std::size_t i, std::size_t j) { return Vector::unit(side * side, i * side + j); }

}  // namespace

TEST(ClarksonLower, HandExamples) {
  auto s = FiniteNormedSpace::lp(4, 2);
  // x = y unit: LHS 4, RHS 2 * 2^{2/p}.
  const double slack = 4 - std::pow(2.0, 1 + 2.0 / 4);
  EXPECT_NEAR(clarkson_lower_violation(s, {1, 0}, {1, 0}), -slack / std::pow(2.0, 1.5), 1e-14);
  // x = (1,1), y = (1,-1): LHS 4 + 4, RHS 2 (2 + 2)^{1/2} = 4.
  EXPECT_NEAR(clarkson_lower_violation(s, {1, 1}, {1, -1}), (4.0 - 8.0) / 4.0, 1e-14);
}

TEST(ClarksonLower, RandomSuitesHold) {
  auto r = verify_clarkson_lower(FiniteNormedSpace::lp(3, 5), opts(20000, 42), 1e-12);
  EXPECT_TRUE(r.holds()) << r.max_violation;
  EXPECT_LE(r.max_violation, 1e-12);
  auto sch = verify_clarkson_lower(FiniteNormedSpace::schatten(3, 2), opts(3000, 2), 1e-12);
  EXPECT_TRUE(sch.holds()) << sch.max_violation;
  EXPECT_THROW(verify_clarkson_lower(FiniteNormedSpace::lp(2, 3), opts(10)), DomainError);
  EXPECT_THROW(verify_clarkson_lower(FiniteNormedSpace::lp(1.5, 3), opts(10)), DomainError);
}

TEST(ClarksonUpper, HandExamplesAndSuites) {
  auto l1 = FiniteNormedSpace::lp(1, 2);
  EXPECT_NEAR(clarkson_upper_violation(l1, {1, 0}, {0, 1}), 0.0, 1e-15);
  EXPECT_LE(clarkson_upper_violation(FiniteNormedSpace::lp(1.5, 2), {1, 0}, {1, 0}), 0.0);
  auto r = verify_clarkson_upper(FiniteNormedSpace::lp(1.5, 4), opts(20000, 5), 1e-12);
  EXPECT_TRUE(r.holds()) << r.max_violation;
  EXPECT_THROW(verify_clarkson_upper(FiniteNormedSpace::lp(2, 3), opts(10)), DomainError);
}

TEST(Clarkson, BothSidesAgreeAtTwo) {
  Rng rng(3);
  auto s = FiniteNormedSpace::lp(2, 3);
  for (int k = 0; k < 200; ++k) {
    Vector x{rng.gaussian(), rng.gaussian(), rng.gaussian()}, y{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    EXPECT_NEAR(clarkson_lower_violation(s, x, y), 0.0, 1e-10);
    EXPECT_NEAR(clarkson_upper_violation(s, x, y), 0.0, 1e-10);
  }
}

TEST(Verifiers, WitnessReevaluatesToMaxViolation) {
  auto s = FiniteNormedSpace::lp(2.5, 3);
  auto r = verify_clarkson_lower(s, opts(5000, 9));
  ASSERT_EQ(r.worst_witness.size(), 2u);
  EXPECT_NEAR(clarkson_lower_violation(s, r.worst_witness[0], r.worst_witness[1]), r.max_violation, 1e-12);
  auto p = verify_parallelogram(FiniteNormedSpace::lp(4, 2), opts(2000, 9));
  EXPECT_NEAR(parallelogram_violation(FiniteNormedSpace::lp(4, 2), p.worst_witness[0], p.worst_witness[1]),
              p.max_violation, 1e-12);
}

TEST(Verifiers, DeterministicAcrossJobs) {
  auto s = FiniteNormedSpace::schatten(1.5, 3);
  auto a = verify_clarkson_upper(s, opts(5000, 17, 1));
  auto b = verify_clarkson_upper(s, opts(5000, 17, 8));
  EXPECT_EQ(a.max_violation, b.max_violation);
  EXPECT_EQ(a.worst_witness, b.worst_witness);
}

TEST(LpPair, DisjointUnitsPass) {
  const auto grid = default_lambda_grid();
  ASSERT_EQ(grid.size(), 41u);
  for (double p : {1.5, 2.0, 2.5, 4.0})
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        if (i == j) continue;
        auto r = verify_lp_pair(FiniteNormedSpace::lp(p, 3), Vector::unit(3, i), Vector::unit(3, j), p, grid, 1e-12);
        EXPECT_TRUE(r.holds()) << p << " " << r.max_violation;
      }
}

TEST(LpPair, CollinearFails) {
  auto s = FiniteNormedSpace::lp(4, 2);
  EXPECT_NEAR(lp_pair_violation(s, 4, {1, 0}, {1, 0}, 1.0), 14.0, 1e-12);
  for (double p : {1.5, 2.5, 4.0}) {
    auto r = verify_lp_pair(FiniteNormedSpace::lp(p, 2), {1, 0}, {1, 0}, p, default_lambda_grid());
    EXPECT_FALSE(r.holds());
  }
  EXPECT_THROW(verify_lp_pair(s, {2, 0}, {0, 1}, 4, default_lambda_grid()), DomainError);
}

TEST(LpPair, SchattenMatrixUnits) {
  const auto grid = default_lambda_grid();
  for (double p : {1.5, 3.0, 4.0}) {
    auto s = FiniteNormedSpace::schatten(p, 2);
    EXPECT_TRUE(verify_lp_pair(s, unit(2, 0, 0), unit(2, 1, 1), p, grid).holds());
    EXPECT_TRUE(verify_lp_pair(s, unit(2, 0, 1), unit(2, 1, 0), p, grid).holds());
    // Shared row or column: not an l_p pair unless p = 2.
    EXPECT_FALSE(verify_lp_pair(s, unit(2, 0, 0), unit(2, 0, 1), p, grid).holds());
    EXPECT_FALSE(verify_lp_pair(s, unit(2, 0, 0), unit(2, 1, 0), p, grid).holds());
  }
  EXPECT_TRUE(verify_lp_pair(FiniteNormedSpace::schatten(2, 2), unit(2, 0, 0), unit(2, 0, 1), 2, grid).holds());
}

TEST(Beckner, Examples) {
  EXPECT_EQ(verify_beckner(2).max_violation, 0.0);
  // p = 4, x = y = 1: LHS 8, RHS 16.
  EXPECT_NEAR(beckner_violation(4, 1, 1), (8.0 - 16.0) / 16.0, 1e-14);
  for (double p : {2.5, 3.0, 4.0}) {
    auto r = verify_beckner(p);
    EXPECT_TRUE(r.holds()) << p << " " << r.max_violation;
    EXPECT_EQ(r.samples, 401u * 401u);
  }
  EXPECT_THROW(verify_beckner(1.5), DomainError);
}

TEST(TwoSmooth, Examples) {
  auto e = verify_2smooth(FiniteNormedSpace::euclid(3), 2, 1.0, opts(2000));
  EXPECT_TRUE(e.holds());
  auto r = verify_2smooth(FiniteNormedSpace::lp(4, 3), 4, std::nullopt, opts(20000, 4));
  EXPECT_TRUE(r.holds()) << r.max_violation;
  auto bad = verify_2smooth(FiniteNormedSpace::lp(4, 3), 4, 0.5 * std::sqrt(3.0), opts(2000, 4));
  EXPECT_FALSE(bad.holds());
  EXPECT_GT(two_smooth_violation(FiniteNormedSpace::lp(4, 3), 0.5 * std::sqrt(3.0), bad.worst_witness[0],
                                 bad.worst_witness[1]),
            1e-10);
  EXPECT_THROW(verify_2smooth(FiniteNormedSpace::lp(4, 3), 1.5, std::nullopt, opts(10)), DomainError);
  EXPECT_THROW(verify_2smooth(FiniteNormedSpace::lp(4, 3), 4, 0.0, opts(10)), DomainError);
}

TEST(SchattenInf, Examples) {
  auto s = FiniteNormedSpace::schatten(kInfinity, 2);
  EXPECT_NEAR(schatten_inf_violation(s, unit(2, 0, 0), unit(2, 1, 1)), 0.0, 1e-15);
  EXPECT_LT(schatten_inf_violation(s, {1, 2, 3, 4}, {1, 2, 3, 4}), 0.0);
  auto r = verify_schatten_inf(3, opts(5000, 6));
  EXPECT_TRUE(r.holds()) << r.max_violation;
}

TEST(Parallelogram, HilbertVersusLp4) {
  EXPECT_TRUE(verify_parallelogram(FiniteNormedSpace::euclid(4), opts(5000)).holds());
  EXPECT_TRUE(verify_parallelogram(FiniteNormedSpace::lp(2, 3), opts(5000)).holds());
  auto s = FiniteNormedSpace::lp(4, 2);
  EXPECT_NEAR(parallelogram_violation(s, {1, 1}, {1, -1}), 8 - 4 * std::sqrt(2.0), 1e-13);
  EXPECT_FALSE(verify_parallelogram(s, opts(100)).holds());
}

TEST(Endpoint2, SchattenFrobenius) {
  auto r = verify_endpoint_2(FiniteNormedSpace::schatten(2, 2), opts(10000, 3));
  EXPECT_TRUE(r.holds()) << r.max_violation;
  EXPECT_TRUE(verify_endpoint_2(FiniteNormedSpace::schatten(2, 3), opts(3000, 5), 1e-9).holds());
  EXPECT_THROW(verify_endpoint_2(FiniteNormedSpace::lp(3, 2), opts(10)), DomainError);
}

TEST(ScalarLimit, Examples) {
  using Entry = BlockVector::Entry;
  const std::vector<std::size_t> sched{5, 10, 20, 40};
  NakanoSpec hilbert{ExponentSequence::constant(2), BlockSequence::uniform(FiniteNormedSpace::euclid(2))};
  auto x2 = BlockVector(std::vector<Entry>{{1, {1, 2}}});
  for (double g : lemma42_limit_check(hilbert, x2, 0.7, sched).gaps) EXPECT_LE(g, 1e-10);

  NakanoSpec spec{ExponentSequence::power(1.0), BlockSequence::scalar()};
  auto x = BlockVector(std::vector<Entry>{{1, {1.0}}});
  auto r = lemma42_limit_check(spec, x, 1.0, sched);
  for (std::size_t i = 1; i < r.gaps.size(); ++i) EXPECT_LT(r.gaps[i], r.gaps[i - 1]);
  for (double g : lemma42_limit_check(spec, x, 0.0, sched).gaps) EXPECT_LE(g, 1e-12);
  const std::vector<std::size_t> clash{1, 5};
  EXPECT_THROW(lemma42_limit_check(spec, x, 1.0, clash), DomainError);
}
