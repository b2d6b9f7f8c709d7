#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modbanach/linalg.hpp"
#include "modbanach/modular.hpp"
#include "modbanach/spaces.hpp"

namespace modbanach {

// A real linear map between finite-dimensional spaces. When the codomain
// is E0 (+)_2 H, `split` is the coordinate count of the E0 part; the
// coordinates past it are the H part. Maps without an H part have
// split == codomain.dim().
struct LinearMap {
  Matrix matrix;  // codomain.dim() x domain.dim()
  FiniteNormedSpace domain;
  FiniteNormedSpace codomain;
  std::size_t split = 0;

  static LinearMap general(Matrix matrix, FiniteNormedSpace domain, FiniteNormedSpace codomain);

  // T: e0 -> e0 (+)_2 Euclid(h_dim) with the given matrix.
  static LinearMap embedding(Matrix matrix, FiniteNormedSpace e0, std::size_t h_dim);

  // x -> (A x, 0) for an isometry A of e0 (identity when omitted).
  static LinearMap inclusion(FiniteNormedSpace e0, std::size_t h_dim, std::optional<Matrix> a = std::nullopt);

  bool has_split() const { return split < codomain.dim(); }
  Vector apply(const Vector& x) const;
  Vector e0_part(const Vector& tx) const;  // P
  Vector h_part(const Vector& tx) const;   // Q
};

// Permutation matrix with signs: column j is signs[j] * e_{perm[j]}.
Matrix signed_permutation(std::span<const std::size_t> perm, std::span<const double> signs);

// Structured points (units, all-ones, alternating signs, e_i +- e_j) then
// `gaussian` seeded Gaussian points, sample i from stream (seed, i).
std::vector<Vector> sample_suite(const FiniteNormedSpace& space, std::size_t gaussian, std::uint64_t seed);

struct IsometryCheck {
  bool isometric = false;
  double max_deviation = 0.0;  // max |(||Tx|| - ||x||)| / ||x||
};

IsometryCheck is_isometric_embedding(const LinearMap& t, std::size_t samples, std::uint64_t seed,
                                     double tolerance = 1e-12, std::size_t jobs = 1);

// Rank-one projection x -> phi(x) xi.
struct TwoProjectionCandidate {
  Vector xi;
  std::vector<double> phi;

  double apply_phi(const Vector& x) const;
  void validate(const FiniteNormedSpace& space) const;  // ||xi|| = 1, phi(xi) = 1
};

// |(||x||^2 - (|phi(x)|^2 ||xi||^2 + ||x - phi(x) xi||^2))| / ||x||^2 at one point.
double two_projection_residual(const FiniteNormedSpace& space, const TwoProjectionCandidate& cand, const Vector& x);

// Max of the residual over sample_suite(space, samples, seed).
double two_projection_violation(const FiniteNormedSpace& space, const TwoProjectionCandidate& cand,
                                std::size_t samples, std::uint64_t seed);

struct SummandSearch {
  std::optional<TwoProjectionCandidate> candidate;  // set iff residual <= 1e-8
  double residual = 0.0;                            // best max-residual over the search set
  std::size_t starts = 0;
};

inline constexpr double kSummandThreshold = 1e-8;

// Multi-start local descent over (xi, phi) on a fixed sample set. The
// coordinate directions are tried first, then seeded random starts; the
// total number of starts is `budget`.
SummandSearch find_one_dim_two_summand(const FiniteNormedSpace& space, std::size_t budget, std::uint64_t seed,
                                       std::size_t jobs = 1);

// T: E1 (+)_2 R -> (E1 (+)_2 R) (+)_2 Euclid(h_dim), identity on E1 and
// sending the R unit xi0 to the first unit vector of H.
LinearMap build_counterexample_embedding(const FiniteNormedSpace& e1, std::size_t h_dim);

struct IterationTrace {
  std::vector<double> norms;                // ||(PT)^n x||, n = 0..n_max
  std::vector<double> residuals;            // ||QT(PT)^k x||^2, k = 0..n_max-1
  std::vector<double> telescoping_defects;  // |(||x||^2) - ||(PT)^n x||^2 - sum_{k<n} residual_k|
};

IterationTrace pt_iterate(const LinearMap& t, const Vector& x, std::size_t n_max);

enum class LimitStatus { passes, fails, non_cauchy };
const char* to_string(LimitStatus s);

struct LimitIsometryReport {
  struct PerSample {
    double norm;
    double limit_norm;  // ||(PT)^{n_max} x||
    double cauchy_gap;  // | ||(PT)^{n_max} x|| - ||(PT)^{n_max - 5} x|| |
    LimitStatus status;
  };
  std::vector<PerSample> samples;
  bool all_pass = false;
  bool summand_found = false;             // only searched when all samples pass
  std::optional<double> pt_vs_t_deviation;  // max | ||PTx|| - ||Tx|| |, when checked
  bool pt_equals_t = false;
};

inline constexpr double kCauchyTolerance = 1e-9;

// Requires n_max >= 5.
LimitIsometryReport limit_isometry_check(const LinearMap& t, std::span<const Vector> samples, std::size_t n_max,
                                         double tolerance, std::size_t summand_budget = 16,
                                         std::uint64_t seed = 0);

struct RangeIntersection {
  std::size_t dim = 0;
  bool ambiguous = false;  // some cosine fell in [1 - 100 tol, 1 - tol)
  std::vector<double> cosines;  // cosines of the principal angles between T(E0) and H
};

RangeIntersection range_intersection_dim(const LinearMap& t, double tolerance = 1e-9);

struct BlockCheck {
  bool isometric = false;
  double isometry_deviation = 0.0;
  double e_component = 0.0;  // max ||(T(0, f))_E||_E / ||f||_F over samples
  bool holds = false;        // isometric and e_component <= 1e-12
};

// theta must be direct_sum(power(E, q_E), power(F, q_F)). T acts on E (+) F
// as [[U, C], [0, V]] with C the optional coupling.
BlockCheck lemma51_block_check(const ConvexModular& theta, const Matrix& u, const Matrix& v,
                               const std::optional<Matrix>& coupling, std::size_t samples, std::uint64_t seed);

}  // namespace modbanach
