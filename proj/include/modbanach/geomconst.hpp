#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "modbanach/exponents.hpp"
#include "modbanach/spaces.hpp"

namespace modbanach {

// (||x+y||^2 + ||x-y||^2) / (2 (||x||^2 + ||y||^2)), the quantity whose
// supremum is the Jordan-von Neumann constant a(X).
double jvn_ratio(const FiniteNormedSpace& space, const Vector& x, const Vector& y);

struct WitnessPair {
  Vector x;
  Vector y;
  double value = 0.0;
};

struct JvnEstimate {
  double lower_bound = 1.0;
  WitnessPair witness;
  std::size_t starts = 0;
  std::size_t ascent_steps = 0;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
};

struct JvnOptions {
  std::size_t max_steps = 200;
  double fd_step = 1e-6;
  std::size_t jobs = 1;
};

// Lower bound on a(X) from multi-start local ascent over pairs normalized to
// ||x||^2 + ||y||^2 = 1. Starts are the coordinate pairs (e_i, e_j), the
// (ones, alternating signs) pair, seeded Gaussian pairs, and finally the
// (x+y, x-y) transform of the best pair found. Points are real even in
// Schatten spaces, so there the result is a lower bound over real matrices.
// Deterministic in (space, budget, seed) for any number of jobs.
JvnEstimate jvn_lower_bound(const FiniteNormedSpace& space, std::size_t budget, std::uint64_t seed,
                            const JvnOptions& options = {});

// 2^{2 |1/2 - 1/p|}: upper bound on a(E) for l_p- and S_p-type spaces.
double jvn_upper_bound_clarkson(double p);

// Upper bound used for a block space E_n: 1 for Hilbert (and 1-dimensional)
// spaces, the Clarkson bound for Lp and Schatten. Throws for custom spaces.
double block_jvn_upper_bound(const FiniteNormedSpace& space);

// |a(l_p^d) - a(l_{p'}^d)| between the two estimates.
double duality_gap(double p, std::size_t d, std::size_t budget, std::uint64_t seed, const JvnOptions& options = {});

struct AsymptoticsReport {
  std::vector<double> exponents;
  std::vector<double> jvn;
  std::vector<double> alpha;  // a_n^{p_n/2} max(1, 2^{p_n-2})
  std::vector<double> beta;   // sup_{k>=n} alpha_k (finite horizon, plus tail bound if any)
  std::optional<double> tail_bound;
};

double alpha_of(double p, double a);

// Finite-horizon alpha/beta from explicit exponent and a(E_n) lists. When
// tail_bound is given it caps every beta from below, standing in for the
// part of the sequence beyond the horizon.
AsymptoticsReport alpha_beta(std::span<const double> exponents, std::span<const double> jvn_values,
                             std::optional<double> tail_bound = std::nullopt);

// alpha/beta for n = 1..horizon with a(E_n) replaced by block_jvn_upper_bound.
// For formula exponent families the tail beyond the horizon is certified by
// alpha at n = horizon + 1 and at the limit p = 2, using that p_n is monotone
// there and alpha grows with |p - 2|.
AsymptoticsReport alpha_beta_clarkson(const NakanoSpec& spec, std::size_t horizon = 1000);

double tail_parallelogram_ratio(const NakanoSpec& spec, const BlockVector& x, const BlockVector& y);

struct TailParallelogramReport {
  double max_ratio = 0.0;
  double beta = 0.0;  // beta_cutoff from the Clarkson bounds
  std::size_t samples = 0;
  BlockVector worst_x;
  BlockVector worst_y;
};

// Max over seeded Gaussian pairs supported on blocks [cutoff, cutoff+window)
// of (Theta(x+y) + Theta(x-y)) / (2 (Theta(x) + Theta(y))).
TailParallelogramReport tail_parallelogram_defect(const NakanoSpec& spec, std::size_t cutoff, std::size_t samples,
                                                  std::uint64_t seed, std::size_t window = 8,
                                                  std::size_t jobs = 1);

}  // namespace modbanach
