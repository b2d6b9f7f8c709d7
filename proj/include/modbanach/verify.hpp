#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modbanach/exponents.hpp"
#include "modbanach/spaces.hpp"

namespace modbanach {

enum class Verdict { holds, violated };
const char* to_string(Verdict v);

// Outcome of a sampled or gridded inequality check. A positive violation
// means the inequality failed at the witness; the verdict is `violated`
// exactly when max_violation exceeds the tolerance.
struct ViolationReport {
  std::string check;
  std::string space;
  std::size_t samples = 0;
  double max_violation = 0.0;
  std::vector<Vector> worst_witness;    // the (x, y) pair, when vectors are involved
  std::vector<double> witness_scalars;  // lambda, or the scalar pair of a grid check
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::holds;

  bool holds() const { return verdict == Verdict::holds; }
};

// Violations of the ratio-type checks are divided by max(|rhs|, 1e-14).
inline constexpr double kRelativeFloor = 1e-14;

// Pointwise measures. Each verifier's worst witness re-evaluates to its
// reported max_violation through the matching function here.

// 2(||x||^p + ||y||^p)^{2/p} - (||x+y||^2 + ||x-y||^2), relative; p from the space.
double clarkson_lower_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y);
// (||x+y||^2 + ||x-y||^2) - 2(||x||^p + ||y||^p)^{2/p}, relative.
double clarkson_upper_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y);
// |(||x + lambda y||^p) - (1 + |lambda|^p)|.
double lp_pair_violation(const FiniteNormedSpace& space, double p, const Vector& x, const Vector& y, double lambda);
// Two-point inequality for scalars with C_p = sqrt(p - 1), relative.
double beckner_violation(double p, double x, double y);
// (||x+y||^2 + ||x-y||^2) - 2(||x||^2 + C^2 ||y||^2), relative.
double two_smooth_violation(const FiniteNormedSpace& space, double c, const Vector& x, const Vector& y);
// max(||x||, ||y||)^2 - (||x+y||^2 + ||x-y||^2)/2, relative; operator norms.
double schatten_inf_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y);
// |(||x+y||^2 + ||x-y||^2) - 2(||x||^2 + ||y||^2)|, absolute.
double parallelogram_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y);

struct SamplingOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

// Sampled pairs are the structured seeds (coordinate pairs, all-ones with
// alternating signs, collinear pairs) followed by seeded Gaussian pairs
// (complex Gaussian in Schatten spaces), with y given a random log-normal
// scale relative to x.

// ||x+y||^2 + ||x-y||^2 >= 2(||x||^p + ||y||^p)^{2/p}, Lp or Schatten with p > 2.
ViolationReport verify_clarkson_lower(const FiniteNormedSpace& space, const SamplingOptions& options,
                                      double tolerance = 1e-10);
// The reverse inequality, Lp or Schatten with 1 <= p < 2.
ViolationReport verify_clarkson_upper(const FiniteNormedSpace& space, const SamplingOptions& options,
                                      double tolerance = 1e-10);

std::vector<double> default_lambda_grid();  // -2, -1.9, ..., 2

// Requires ||x|| = 1 within 1e-10.
ViolationReport verify_lp_pair(const FiniteNormedSpace& space, const Vector& x, const Vector& y, double p,
                               std::span<const double> lambda_grid, double tolerance = 1e-10);

struct BecknerGrid {
  std::size_t points = 401;
  double radius = 2.0;
};
ViolationReport verify_beckner(double p, const BecknerGrid& grid = {}, double tolerance = 1e-12);

// 2-uniform smoothness with constant C (default sqrt(p - 1)); requires p >= 2, C > 0.
ViolationReport verify_2smooth(const FiniteNormedSpace& space, double p, std::optional<double> c,
                               const SamplingOptions& options, double tolerance = 1e-10);

ViolationReport verify_schatten_inf(std::size_t side, const SamplingOptions& options, double tolerance = 1e-10);

ViolationReport verify_parallelogram(const FiniteNormedSpace& space, const SamplingOptions& options,
                                     double tolerance = 1e-10);

// Parallelogram identity on the p = 2 endpoint (Lp(2,d), Euclid, Schatten(2,d)).
ViolationReport verify_endpoint_2(const FiniteNormedSpace& space, const SamplingOptions& options,
                                  double tolerance = 1e-10);

struct Lemma42Result {
  std::vector<std::size_t> blocks;
  std::vector<double> gaps;  // | ||x + t u_n|| - ||x + t||_{E (+)_m K} |
  double target = 0.0;       // ||x + t||_{E (+)_m K}
};

// Requires the schedule to avoid supp(x).
Lemma42Result lemma42_limit_check(const NakanoSpec& spec, const BlockVector& x, double t,
                                  std::span<const std::size_t> schedule);

}  // namespace modbanach
