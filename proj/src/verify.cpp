#include "modbanach/verify.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "modbanach/error.hpp"
#include "modbanach/modular.hpp"
#include "modbanach/nakano.hpp"
#include "modbanach/parallel.hpp"
#include "modbanach/rng.hpp"

namespace modbanach {

const char* to_string(Verdict v) { return v == Verdict::holds ? "holds" : "violated"; }

namespace {

double relative(double excess, double rhs) { return excess / std::max(std::abs(rhs), kRelativeFloor); }

double sq(double v) { return v * v; }

// (||x||^p + ||y||^p)^{2/p}
double power_mean_square(double nx, double ny, double p) {
  const double mags[2] = {nx, ny};
  return sq(lp_norm_of_magnitudes(mags, p));
}

double required_exponent(const FiniteNormedSpace& space, const char* who) {
  if (!std::holds_alternative<LpKind>(space.kind()) && !std::holds_alternative<SchattenKind>(space.kind()) &&
      !std::holds_alternative<EuclidKind>(space.kind()))
    throw DomainError(std::string(who) + ": expects an Lp, Euclid or Schatten space");
  return *space.exponent();
}

using Pair = std::pair<Vector, Vector>;

std::vector<Pair> structured_pairs(const FiniteNormedSpace& space) {
  const std::size_t d = space.dim();
  std::vector<Pair> out;
  Vector ones = Vector::zeros(d);
  Vector alt = Vector::zeros(d);
  for (std::size_t i = 0; i < d; ++i) {
    ones[i] = 1.0;
    alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  if (d > 1) out.emplace_back(ones, alt);
  out.emplace_back(ones, ones);
  for (std::size_t i = 0; i < d && i < 4; ++i)
    for (std::size_t j = 0; j < d && j < 4; ++j) out.emplace_back(Vector::unit(d, i), Vector::unit(d, j));
  const Vector e0 = Vector::unit(d, 0);
  for (double t : {1e-3, 0.1, 0.5, 2.0, 10.0}) out.emplace_back(e0, t * e0);
  out.emplace_back(e0, ones);
  return out;
}

Vector gaussian_vector(const FiniteNormedSpace& space, Rng& rng, double scale) {
  std::vector<double> re(space.dim());
  for (double& v : re) v = scale * rng.gaussian();
  if (!space.accepts_complex()) return Vector(std::move(re));
  std::vector<double> im(space.dim());
  for (double& v : im) v = scale * rng.gaussian();
  return Vector(std::move(re), std::move(im));
}

Pair gaussian_pair(const FiniteNormedSpace& space, Rng& rng) {
  Vector x = gaussian_vector(space, rng, 1.0);
  const double scale = std::exp(rng.gaussian());
  Vector y = gaussian_vector(space, rng, scale);
  return {std::move(x), std::move(y)};
}

template <typename Violation>
ViolationReport run_pair_campaign(std::string check, const FiniteNormedSpace& space, const SamplingOptions& options,
                                  double tolerance, Violation&& violation) {
  if (options.samples == 0) throw DomainError(check + ": at least one sample is required");
  ViolationReport report;
  report.check = std::move(check);
  report.space = space.describe();
  report.samples = options.samples;
  report.tolerance = tolerance;
  report.seed = options.seed;

  struct Worst {
    double value = -kInfinity;
    Pair pair;
  };

  const auto seeds = structured_pairs(space);
  const std::size_t n_struct = std::min(seeds.size(), options.samples);
  Worst best;
  for (std::size_t i = 0; i < n_struct; ++i) {
    const double v = violation(seeds[i].first, seeds[i].second);
    if (v > best.value) best = {v, seeds[i]};
  }

  constexpr std::size_t kBatch = 1024;
  const std::size_t remaining = options.samples - n_struct;
  const std::size_t batches = (remaining + kBatch - 1) / kBatch;
  std::vector<Worst> worst(batches);
  parallel_for(batches, options.jobs, [&](std::size_t b) {
    Rng rng(options.seed, b);
    const std::size_t end = std::min(remaining, (b + 1) * kBatch);
    for (std::size_t s = b * kBatch; s < end; ++s) {
      Pair pair = gaussian_pair(space, rng);
      const double v = violation(pair.first, pair.second);
      if (v > worst[b].value) worst[b] = {v, std::move(pair)};
    }
  });
  for (auto& w : worst)
    if (w.value > best.value) best = std::move(w);

  report.max_violation = best.value;
  report.worst_witness = {best.pair.first, best.pair.second};
  report.verdict = report.max_violation > tolerance ? Verdict::violated : Verdict::holds;
  return report;
}

}  // namespace

double clarkson_lower_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y) {
  const double p = required_exponent(space, "clarkson_lower_violation");
  const double lhs = sq(space.norm(x + y)) + sq(space.norm(x - y));
  const double rhs = 2.0 * power_mean_square(space.norm(x), space.norm(y), p);
  return relative(rhs - lhs, rhs);
}

double clarkson_upper_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y) {
  const double p = required_exponent(space, "clarkson_upper_violation");
  const double lhs = sq(space.norm(x + y)) + sq(space.norm(x - y));
  const double rhs = 2.0 * power_mean_square(space.norm(x), space.norm(y), p);
  return relative(lhs - rhs, rhs);
}

ViolationReport verify_clarkson_lower(const FiniteNormedSpace& space, const SamplingOptions& options,
                                      double tolerance) {
  const double p = required_exponent(space, "verify_clarkson_lower");
  if (!(p > 2.0)) throw DomainError("verify_clarkson_lower: requires p > 2");
  return run_pair_campaign("clarkson_lower", space, options, tolerance,
                           [&](const Vector& x, const Vector& y) { return clarkson_lower_violation(space, x, y); });
}

ViolationReport verify_clarkson_upper(const FiniteNormedSpace& space, const SamplingOptions& options,
                                      double tolerance) {
  const double p = required_exponent(space, "verify_clarkson_upper");
  if (!(p < 2.0)) throw DomainError("verify_clarkson_upper: requires 1 <= p < 2");
  return run_pair_campaign("clarkson_upper", space, options, tolerance,
                           [&](const Vector& x, const Vector& y) { return clarkson_upper_violation(space, x, y); });
}

double lp_pair_violation(const FiniteNormedSpace& space, double p, const Vector& x, const Vector& y, double lambda) {
  const double lhs = std::pow(space.norm(x + lambda * y), p);
  return std::abs(lhs - (1.0 + std::pow(std::abs(lambda), p)));
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = -20; i <= 20; ++i) grid.push_back(0.1 * i);
  return grid;
}

ViolationReport verify_lp_pair(const FiniteNormedSpace& space, const Vector& x, const Vector& y, double p,
                               std::span<const double> lambda_grid, double tolerance) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("verify_lp_pair: exponent must lie in [1, inf)");
  if (lambda_grid.empty()) throw DomainError("verify_lp_pair: empty lambda grid");
  if (std::abs(space.norm(x) - 1.0) > 1e-10) throw DomainError("verify_lp_pair: ||x|| must equal 1");
  ViolationReport report;
  report.check = "lp_pair";
  report.space = space.describe();
  report.samples = lambda_grid.size();
  report.tolerance = tolerance;
  report.max_violation = -kInfinity;
  for (double lambda : lambda_grid) {
    const double v = lp_pair_violation(space, p, x, y, lambda);
    if (v > report.max_violation) {
      report.max_violation = v;
      report.witness_scalars = {lambda};
    }
  }
  report.worst_witness = {x, y};
  report.verdict = report.max_violation > tolerance ? Verdict::violated : Verdict::holds;
  return report;
}

double beckner_violation(double p, double x, double y) {
  const double c = std::sqrt(p - 1.0);
  const double lhs = (std::pow(std::abs(x + y), p) + std::pow(std::abs(x - y), p)) / 2.0;
  const double inner = (std::pow(std::abs(x + c * y), 2.0) + std::pow(std::abs(x - c * y), 2.0)) / 2.0;
  const double rhs = std::pow(inner, p / 2.0);
  return relative(lhs - rhs, rhs);
}

ViolationReport verify_beckner(double p, const BecknerGrid& grid, double tolerance) {
  if (!(p >= 2.0) || std::isinf(p)) throw DomainError("verify_beckner: requires 2 <= p < inf");
  if (grid.points < 2 || !(grid.radius > 0.0)) throw DomainError("verify_beckner: bad grid");
  ViolationReport report;
  report.check = "beckner";
  report.space = "scalars";
  report.samples = grid.points * grid.points;
  report.tolerance = tolerance;
  report.max_violation = -kInfinity;
  const double step = 2.0 * grid.radius / static_cast<double>(grid.points - 1);
  for (std::size_t i = 0; i < grid.points; ++i)
    for (std::size_t j = 0; j < grid.points; ++j) {
      const double x = -grid.radius + step * static_cast<double>(i);
      const double y = -grid.radius + step * static_cast<double>(j);
      const double v = beckner_violation(p, x, y);
      if (v > report.max_violation) {
        report.max_violation = v;
        report.witness_scalars = {x, y};
      }
    }
  report.verdict = report.max_violation > tolerance ? Verdict::violated : Verdict::holds;
  return report;
}

double two_smooth_violation(const FiniteNormedSpace& space, double c, const Vector& x, const Vector& y) {
  const double lhs = sq(space.norm(x + y)) + sq(space.norm(x - y));
  const double rhs = 2.0 * (sq(space.norm(x)) + sq(c * space.norm(y)));
  return relative(lhs - rhs, rhs);
}

ViolationReport verify_2smooth(const FiniteNormedSpace& space, double p, std::optional<double> c,
                               const SamplingOptions& options, double tolerance) {
  if (!(p >= 2.0) || std::isinf(p)) throw DomainError("verify_2smooth: requires 2 <= p < inf");
  const double constant = c.value_or(std::sqrt(p - 1.0));
  if (!(constant > 0.0) || !std::isfinite(constant)) throw DomainError("verify_2smooth: C must be positive");
  auto report = run_pair_campaign("2smooth", space, options, tolerance, [&](const Vector& x, const Vector& y) {
    return two_smooth_violation(space, constant, x, y);
  });
  report.witness_scalars = {constant};
  return report;
}

double schatten_inf_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y) {
  const double lhs = (sq(space.norm(x + y)) + sq(space.norm(x - y))) / 2.0;
  const double rhs = sq(std::max(space.norm(x), space.norm(y)));
  return relative(rhs - lhs, rhs);
}

ViolationReport verify_schatten_inf(std::size_t side, const SamplingOptions& options, double tolerance) {
  const auto space = FiniteNormedSpace::schatten(kInfinity, side);
  return run_pair_campaign("schatten_inf", space, options, tolerance,
                           [&](const Vector& x, const Vector& y) { return schatten_inf_violation(space, x, y); });
}

double parallelogram_violation(const FiniteNormedSpace& space, const Vector& x, const Vector& y) {
  const double lhs = sq(space.norm(x + y)) + sq(space.norm(x - y));
  const double rhs = 2.0 * (sq(space.norm(x)) + sq(space.norm(y)));
  return std::abs(lhs - rhs);
}

ViolationReport verify_parallelogram(const FiniteNormedSpace& space, const SamplingOptions& options,
                                     double tolerance) {
  return run_pair_campaign("parallelogram", space, options, tolerance,
                           [&](const Vector& x, const Vector& y) { return parallelogram_violation(space, x, y); });
}

ViolationReport verify_endpoint_2(const FiniteNormedSpace& space, const SamplingOptions& options, double tolerance) {
  const auto p = space.exponent();
  if (!p || *p != 2.0) throw DomainError("verify_endpoint_2: requires an exponent-2 Lp, Euclid or Schatten space");
  auto report = verify_parallelogram(space, options, tolerance);
  report.check = "endpoint_2";
  return report;
}

Lemma42Result lemma42_limit_check(const NakanoSpec& spec, const BlockVector& x, double t,
                                  std::span<const std::size_t> schedule) {
  for (std::size_t n : schedule)
    if (x.contains(n)) throw DomainError("lemma42_limit_check: schedule meets supp(x) at block " + std::to_string(n));
  Lemma42Result r;
  r.target = modular_sum_norm_with_scalar(ConvexModular::nakano(spec), ModularPoint(x), t);
  for (std::size_t n : schedule) {
    const BlockVector moved = x + BlockVector(std::vector<BlockVector::Entry>{{n, t * block_unit(spec, n)}});
    r.blocks.push_back(n);
    r.gaps.push_back(std::abs(nakano_norm(spec, moved) - r.target));
  }
  return r;
}

}  // namespace modbanach
