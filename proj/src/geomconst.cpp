#include "modbanach/geomconst.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modbanach/error.hpp"
#include "modbanach/nakano.hpp"
#include "modbanach/parallel.hpp"
#include "modbanach/rng.hpp"

namespace modbanach {

double jvn_ratio(const FiniteNormedSpace& space, const Vector& x, const Vector& y) {
  const double nx = space.norm(x);
  const double ny = space.norm(y);
  const double denom = 2.0 * (nx * nx + ny * ny);
  if (denom == 0.0) throw DomainError("jvn_ratio: (x, y) = (0, 0)");
  const double s = space.norm(x + y);
  const double d = space.norm(x - y);
  return (s * s + d * d) / denom;
}

namespace {

struct AscentResult {
  std::vector<double> z;
  double value = 0.0;
  std::size_t steps = 0;
  std::size_t evaluations = 0;
};

class PairObjective {
 public:
  explicit PairObjective(const FiniteNormedSpace& space) : space_(space), d_(space.dim()) {}

  std::size_t dim() const { return d_; }

  Vector x_of(const std::vector<double>& z) const { return Vector(std::vector<double>(z.begin(), z.begin() + d_)); }
  Vector y_of(const std::vector<double>& z) const { return Vector(std::vector<double>(z.begin() + d_, z.end())); }

  // Rescales z to ||x||^2 + ||y||^2 = 1; returns false for the zero pair.
  bool normalize(std::vector<double>& z) const {
    const double nx = space_.norm(x_of(z));
    const double ny = space_.norm(y_of(z));
    const double s = std::sqrt(nx * nx + ny * ny);
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    for (double& v : z) v /= s;
    return true;
  }

  double value(const std::vector<double>& z) const {
    ++evaluations;
    return jvn_ratio(space_, x_of(z), y_of(z));
  }

  mutable std::size_t evaluations = 0;

 private:
  const FiniteNormedSpace& space_;
  std::size_t d_;
};

AscentResult ascend(const PairObjective& f, std::vector<double> z, const JvnOptions& options) {
  AscentResult r;
  if (!f.normalize(z)) {
    r.z = std::move(z);
    return r;
  }
  double fz = f.value(z);
  double step = 1.0;
  std::vector<double> grad(z.size());
  std::vector<double> trial(z.size());
  for (std::size_t it = 0; it < options.max_steps; ++it) {
    double scale = 0.0;
    for (double v : z) scale = std::max(scale, std::abs(v));
    const double h = options.fd_step * std::max(scale, 1e-3);
    double gnorm = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double keep = z[i];
      z[i] = keep + h;
      const double up = f.value(z);
      z[i] = keep - h;
      const double down = f.value(z);
      z[i] = keep;
      grad[i] = (up - down) / (2.0 * h);
      gnorm += grad[i] * grad[i];
    }
    gnorm = std::sqrt(gnorm);
    if (!(gnorm > 1e-14)) break;

    bool improved = false;
    double t = std::min(1.0, 2.0 * step);
    for (int tries = 0; tries < 40; ++tries, t *= 0.5) {
      for (std::size_t i = 0; i < z.size(); ++i) trial[i] = z[i] + t * grad[i] / gnorm;
      if (!f.normalize(trial)) continue;
      const double ft = f.value(trial);
      if (ft > fz) {
        improved = ft - fz > 1e-15 * fz;
        z = trial;
        fz = ft;
        step = t;
        break;
      }
    }
    ++r.steps;
    if (!improved) break;
  }
  r.z = std::move(z);
  r.value = fz;
  return r;
}

std::vector<std::vector<double>> structured_starts(std::size_t d) {
  std::vector<std::vector<double>> starts;
  std::vector<double> z(2 * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) z[i] = 1.0;
  for (std::size_t i = 0; i < d; ++i) z[d + i] = (i % 2 == 0) ? 1.0 : -1.0;
  if (d > 1) starts.push_back(z);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      std::vector<double> w(2 * d, 0.0);
      w[i] = 1.0;
      w[d + j] = 1.0;
      starts.push_back(std::move(w));
    }
  return starts;
}

std::vector<double> gaussian_start(std::size_t d, std::uint64_t seed, std::size_t index) {
  Rng rng(seed, index);
  std::vector<double> z(2 * d);
  for (double& v : z) v = rng.gaussian();
  return z;
}

}  // namespace

JvnEstimate jvn_lower_bound(const FiniteNormedSpace& space, std::size_t budget, std::uint64_t seed,
                            const JvnOptions& options) {
  if (budget == 0) throw DomainError("jvn_lower_bound: budget must be at least 1");
  const std::size_t d = space.dim();
  const auto structured = structured_starts(d);

  // The last start is reserved for the (x+y, x-y) transform of the best pair.
  const std::size_t independent = budget > 1 ? budget - 1 : 1;
  std::vector<AscentResult> results(independent);
  std::vector<std::size_t> evals(independent, 0);
  parallel_for(independent, options.jobs, [&](std::size_t i) {
    PairObjective f(space);
    std::vector<double> z = i < structured.size() ? structured[i] : gaussian_start(d, seed, i);
    results[i] = ascend(f, std::move(z), options);
    results[i].evaluations = f.evaluations;
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < independent; ++i)
    if (results[i].value > results[best].value) best = i;

  JvnEstimate est;
  est.seed = seed;
  est.starts = independent;
  for (const auto& r : results) {
    est.ascent_steps += r.steps;
    est.evaluations += r.evaluations;
  }

  AscentResult winner = results[best];
  if (budget > 1) {
    std::vector<double> z(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      z[i] = winner.z[i] + winner.z[d + i];
      z[d + i] = winner.z[i] - winner.z[d + i];
    }
    PairObjective f(space);
    AscentResult transformed = ascend(f, std::move(z), options);
    est.starts += 1;
    est.ascent_steps += transformed.steps;
    est.evaluations += f.evaluations;
    if (transformed.value > winner.value) winner = std::move(transformed);
  }

  PairObjective f(space);
  est.witness.x = f.x_of(winner.z);
  est.witness.y = f.y_of(winner.z);
  est.witness.value = winner.value;
  est.lower_bound = winner.value;
  return est;
}

double jvn_upper_bound_clarkson(double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("jvn_upper_bound_clarkson: exponent must lie in [1, inf)");
  return std::pow(2.0, 2.0 * std::abs(0.5 - 1.0 / p));
}

double block_jvn_upper_bound(const FiniteNormedSpace& space) {
  if (space.dim() == 1) return 1.0;
  if (std::holds_alternative<EuclidKind>(space.kind())) return 1.0;
  const auto p = space.exponent();
  if (!p) throw DomainError("block_jvn_upper_bound: no closed-form bound for " + space.describe());
  if (std::holds_alternative<SchattenKind>(space.kind()) && std::get<SchattenKind>(space.kind()).side == 1) return 1.0;
  if (std::isinf(*p)) return 2.0;
  return jvn_upper_bound_clarkson(*p);
}

double duality_gap(double p, std::size_t d, std::size_t budget, std::uint64_t seed, const JvnOptions& options) {
  if (!(p > 1.0) || std::isinf(p)) throw DomainError("duality_gap: exponent must lie in (1, inf)");
  const auto a = jvn_lower_bound(FiniteNormedSpace::lp(p, d), budget, seed, options);
  const auto b = jvn_lower_bound(FiniteNormedSpace::lp(dual_exponent(p), d), budget, seed, options);
  return std::abs(a.lower_bound - b.lower_bound);
}

double alpha_of(double p, double a) { return std::pow(a, p / 2.0) * std::max(1.0, std::pow(2.0, p - 2.0)); }

AsymptoticsReport alpha_beta(std::span<const double> exponents, std::span<const double> jvn_values,
                             std::optional<double> tail_bound) {
  if (exponents.size() != jvn_values.size()) throw DimensionError("alpha_beta: list lengths differ");
  AsymptoticsReport r;
  r.exponents.assign(exponents.begin(), exponents.end());
  r.jvn.assign(jvn_values.begin(), jvn_values.end());
  r.tail_bound = tail_bound;
  const std::size_t n = exponents.size();
  r.alpha.resize(n);
  r.beta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = exponents[i];
    const double a = jvn_values[i];
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("alpha_beta: exponent outside [1, inf)");
    if (!(a >= 1.0 - 1e-9) || !std::isfinite(a)) throw DomainError("alpha_beta: a(E_n) below 1");
    r.alpha[i] = alpha_of(p, a);
  }
  double running = tail_bound.value_or(0.0);
  for (std::size_t i = n; i-- > 0;) {
    running = std::max(running, r.alpha[i]);
    r.beta[i] = running;
  }
  return r;
}

namespace {

double limit_block_bound(const NakanoSpec& spec) {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, BlockSequence::Uniform>) return block_jvn_upper_bound(k.space);
        else if constexpr (std::is_same_v<T, BlockSequence::MatchingLp>) return 1.0;
        else if constexpr (std::is_same_v<T, BlockSequence::MatchingSchatten>) return 1.0;
        else throw DomainError("alpha_beta_clarkson: block list has no limit");
      },
      spec.blocks.kind());
}

}  // namespace

AsymptoticsReport alpha_beta_clarkson(const NakanoSpec& spec, std::size_t horizon) {
  if (horizon == 0) throw DomainError("alpha_beta_clarkson: horizon must be at least 1");
  const std::size_t n = std::min(horizon, spec.exponents.length());
  std::vector<double> p(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = spec.exponent(i + 1);
    a[i] = block_jvn_upper_bound(spec.block(i + 1));
  }
  std::optional<double> tail;
  if (spec.exponents.is_formula()) {
    const double next = alpha_of(spec.exponent(n + 1), block_jvn_upper_bound(spec.block(n + 1)));
    tail = std::max(next, alpha_of(2.0, limit_block_bound(spec)));
  } else if (std::holds_alternative<ExponentSequence::Constant>(spec.exponents.kind())) {
    tail = alpha_of(spec.exponent(1), limit_block_bound(spec));
  }
  return alpha_beta(p, a, tail);
}

double tail_parallelogram_ratio(const NakanoSpec& spec, const BlockVector& x, const BlockVector& y) {
  const double denom = 2.0 * (nakano_modular(spec, x) + nakano_modular(spec, y));
  if (denom == 0.0) throw DomainError("tail_parallelogram_ratio: x = y = 0");
  return (nakano_modular(spec, x + y) + nakano_modular(spec, x - y)) / denom;
}

TailParallelogramReport tail_parallelogram_defect(const NakanoSpec& spec, std::size_t cutoff, std::size_t samples,
                                                  std::uint64_t seed, std::size_t window, std::size_t jobs) {
  if (samples == 0) throw DomainError("tail_parallelogram_defect: empty sample set");
  if (cutoff == 0 || window == 0) throw DomainError("tail_parallelogram_defect: cutoff and window must be positive");

  std::vector<FiniteNormedSpace> blocks;
  for (std::size_t k = 0; k < window; ++k) blocks.push_back(spec.block(cutoff + k));

  auto draw = [&](Rng& rng) {
    std::vector<BlockVector::Entry> entries;
    for (std::size_t k = 0; k < window; ++k) {
      // Blocks drop out at random so that sparse configurations get sampled.
      if (rng.uniform() < 0.25) continue;
      std::vector<double> v(blocks[k].dim());
      const double scale = std::exp(rng.gaussian());
      for (double& e : v) e = scale * rng.gaussian();
      entries.emplace_back(cutoff + k, Vector(std::move(v)));
    }
    return BlockVector(std::move(entries));
  };

  constexpr std::size_t kBatch = 256;
  const std::size_t batches = (samples + kBatch - 1) / kBatch;
  struct Best {
    double ratio = -1.0;
    BlockVector x, y;
  };
  std::vector<Best> best(batches);
  parallel_for(batches, jobs, [&](std::size_t b) {
    Rng rng(seed, b);
    const std::size_t end = std::min(samples, (b + 1) * kBatch);
    for (std::size_t s = b * kBatch; s < end; ++s) {
      BlockVector x = draw(rng);
      BlockVector y = draw(rng);
      if (x.empty() && y.empty()) continue;
      const double r = tail_parallelogram_ratio(spec, x, y);
      if (r > best[b].ratio) best[b] = {r, std::move(x), std::move(y)};
    }
  });

  TailParallelogramReport report;
  report.samples = samples;
  report.max_ratio = -1.0;
  for (auto& b : best)
    if (b.ratio > report.max_ratio) {
      report.max_ratio = b.ratio;
      report.worst_x = std::move(b.x);
      report.worst_y = std::move(b.y);
    }
  const auto ab = alpha_beta_clarkson(spec, std::max<std::size_t>(1000, cutoff + window));
  report.beta = ab.beta[cutoff - 1];
  return report;
}

}  // namespace modbanach
