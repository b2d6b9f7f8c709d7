#include "modbanach/isolab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "modbanach/error.hpp"
#include "modbanach/parallel.hpp"
#include "modbanach/rng.hpp"

namespace modbanach {

namespace {

Vector slice(const Vector& x, std::size_t first, std::size_t last) {
  const auto re = x.real();
  return Vector(std::vector<double>(re.begin() + first, re.begin() + last));
}

double sq(double v) { return v * v; }

void require_real(const Vector& x, const char* who) {
  if (x.is_complex()) throw DomainError(std::string(who) + ": real points only");
}

}  // namespace

LinearMap LinearMap::general(Matrix matrix, FiniteNormedSpace domain, FiniteNormedSpace codomain) {
  if (matrix.rows() != codomain.dim() || matrix.cols() != domain.dim())
    throw DimensionError("LinearMap: matrix is " + std::to_string(matrix.rows()) + "x" +
                         std::to_string(matrix.cols()) + ", spaces need " + std::to_string(codomain.dim()) + "x" +
                         std::to_string(domain.dim()));
  for (double v : matrix.data())
    if (!std::isfinite(v)) throw DomainError("LinearMap: non-finite matrix entry");
  const std::size_t split = codomain.dim();
  return LinearMap{std::move(matrix), std::move(domain), std::move(codomain), split};
}

LinearMap LinearMap::embedding(Matrix matrix, FiniteNormedSpace e0, std::size_t h_dim) {
  auto codomain = FiniteNormedSpace::two_sum({e0, FiniteNormedSpace::euclid(h_dim)});
  auto t = general(std::move(matrix), e0, std::move(codomain));
  t.split = t.domain.dim();
  return t;
}

LinearMap LinearMap::inclusion(FiniteNormedSpace e0, std::size_t h_dim, std::optional<Matrix> a) {
  const std::size_t d = e0.dim();
  const Matrix iso = a ? std::move(*a) : Matrix::identity(d);
  if (iso.rows() != d || iso.cols() != d) throw DimensionError("inclusion: isometry must be square of the E0 size");
  Matrix m(d + h_dim, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = iso(i, j);
  return embedding(std::move(m), std::move(e0), h_dim);
}

Vector LinearMap::apply(const Vector& x) const {
  require_real(x, "LinearMap::apply");
  if (x.dim() != domain.dim()) throw DimensionError("LinearMap::apply: point dimension mismatch");
  return Vector(matrix.apply(x.real()));
}

Vector LinearMap::e0_part(const Vector& tx) const { return slice(tx, 0, split); }
Vector LinearMap::h_part(const Vector& tx) const { return slice(tx, split, tx.dim()); }

Matrix signed_permutation(std::span<const std::size_t> perm, std::span<const double> signs) {
  const std::size_t d = perm.size();
  if (signs.size() != d) throw DimensionError("signed_permutation: sign count mismatch");
  std::vector<bool> seen(d, false);
  Matrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    if (perm[j] >= d || seen[perm[j]]) throw DomainError("signed_permutation: not a permutation");
    if (std::abs(signs[j]) != 1.0) throw DomainError("signed_permutation: signs must be +-1");
    seen[perm[j]] = true;
    m(perm[j], j) = signs[j];
  }
  return m;
}

std::vector<Vector> sample_suite(const FiniteNormedSpace& space, std::size_t gaussian, std::uint64_t seed) {
  const std::size_t d = space.dim();
  std::vector<Vector> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(Vector::unit(d, i));
  Vector ones = Vector::zeros(d), alt = Vector::zeros(d);
  for (std::size_t i = 0; i < d; ++i) {
    ones[i] = 1.0;
    alt[i] = i % 2 == 0 ? 1.0 : -1.0;
  }
  out.push_back(ones);
  if (d > 1) out.push_back(alt);
  for (std::size_t i = 0; i < d && i < 6; ++i)
    for (std::size_t j = i + 1; j < d && j < 6; ++j) {
      out.push_back(Vector::unit(d, i) + Vector::unit(d, j));
      out.push_back(Vector::unit(d, i) - Vector::unit(d, j));
    }
  for (std::size_t s = 0; s < gaussian; ++s) {
    Rng rng(seed, s);
    std::vector<double> re(d);
    for (double& v : re) v = rng.gaussian();
    out.emplace_back(std::move(re));
  }
  return out;
}

IsometryCheck is_isometric_embedding(const LinearMap& t, std::size_t samples, std::uint64_t seed, double tolerance,
                                     std::size_t jobs) {
  const auto points = sample_suite(t.domain, samples, seed);
  std::vector<double> dev(points.size(), 0.0);
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    const double nx = t.domain.norm(points[i]);
    if (nx == 0.0) return;
    dev[i] = std::abs(t.codomain.norm(t.apply(points[i])) - nx) / nx;
  });
  IsometryCheck r;
  r.max_deviation = *std::max_element(dev.begin(), dev.end());
  r.isometric = r.max_deviation <= tolerance;
  return r;
}

double TwoProjectionCandidate::apply_phi(const Vector& x) const {
  if (x.dim() != phi.size()) throw DimensionError("two-projection: functional size mismatch");
  const auto re = x.real();
  return std::inner_product(re.begin(), re.end(), phi.begin(), 0.0);
}

void TwoProjectionCandidate::validate(const FiniteNormedSpace& space) const {
  if (xi.dim() != space.dim() || phi.size() != space.dim())
    throw DimensionError("two-projection: candidate does not match the space dimension");
  require_real(xi, "two-projection");
  if (std::abs(space.norm(xi) - 1.0) > 1e-10) throw DomainError("two-projection: ||xi|| must be 1");
  if (std::abs(apply_phi(xi) - 1.0) > 1e-10) throw DomainError("two-projection: phi(xi) must be 1");
}

namespace {

// Signed residual, normalized by ||x||^2; 0 at x = 0.
double signed_residual(const FiniteNormedSpace& space, const Vector& xi, std::span<const double> phi,
                       double xi_norm, const Vector& x) {
  const double nx2 = sq(space.norm(x));
  if (nx2 == 0.0) return 0.0;
  const auto re = x.real();
  const double f = std::inner_product(re.begin(), re.end(), phi.begin(), 0.0);
  const double rest = sq(space.norm(x - f * xi));
  return (nx2 - (sq(f) * sq(xi_norm) + rest)) / nx2;
}

}  // namespace

double two_projection_residual(const FiniteNormedSpace& space, const TwoProjectionCandidate& cand, const Vector& x) {
  return std::abs(signed_residual(space, cand.xi, cand.phi, space.norm(cand.xi), x));
}

double two_projection_violation(const FiniteNormedSpace& space, const TwoProjectionCandidate& cand,
                                std::size_t samples, std::uint64_t seed) {
  cand.validate(space);
  double worst = 0.0;
  for (const auto& x : sample_suite(space, samples, seed))
    worst = std::max(worst, two_projection_residual(space, cand, x));
  return worst;
}

namespace {

// Candidate from raw parameters: xi = u / ||u||, phi = w / w(xi).
std::optional<TwoProjectionCandidate> decode(const FiniteNormedSpace& space, std::span<const double> params) {
  const std::size_t d = space.dim();
  Vector u(std::vector<double>(params.begin(), params.begin() + d));
  const double nu = space.norm(u);
  if (!(nu > 0.0) || !std::isfinite(nu)) return std::nullopt;
  TwoProjectionCandidate c{(1.0 / nu) * u, std::vector<double>(params.begin() + d, params.end())};
  const double wx = c.apply_phi(c.xi);
  if (!(std::abs(wx) > 1e-12)) return std::nullopt;
  for (double& v : c.phi) v /= wx;
  return c;
}

constexpr double kPenalty = 1e6;

// Smooth objective for the descent: mean squared signed residual.
double mean_square(const FiniteNormedSpace& space, std::span<const Vector> set, std::span<const double> params) {
  auto c = decode(space, params);
  if (!c) return kPenalty;
  const double xi_norm = space.norm(c->xi);
  double acc = 0.0;
  for (const auto& x : set) acc += sq(signed_residual(space, c->xi, c->phi, xi_norm, x));
  const double v = acc / static_cast<double>(set.size());
  return std::isfinite(v) ? v : kPenalty;
}

double max_residual(const FiniteNormedSpace& space, std::span<const Vector> set, const TwoProjectionCandidate& c) {
  double worst = 0.0;
  for (const auto& x : set) worst = std::max(worst, two_projection_residual(space, c, x));
  return worst;
}

std::vector<double> descend(const FiniteNormedSpace& space, std::span<const Vector> set, std::vector<double> p) {
  constexpr std::size_t kSteps = 200;
  constexpr double kFd = 1e-6;
  double f = mean_square(space, set, p);
  double step = 0.5;
  std::vector<double> g(p.size()), trial(p.size());
  for (std::size_t it = 0; it < kSteps && f > 1e-30; ++it) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double keep = p[k];
      p[k] = keep + kFd;
      const double fp = mean_square(space, set, p);
      p[k] = keep - kFd;
      const double fm = mean_square(space, set, p);
      p[k] = keep;
      g[k] = (fp - fm) / (2.0 * kFd);
    }
    const double gn = std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
    if (!(gn > 0.0) || !std::isfinite(gn)) break;
    bool moved = false;
    for (int halving = 0; halving < 40; ++halving) {
      for (std::size_t k = 0; k < p.size(); ++k) trial[k] = p[k] - step * g[k] / gn;
      const double ft = mean_square(space, set, trial);
      if (ft < f) {
        p.swap(trial);
        f = ft;
        moved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return p;
}

}  // namespace

SummandSearch find_one_dim_two_summand(const FiniteNormedSpace& space, std::size_t budget, std::uint64_t seed,
                                       std::size_t jobs) {
  if (budget == 0) throw DomainError("find_one_dim_two_summand: budget must be >= 1");
  const std::size_t d = space.dim();
  const auto set = sample_suite(space, 48, derive_seed(seed, 0x5eedULL));

  std::vector<std::vector<double>> starts;
  for (std::size_t i = 0; i < d && starts.size() < budget; ++i) {
    std::vector<double> p(2 * d, 0.0);
    p[i] = 1.0;
    p[d + i] = 1.0;
    starts.push_back(std::move(p));
  }
  for (std::size_t s = starts.size(); s < budget; ++s) {
    Rng rng(seed, s);
    std::vector<double> p(2 * d);
    for (double& v : p) v = rng.gaussian();
    starts.push_back(std::move(p));
  }

  std::vector<double> score(starts.size(), kInfinity);
  std::vector<std::optional<TwoProjectionCandidate>> found(starts.size());
  parallel_for(starts.size(), jobs, [&](std::size_t i) {
    auto c = decode(space, starts[i]);
    // Exact summands among the coordinate starts need no descent.
    if (!c || max_residual(space, set, *c) > kSummandThreshold) c = decode(space, descend(space, set, starts[i]));
    if (!c) return;
    score[i] = max_residual(space, set, *c);
    found[i] = std::move(c);
  });

  SummandSearch r;
  r.starts = starts.size();
  r.residual = kInfinity;
  std::size_t best = starts.size();
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (score[i] < r.residual) {
      r.residual = score[i];
      best = i;
    }
  if (best < starts.size() && r.residual <= kSummandThreshold) r.candidate = found[best];
  return r;
}

LinearMap build_counterexample_embedding(const FiniteNormedSpace& e1, std::size_t h_dim) {
  if (h_dim == 0) throw DomainError("build_counterexample_embedding: H must have dimension >= 1");
  const std::size_t d1 = e1.dim();
  auto e0 = FiniteNormedSpace::two_sum({e1, FiniteNormedSpace::euclid(1)});
  Matrix m(d1 + 1 + h_dim, d1 + 1);
  for (std::size_t i = 0; i < d1; ++i) m(i, i) = 1.0;
  m(d1 + 1, d1) = 1.0;  // xi0 -> first unit of H
  return LinearMap::embedding(std::move(m), std::move(e0), h_dim);
}

IterationTrace pt_iterate(const LinearMap& t, const Vector& x, std::size_t n_max) {
  if (t.split != t.domain.dim())
    throw DimensionError("pt_iterate: the E0 part of the codomain must have the domain's dimension");
  IterationTrace tr;
  const double nx2 = sq(t.domain.norm(x));
  Vector y = x;
  double residual_sum = 0.0;
  tr.norms.push_back(std::sqrt(nx2));
  tr.telescoping_defects.push_back(0.0);
  for (std::size_t n = 0; n < n_max; ++n) {
    const Vector ty = t.apply(y);
    const Vector h = t.h_part(ty);
    const auto hr = h.real();
    const double r = std::inner_product(hr.begin(), hr.end(), hr.begin(), 0.0);
    y = t.e0_part(ty);
    const double ny = t.domain.norm(y);
    residual_sum += r;
    tr.residuals.push_back(r);
    tr.norms.push_back(ny);
    tr.telescoping_defects.push_back(std::abs(nx2 - sq(ny) - residual_sum));
  }
  return tr;
}

const char* to_string(LimitStatus s) {
  switch (s) {
    case LimitStatus::passes: return "passes";
    case LimitStatus::fails: return "fails";
    case LimitStatus::non_cauchy: return "non_cauchy";
  }
  return "?";
}

LimitIsometryReport limit_isometry_check(const LinearMap& t, std::span<const Vector> samples, std::size_t n_max,
                                         double tolerance, std::size_t summand_budget, std::uint64_t seed) {
  if (n_max < 5) throw DomainError("limit_isometry_check: n_max must be >= 5 for the Cauchy check");
  if (samples.empty()) throw DomainError("limit_isometry_check: empty sample set");
  LimitIsometryReport r;
  r.all_pass = true;
  for (const auto& x : samples) {
    const auto tr = pt_iterate(t, x, n_max);
    LimitIsometryReport::PerSample s;
    s.norm = tr.norms.front();
    s.limit_norm = tr.norms.back();
    s.cauchy_gap = std::abs(tr.norms[n_max] - tr.norms[n_max - 5]);
    if (s.cauchy_gap > kCauchyTolerance)
      s.status = LimitStatus::non_cauchy;
    else
      s.status = std::abs(s.limit_norm - s.norm) <= tolerance * std::max(s.norm, 1.0) ? LimitStatus::passes
                                                                                       : LimitStatus::fails;
    r.all_pass = r.all_pass && s.status == LimitStatus::passes;
    r.samples.push_back(s);
  }
  if (!r.all_pass) return r;
  r.summand_found = find_one_dim_two_summand(t.domain, summand_budget, seed).candidate.has_value();
  if (r.summand_found) return r;
  double worst = 0.0;
  for (const auto& x : samples) {
    const Vector tx = t.apply(x);
    worst = std::max(worst, std::abs(t.domain.norm(t.e0_part(tx)) - t.codomain.norm(tx)) /
                                std::max(t.domain.norm(x), 1.0));
  }
  r.pt_vs_t_deviation = worst;
  r.pt_equals_t = worst <= tolerance;
  return r;
}

RangeIntersection range_intersection_dim(const LinearMap& t, double tolerance) {
  RangeIntersection r;
  if (!t.has_split()) return r;
  const Matrix q = orthonormal_columns(t.matrix);
  const std::size_t rows = t.matrix.rows();
  const std::size_t rank = q.cols();
  if (rank == 0) return r;
  // Gram of the H rows of the orthonormal basis; its eigenvalues are the
  // squared cosines of the principal angles between the range and H.
  Matrix g(rank, rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      double acc = 0.0;
      for (std::size_t k = t.split; k < rows; ++k) acc += q(k, i) * q(k, j);
      g(i, j) = acc;
    }
  for (double e : symmetric_eigenvalues(g)) {
    const double c = std::sqrt(std::clamp(e, 0.0, 1.0));
    r.cosines.push_back(c);
    if (c >= 1.0 - tolerance)
      ++r.dim;
    else if (c >= 1.0 - 100.0 * tolerance)
      r.ambiguous = true;
  }
  return r;
}

BlockCheck lemma51_block_check(const ConvexModular& theta, const Matrix& u, const Matrix& v,
                               const std::optional<Matrix>& coupling, std::size_t samples, std::uint64_t seed) {
  const auto* sum = std::get_if<ConvexModular::DirectSum>(&theta.kind());
  if (!sum || sum->parts.size() != 2) throw DomainError("lemma51_block_check: modular must be a sum of two parts");
  const auto* pe = std::get_if<ConvexModular::Power>(&sum->parts[0].kind());
  const auto* pf = std::get_if<ConvexModular::Power>(&sum->parts[1].kind());
  if (!pe || !pf) throw DomainError("lemma51_block_check: both parts must be power modulars");
  const std::size_t de = pe->space.dim(), df = pf->space.dim();
  if (u.rows() != de || u.cols() != de) throw DimensionError("lemma51_block_check: U must be square on E");
  if (v.rows() != df || v.cols() != df) throw DimensionError("lemma51_block_check: V must be square on F");
  if (coupling && (coupling->rows() != de || coupling->cols() != df))
    throw DimensionError("lemma51_block_check: coupling must map F into E");

  Matrix m(de + df, de + df);
  for (std::size_t i = 0; i < de; ++i)
    for (std::size_t j = 0; j < de; ++j) m(i, j) = u(i, j);
  for (std::size_t i = 0; i < df; ++i)
    for (std::size_t j = 0; j < df; ++j) m(de + i, de + j) = v(i, j);
  if (coupling)
    for (std::size_t i = 0; i < de; ++i)
      for (std::size_t j = 0; j < df; ++j) m(i, de + j) = (*coupling)(i, j);

  const auto x = luxemburg_space(theta);
  const auto t = LinearMap::general(std::move(m), x, x);
  BlockCheck r;
  const auto iso = is_isometric_embedding(t, samples, seed, 1e-10);
  r.isometric = iso.isometric;
  r.isometry_deviation = iso.max_deviation;

  for (const auto& f : sample_suite(pf->space, samples, derive_seed(seed, 1))) {
    std::vector<double> full(de + df, 0.0);
    std::copy(f.real().begin(), f.real().end(), full.begin() + de);
    const Vector tf = t.apply(Vector(std::move(full)));
    const double nf = pf->space.norm(f);
    if (nf > 0.0) r.e_component = std::max(r.e_component, pe->space.norm(slice(tf, 0, de)) / nf);
  }
  r.holds = r.isometric && r.e_component <= 1e-12;
  return r;
}

}  // namespace modbanach
