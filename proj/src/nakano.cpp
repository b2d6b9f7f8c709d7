#include "modbanach/nakano.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "modbanach/error.hpp"

namespace modbanach {

double nakano_modular(const NakanoSpec& spec, const BlockVector& x) {
  x.validate(spec);
  double s = 0.0;
  for (const auto& [n, v] : x.entries()) {
    const double m = spec.block(n).norm(v);
    if (m > 0.0) s += std::pow(m, spec.exponent(n));
  }
  return s;
}

double nakano_norm(const NakanoSpec& spec, const BlockVector& x, const LuxemburgOptions& options) {
  return luxemburg_norm(ConvexModular::nakano(spec), ModularPoint(x), options);
}

double disjoint_additivity_check(const NakanoSpec& spec, const BlockVector& x, const BlockVector& y) {
  if (!x.disjoint_from(y)) throw DomainError("disjoint_additivity_check: supports overlap");
  return std::abs(nakano_modular(spec, x + y) - nakano_modular(spec, x) - nakano_modular(spec, y));
}

Vector block_unit(const NakanoSpec& spec, std::size_t n) {
  const auto block = spec.block(n);
  Vector e = Vector::unit(block.dim(), 0);
  return (1.0 / block.norm(e)) * e;
}

std::pair<double, double> weakly_null_surrogate(const NakanoSpec& spec, const BlockVector& x, double t,
                                                std::size_t n) {
  if (x.contains(n)) throw DomainError("weakly_null_surrogate: block " + std::to_string(n) + " is in supp(x)");
  const BlockVector shifted = x + BlockVector({{n, t * block_unit(spec, n)}});
  const double lhs = nakano_modular(spec, shifted);
  const double rhs = nakano_modular(spec, x) + std::pow(std::abs(t), spec.exponent(n));
  return {lhs, rhs};
}

HomogeneityDefect homogeneity_defect(const NakanoSpec& spec, const BlockVector& x, double lambda,
                                     std::size_t cutoff) {
  if (!x.empty() && x.min_index() < cutoff)
    throw DomainError("homogeneity_defect: support starts below the cutoff");
  const double theta = nakano_modular(spec, x);
  const double scaled = nakano_modular(spec, lambda * x);
  const double l = std::abs(lambda);
  double worst = 0.0;
  for (const auto& entry : x.entries())
    worst = std::max(worst, std::abs(std::pow(l, spec.exponent(entry.first)) - l * l));
  return {std::abs(scaled - l * l * theta), worst * theta};
}

NakanoTerms nakano_condition_terms(const ExponentSequence& exponents, double c, std::span<const std::size_t> indices) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("nakano_condition_terms: c must lie in (0, 1)");
  NakanoTerms out;
  out.c = c;
  const double log_c = std::log(c);
  for (std::size_t n : indices) {
    const double p = exponents.at(n);
    if (p == 2.0)
      throw DomainError("nakano_condition_terms: p_" + std::to_string(n) + " = 2 makes the term undefined");
    const double lt = (2.0 * p / std::abs(p - 2.0)) * log_c;
    out.index.push_back(n);
    out.log_term.push_back(lt);
    out.term.push_back(std::exp(lt));
  }
  const std::size_t m = out.index.size();
  out.log_slope.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double dn = std::log(static_cast<double>(out.index[i])) - std::log(static_cast<double>(out.index[i - 1]));
    out.log_slope[i] = (out.log_term[i] - out.log_term[i - 1]) / dn;
  }
  if (m > 1) out.log_slope[0] = out.log_slope[1];
  return out;
}

NakanoTerms nakano_condition_terms(const ExponentSequence& exponents, double c, std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) idx[i] = i + 1;
  return nakano_condition_terms(exponents, c, idx);
}

const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    case SeriesVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<std::size_t> log_spaced_indices(const TailWindow& w) {
  if (w.first == 0 || w.last < w.first || w.points < 2)
    throw DomainError("log_spaced_indices: need 1 <= first <= last and at least 2 points");
  std::set<std::size_t> picked;
  const double a = std::log(static_cast<double>(w.first));
  const double b = std::log(static_cast<double>(w.last));
  for (std::size_t i = 0; i < w.points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(w.points - 1);
    picked.insert(static_cast<std::size_t>(std::llround(std::exp(a + t * (b - a)))));
  }
  return {picked.begin(), picked.end()};
}

NakanoConditionResult nakano_condition_verdict(const ExponentSequence& exponents, std::span<const double> c_grid,
                                               const TailWindow& window, double margin) {
  if (c_grid.empty()) throw DomainError("nakano_condition_verdict: empty c grid");
  if (!(margin >= 0.0 && margin < 1.0)) throw DomainError("nakano_condition_verdict: margin must lie in [0, 1)");
  const auto idx = log_spaced_indices(window);
  if (idx.size() < 2) throw DomainError("nakano_condition_verdict: window yields fewer than 2 indices");

  NakanoConditionResult result;
  for (double c : c_grid) {
    const auto terms = nakano_condition_terms(exponents, c, idx);
    double mx = 0.0, my = 0.0;
    const std::size_t m = idx.size();
    for (std::size_t i = 0; i < m; ++i) {
      mx += std::log(static_cast<double>(idx[i]));
      my += terms.log_term[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dx = std::log(static_cast<double>(idx[i])) - mx;
      sxx += dx * dx;
      sxy += dx * (terms.log_term[i] - my);
    }
    const double slope = sxy / sxx;
    SeriesVerdict v = SeriesVerdict::inconclusive;
    if (slope < -(1.0 + margin)) v = SeriesVerdict::converges;
    else if (slope > -(1.0 - margin)) v = SeriesVerdict::diverges;
    result.per_c.push_back({c, slope, v});
    if (v == SeriesVerdict::converges) result.some_c_converges = true;
  }
  return result;
}

}  // namespace modbanach
