#include "modbanach/modular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modbanach/error.hpp"

namespace modbanach {

ConvexModular ConvexModular::power(FiniteNormedSpace space, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("ConvexModular::power: exponent must lie in [1, inf)");
  return ConvexModular(Power{std::move(space), q});
}

ConvexModular ConvexModular::direct_sum(std::vector<ConvexModular> parts) {
  if (parts.empty()) throw DomainError("ConvexModular::direct_sum: at least one part is required");
  return ConvexModular(DirectSum{std::move(parts)});
}

ConvexModular ConvexModular::nakano(NakanoSpec spec) { return ConvexModular(NakanoRef{std::move(spec)}); }

std::pair<double, double> ConvexModular::exponent_range() const {
  return std::visit(
      [](const auto& k) -> std::pair<double, double> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Power>) {
          return {k.q, k.q};
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          std::pair<double, double> r{kInfinity, 0.0};
          for (const auto& part : k.parts) {
            const auto pr = part.exponent_range();
            r.first = std::min(r.first, pr.first);
            r.second = std::max(r.second, pr.second);
          }
          return r;
        } else {
          return {k.spec.exponents.inf(), k.spec.exponents.sup()};
        }
      },
      kind_);
}

std::size_t ConvexModular::leaf_count() const {
  if (const auto* s = std::get_if<DirectSum>(&kind_)) {
    std::size_t n = 0;
    for (const auto& part : s->parts) n += part.leaf_count();
    return n;
  }
  return 1;
}

ModularPoint ModularPoint::scaled(double s) const {
  ModularPoint out = *this;
  for (auto& c : out.coords) std::visit([s](auto& v) { v *= s; }, c);
  return out;
}

namespace {

void collect_terms(const ConvexModular& theta, const ModularPoint& x, std::size_t& cursor,
                   std::vector<ModularTerm>& out) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConvexModular::DirectSum>) {
          for (const auto& part : k.parts) collect_terms(part, x, cursor, out);
        } else {
          if (cursor >= x.coords.size()) throw DimensionError("modular: point has too few coordinates");
          const auto& coord = x.coords[cursor++];
          if constexpr (std::is_same_v<T, ConvexModular::Power>) {
            const auto* v = std::get_if<Vector>(&coord);
            if (!v) throw DimensionError("modular: power leaf expects a Vector coordinate");
            out.push_back({k.space.norm(*v), k.q});
          } else {
            const auto* bv = std::get_if<BlockVector>(&coord);
            if (!bv) throw DimensionError("modular: Nakano leaf expects a BlockVector coordinate");
            bv->validate(k.spec);
            for (const auto& [n, v] : bv->entries()) out.push_back({k.spec.block(n).norm(v), k.spec.exponent(n)});
          }
        }
      },
      theta.kind());
}

}  // namespace

std::vector<ModularTerm> modular_terms(const ConvexModular& theta, const ModularPoint& x) {
  std::vector<ModularTerm> terms;
  std::size_t cursor = 0;
  collect_terms(theta, x, cursor, terms);
  if (cursor != x.coords.size()) throw DimensionError("modular: point has too many coordinates");
  return terms;
}

double modular_eval(std::span<const ModularTerm> terms, double scale) {
  double s = 0.0;
  for (const auto& t : terms)
    if (t.magnitude > 0.0) s += std::pow(t.magnitude / scale, t.exponent);
  return s;
}

double modular_eval(const ConvexModular& theta, const ModularPoint& x) {
  const auto terms = modular_terms(theta, x);
  return modular_eval(terms);
}

double delta2_constant(const ConvexModular& theta) {
  const double q_max = theta.exponent_range().second;
  if (!std::isfinite(q_max)) throw DomainError("delta2_constant: unbounded exponents");
  return std::pow(2.0, q_max);
}

double luxemburg_norm(std::span<const ModularTerm> terms, const LuxemburgOptions& options) {
  double top = 0.0;
  double q_min = kInfinity;
  double q_max = 0.0;
  for (const auto& t : terms) {
    if (!std::isfinite(t.magnitude)) throw NumericalError("luxemburg_norm: non-finite modular term");
    if (t.magnitude == 0.0) continue;
    top = std::max(top, t.magnitude);
    q_min = std::min(q_min, t.exponent);
    q_max = std::max(q_max, t.exponent);
  }
  if (top == 0.0) return 0.0;

  // Work with lambda' = lambda / top so that every scaled magnitude is <= 1
  // and Theta' cannot overflow.
  const double theta1 = modular_eval(terms, top);
  if (q_min == q_max) return top * std::pow(theta1, 1.0 / q_min);

  // lambda -> Theta(x / lambda) is strictly decreasing and squeezed between
  // Theta(x) lambda^{-q_max} and Theta(x) lambda^{-q_min} on either side of 1.
  const double a = std::pow(theta1, 1.0 / q_max);
  const double b = std::pow(theta1, 1.0 / q_min);
  double lo = std::min(a, b) * (1.0 - 1e-12);
  double hi = std::max(a, b) * (1.0 + 1e-12);
  while (modular_eval(terms, top * lo) < 1.0) lo *= 0.5;
  while (modular_eval(terms, top * hi) > 1.0) hi *= 2.0;

  while (hi - lo > options.relative_width * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (modular_eval(terms, top * mid) > 1.0) lo = mid;
    else hi = mid;
  }
  return top * 0.5 * (lo + hi);
}

double luxemburg_norm(const ConvexModular& theta, const ModularPoint& x, const LuxemburgOptions& options) {
  const auto terms = modular_terms(theta, x);
  return luxemburg_norm(terms, options);
}

double modular_sum_norm_with_scalar(const ConvexModular& theta, const ModularPoint& x, double t,
                                    const LuxemburgOptions& options) {
  if (!std::isfinite(t)) throw DomainError("modular_sum_norm_with_scalar: non-finite scalar");
  auto terms = modular_terms(theta, x);
  terms.push_back({std::abs(t), 2.0});
  return luxemburg_norm(terms, options);
}

double lemma43_ratio(const ConvexModular& theta, const ModularPoint& x) {
  const double value = modular_eval(theta, x);
  if (value == 0.0) throw DomainError("lemma43_ratio: Theta(x) = 0");
  if (value > 0.1) throw DomainError("lemma43_ratio: Theta(x) must be at most 0.1");
  const double n = modular_sum_norm_with_scalar(theta, x, 1.0);
  return (n - 1.0) / (0.5 * value);
}

namespace {

void collect_leaf_spaces(const ConvexModular& theta, std::vector<FiniteNormedSpace>& out) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConvexModular::Power>) {
          out.push_back(k.space);
        } else if constexpr (std::is_same_v<T, ConvexModular::DirectSum>) {
          for (const auto& part : k.parts) collect_leaf_spaces(part, out);
        } else {
          throw DomainError("luxemburg_space: Nakano leaves have no fixed coordinate layout");
        }
      },
      theta.kind());
}

}  // namespace

FiniteNormedSpace luxemburg_space(const ConvexModular& theta) {
  std::vector<FiniteNormedSpace> leaves;
  collect_leaf_spaces(theta, leaves);
  std::size_t dim = 0;
  for (const auto& s : leaves) dim += s.dim();
  auto oracle = [theta, leaves](const Vector& x) {
    ModularPoint point;
    std::size_t offset = 0;
    for (const auto& s : leaves) {
      std::vector<double> chunk(x.real().begin() + offset, x.real().begin() + offset + s.dim());
      point.coords.emplace_back(Vector(std::move(chunk)));
      offset += s.dim();
    }
    return luxemburg_norm(theta, point);
  };
  return FiniteNormedSpace::custom(dim, std::move(oracle), "modular_sum");
}

}  // namespace modbanach
