#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "modbanach/exponents.hpp"
#include "modbanach/spaces.hpp"

namespace modbanach {

// A convex modular Theta. Every kind here is a finite sum of terms
// ||v_i||^{q_i}, which is what the Luxemburg solver works with.
class ConvexModular {
 public:
  struct Power {
    FiniteNormedSpace space;
    double q;
  };
  struct DirectSum {
    std::vector<ConvexModular> parts;
  };
  struct NakanoRef {
    NakanoSpec spec;
  };
  using Kind = std::variant<Power, DirectSum, NakanoRef>;

  static ConvexModular power(FiniteNormedSpace space, double q);
  static ConvexModular square(FiniteNormedSpace space) { return power(std::move(space), 2.0); }
  static ConvexModular direct_sum(std::vector<ConvexModular> parts);
  static ConvexModular nakano(NakanoSpec spec);

  const Kind& kind() const { return kind_; }

  // [q_min, q_max] over all terms the modular can produce.
  std::pair<double, double> exponent_range() const;

  // Number of coordinates a ModularPoint must carry (leaves, depth first).
  std::size_t leaf_count() const;

 private:
  explicit ConvexModular(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

using ModularCoordinate = std::variant<Vector, BlockVector>;

// Point of a modular space: one coordinate per leaf of the modular, in
// depth-first order. Atomic modulars take a single coordinate.
struct ModularPoint {
  std::vector<ModularCoordinate> coords;

  ModularPoint() = default;
  ModularPoint(std::initializer_list<Vector> parts) : coords(parts.begin(), parts.end()) {}
  explicit ModularPoint(std::vector<ModularCoordinate> c) : coords(std::move(c)) {}
  explicit ModularPoint(BlockVector x) { coords.emplace_back(std::move(x)); }

  ModularPoint scaled(double s) const;
};

struct ModularTerm {
  double magnitude;  // ||v_i|| >= 0
  double exponent;   // q_i >= 1
};

// Flattens Theta(x) into its terms. Throws DimensionError on shape mismatch.
std::vector<ModularTerm> modular_terms(const ConvexModular& theta, const ModularPoint& x);

double modular_eval(const ConvexModular& theta, const ModularPoint& x);
double modular_eval(std::span<const ModularTerm> terms, double scale = 1.0);

// C = 2^{q_max}, so that Theta(2x) <= C Theta(x).
double delta2_constant(const ConvexModular& theta);

struct LuxemburgOptions {
  double relative_width = 1e-13;
};

// The unique lambda > 0 with Theta(x / lambda) = 1, or 0 for x = 0.
double luxemburg_norm(const ConvexModular& theta, const ModularPoint& x, const LuxemburgOptions& options = {});
double luxemburg_norm(std::span<const ModularTerm> terms, const LuxemburgOptions& options = {});

// Norm of (x, t) in the modular direct sum M (+)_m K, where the scalar
// summand carries the modular |t|^2.
double modular_sum_norm_with_scalar(const ConvexModular& theta, const ModularPoint& x, double t,
                                    const LuxemburgOptions& options = {});

// (||x + 1||_m - 1) / (Theta(x) / 2), which tends to 1 as x -> 0.
// Requires 0 < Theta(x) <= 0.1.
double lemma43_ratio(const ConvexModular& theta, const ModularPoint& x);

// The modular space as a normed space over concatenated leaf coordinates.
// Only for modulars whose leaves are all Power kinds.
FiniteNormedSpace luxemburg_space(const ConvexModular& theta);

}  // namespace modbanach
