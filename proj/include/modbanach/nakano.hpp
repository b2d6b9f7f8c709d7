#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "modbanach/exponents.hpp"
#include "modbanach/modular.hpp"

namespace modbanach {

// sum over the support of ||x(n)||_{E_n}^{p_n}.
double nakano_modular(const NakanoSpec& spec, const BlockVector& x);

// Luxemburg norm of the Nakano modular.
double nakano_norm(const NakanoSpec& spec, const BlockVector& x, const LuxemburgOptions& options = {});

// |Theta(x + y) - Theta(x) - Theta(y)| for disjointly supported x, y.
double disjoint_additivity_check(const NakanoSpec& spec, const BlockVector& x, const BlockVector& y);

// Unit-norm vector of block n (first coordinate direction, rescaled).
Vector block_unit(const NakanoSpec& spec, std::size_t n);

// (Theta(x + t u_n), Theta(x) + |t|^{p_n}) for a block n outside supp(x).
std::pair<double, double> weakly_null_surrogate(const NakanoSpec& spec, const BlockVector& x, double t,
                                                std::size_t n);

struct HomogeneityDefect {
  double defect;  // |Theta(lambda x) - |lambda|^2 Theta(x)|
  double bound;   // max_k ||lambda|^{p_k} - |lambda|^2| * Theta(x)
};

// Requires supp(x) within blocks >= cutoff.
HomogeneityDefect homogeneity_defect(const NakanoSpec& spec, const BlockVector& x, double lambda,
                                     std::size_t cutoff);

// Terms t_n = c^{2 p_n / |p_n - 2|} of the series deciding whether the
// Nakano space is isomorphic to l_2. Terms underflow quickly, so the
// logarithms are carried alongside.
struct NakanoTerms {
  double c = 0.0;
  std::vector<std::size_t> index;
  std::vector<double> term;
  std::vector<double> log_term;
  // d log t / d log n between consecutive indices; the first entry repeats
  // the second (or is 0 for a single index).
  std::vector<double> log_slope;
};

NakanoTerms nakano_condition_terms(const ExponentSequence& exponents, double c, std::size_t count);
NakanoTerms nakano_condition_terms(const ExponentSequence& exponents, double c,
                                   std::span<const std::size_t> indices);

enum class SeriesVerdict { converges, diverges, inconclusive };
const char* to_string(SeriesVerdict v);

struct TailWindow {
  std::size_t first = 1000;
  std::size_t last = 1000000;
  std::size_t points = 64;  // log-spaced sample indices
};

std::vector<std::size_t> log_spaced_indices(const TailWindow& window);

struct NakanoConditionResult {
  struct PerC {
    double c;
    double fitted_slope;  // least-squares slope of log t_n against log n
    SeriesVerdict verdict;
  };
  std::vector<PerC> per_c;
  bool some_c_converges = false;  // false means "none in grid", not a proof
};

// Heuristic series test on the tail window: slope < -(1 + margin) means
// the terms decay faster than 1/n^{1+margin} (converges), slope > -(1 -
// margin) means divergence, anything between is inconclusive.
NakanoConditionResult nakano_condition_verdict(const ExponentSequence& exponents, std::span<const double> c_grid,
                                               const TailWindow& window = {}, double margin = 0.1);

}  // namespace modbanach
