#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modbanach/spaces.hpp"

namespace modbanach {

// Exponent sequence (p_n), n = 1, 2, ... evaluated lazily at requested
// indices. The formula families all tend to 2:
//   power:   p_n = 2 + a / n^s
//   log:     p_n = 2 + a / log(n + b)
//   loglog:  p_n = 2 + a / log(log(n + b))
class ExponentSequence {
 public:
  enum class Family { power, log, loglog };

  struct Constant {
    double p;
  };
  struct Explicit {
    std::vector<double> values;
  };
  struct Formula {
    Family family;
    double a;
    double b;
    double s;
  };
  using Kind = std::variant<Constant, Explicit, Formula>;

  static ExponentSequence constant(double p);
  static ExponentSequence list(std::vector<double> values);
  static ExponentSequence power(double a, double s = 1.0);
  static ExponentSequence log(double a, double b = 1.0);
  static ExponentSequence loglog(double a, double b = 3.0);

  const Kind& kind() const { return kind_; }
  bool is_formula() const { return std::holds_alternative<Formula>(kind_); }

  // p_n for n >= 1. Throws DomainError when p_n is undefined, non-finite or
  // below 1, and for indices past the end of an explicit list.
  double at(std::size_t n) const;

  // Upper and lower bounds of p_n over all n. For formula families this is
  // max/min over n <= horizon together with the limit 2; the families are
  // monotone once the logarithms are positive, so a moderate horizon
  // captures the extremes.
  double sup(std::size_t horizon = 1000) const;
  double inf(std::size_t horizon = 1000) const;

  // Explicit lists are finite; everything else is defined for all n.
  std::size_t length() const;

  std::string describe() const;

 private:
  explicit ExponentSequence(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// Block spaces E_n of a Nakano direct sum.
class BlockSequence {
 public:
  struct Uniform {
    FiniteNormedSpace space;
  };
  struct List {
    std::vector<FiniteNormedSpace> spaces;
  };
  // E_n = l_{p_n}^d or S_{p_n}^d, with the block exponent tied to the
  // Nakano exponent.
  struct MatchingLp {
    std::size_t d;
  };
  struct MatchingSchatten {
    std::size_t side;
  };
  using Kind = std::variant<Uniform, List, MatchingLp, MatchingSchatten>;

  static BlockSequence scalar();
  static BlockSequence uniform(FiniteNormedSpace space);
  static BlockSequence list(std::vector<FiniteNormedSpace> spaces);
  static BlockSequence matching_lp(std::size_t d);
  static BlockSequence matching_schatten(std::size_t side);

  const Kind& kind() const { return kind_; }
  bool is_scalar() const;

  FiniteNormedSpace at(std::size_t n, const ExponentSequence& exponents) const;

 private:
  explicit BlockSequence(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// The Nakano direct sum (sum_n E_n)_N with modular sum_n ||x(n)||^{p_n}.
struct NakanoSpec {
  ExponentSequence exponents;
  BlockSequence blocks;

  double exponent(std::size_t n) const { return exponents.at(n); }
  FiniteNormedSpace block(std::size_t n) const { return blocks.at(n, exponents); }
};

// Finitely supported element of a Nakano direct sum. Entries are kept sorted
// by block index, and indices are distinct.
class BlockVector {
 public:
  using Entry = std::pair<std::size_t, Vector>;

  BlockVector() = default;
  explicit BlockVector(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  bool contains(std::size_t n) const;
  const Vector* find(std::size_t n) const;
  std::size_t min_index() const;

  // Throws DimensionError unless every block vector matches its E_n.
  void validate(const NakanoSpec& spec) const;

  bool disjoint_from(const BlockVector& other) const;

  BlockVector& operator+=(const BlockVector& other);
  BlockVector& operator-=(const BlockVector& other);
  BlockVector& operator*=(double s);
  friend BlockVector operator+(BlockVector a, const BlockVector& b) { return a += b; }
  friend BlockVector operator-(BlockVector a, const BlockVector& b) { return a -= b; }
  friend BlockVector operator*(double s, BlockVector a) { return a *= s; }

 private:
  void combine(const BlockVector& other, double sign);
  std::vector<Entry> entries_;
};

}  // namespace modbanach
