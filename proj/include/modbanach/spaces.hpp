#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "modbanach/linalg.hpp"

namespace modbanach {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// A point of a finite-dimensional space. Entries are real unless an
// imaginary part is attached; only Schatten spaces accept complex points.
class Vector {
 public:
  Vector() = default;
  Vector(std::initializer_list<double> re) : re_(re) {}
  explicit Vector(std::vector<double> re) : re_(std::move(re)) {}
  Vector(std::vector<double> re, std::vector<double> im);

  static Vector zeros(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }
  static Vector unit(std::size_t dim, std::size_t index);

  std::size_t dim() const { return re_.size(); }
  bool is_complex() const { return !im_.empty(); }
  bool all_finite() const;
  bool is_zero() const;

  double operator[](std::size_t i) const { return re_[i]; }
  double& operator[](std::size_t i) { return re_[i]; }
  std::complex<double> entry(std::size_t i) const { return {re_[i], im_.empty() ? 0.0 : im_[i]}; }

  std::span<const double> real() const { return re_; }
  std::span<const double> imag() const { return im_; }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> re_;
  std::vector<double> im_;
};

class FiniteNormedSpace;

using NormOracle = std::function<double(const Vector&)>;

struct LpKind {
  double p;
  std::size_t d;
};
struct SchattenKind {
  double p;
  std::size_t side;
};
struct EuclidKind {
  std::size_t d;
};
struct CustomKind {
  std::size_t d;
  NormOracle oracle;
  std::string label;
};
// Hilbertian (l_2) direct sum of its parts; coordinates are concatenated.
struct TwoSumKind {
  std::vector<FiniteNormedSpace> parts;
};

// Immutable descriptor of a concrete finite-dimensional normed space.
class FiniteNormedSpace {
 public:
  using Kind = std::variant<LpKind, SchattenKind, EuclidKind, CustomKind, TwoSumKind>;

  static FiniteNormedSpace lp(double p, std::size_t d);
  static FiniteNormedSpace schatten(double p, std::size_t side);
  static FiniteNormedSpace euclid(std::size_t d);
  static FiniteNormedSpace custom(std::size_t d, NormOracle oracle, std::string label = "custom");
  static FiniteNormedSpace two_sum(std::vector<FiniteNormedSpace> parts);

  const Kind& kind() const { return *kind_; }

  // Ambient (real) coordinate count; d*d for Schatten.
  std::size_t dim() const { return dim_; }

  double norm(const Vector& x) const;

  // The exponent p for Lp and Schatten, 2 for Euclid, none otherwise.
  std::optional<double> exponent() const;

  bool accepts_complex() const { return std::holds_alternative<SchattenKind>(*kind_); }
  bool is_schatten() const { return std::holds_alternative<SchattenKind>(*kind_); }
  std::string describe() const;

 private:
  explicit FiniteNormedSpace(Kind kind);

  std::shared_ptr<const Kind> kind_;
  std::size_t dim_ = 0;
};

double norm(const FiniteNormedSpace& space, const Vector& x);

// Nonincreasing singular values of a square matrix, as square roots of the
// eigenvalues of m^* m.
std::vector<double> singular_values(const Matrix& m);
std::vector<double> singular_values(const ComplexMatrix& m);

// Reads a Schatten point (row-major side x side) as a matrix.
ComplexMatrix as_matrix(const Vector& x, std::size_t side);

// Conjugate exponent p' with 1/p + 1/p' = 1; 1 <-> infinity.
double dual_exponent(double p);

// d^{|1/2 - 1/p|}, the Banach-Mazur distance from l_p^d to l_2^d.
double banach_mazur_lp_vs_hilbert(double p, std::size_t d);

// l_p norm of a list of nonnegative magnitudes, overflow-safe.
double lp_norm_of_magnitudes(std::span<const double> values, double p);

}  // namespace modbanach
