#include "modbanach/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modbanach/error.hpp"

namespace modbanach {

Vector::Vector(std::vector<double> re, std::vector<double> im) : re_(std::move(re)), im_(std::move(im)) {
  if (!im_.empty() && im_.size() != re_.size())
    throw DimensionError("Vector: real and imaginary parts differ in length");
}

Vector Vector::unit(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("Vector::unit: index out of range");
  Vector v = zeros(dim);
  v.re_[index] = 1.0;
  return v;
}

bool Vector::all_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(re_.begin(), re_.end(), finite) && std::all_of(im_.begin(), im_.end(), finite);
}

bool Vector::is_zero() const {
  auto zero = [](double v) { return v == 0.0; };
  return std::all_of(re_.begin(), re_.end(), zero) && std::all_of(im_.begin(), im_.end(), zero);
}

Vector& Vector::operator+=(const Vector& other) {
  if (other.dim() != dim()) throw DimensionError("Vector: dimension mismatch in +");
  for (std::size_t i = 0; i < re_.size(); ++i) re_[i] += other.re_[i];
  if (other.is_complex()) {
    if (im_.empty()) im_.assign(re_.size(), 0.0);
    for (std::size_t i = 0; i < im_.size(); ++i) im_[i] += other.im_[i];
  }
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  if (other.dim() != dim()) throw DimensionError("Vector: dimension mismatch in -");
  for (std::size_t i = 0; i < re_.size(); ++i) re_[i] -= other.re_[i];
  if (other.is_complex()) {
    if (im_.empty()) im_.assign(re_.size(), 0.0);
    for (std::size_t i = 0; i < im_.size(); ++i) im_[i] -= other.im_[i];
  }
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : re_) v *= s;
  for (double& v : im_) v *= s;
  return *this;
}

namespace {

void check_exponent(double p, const char* who) {
  if (!(p >= 1.0)) throw DomainError(std::string(who) + ": exponent must lie in [1, inf]");
}

void check_dim(std::size_t d, const char* who) {
  if (d == 0) throw DomainError(std::string(who) + ": dimension must be at least 1");
}

std::size_t kind_dim(const FiniteNormedSpace::Kind& k) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LpKind>) return v.d;
        else if constexpr (std::is_same_v<T, SchattenKind>) return v.side * v.side;
        else if constexpr (std::is_same_v<T, EuclidKind>) return v.d;
        else if constexpr (std::is_same_v<T, CustomKind>) return v.d;
        else {
          std::size_t total = 0;
          for (const auto& part : v.parts) total += part.dim();
          return total;
        }
      },
      k);
}

std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

double lp_norm_of_magnitudes(std::span<const double> values, double p) {
  double top = 0.0;
  for (double v : values) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  if (std::isinf(p)) return top;
  if (p == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / top, p);
  return top * std::pow(s, 1.0 / p);
}

FiniteNormedSpace::FiniteNormedSpace(Kind kind)
    : kind_(std::make_shared<const Kind>(std::move(kind))), dim_(kind_dim(*kind_)) {}

FiniteNormedSpace FiniteNormedSpace::lp(double p, std::size_t d) {
  check_exponent(p, "lp");
  check_dim(d, "lp");
  return FiniteNormedSpace(LpKind{p, d});
}

FiniteNormedSpace FiniteNormedSpace::schatten(double p, std::size_t side) {
  check_exponent(p, "schatten");
  check_dim(side, "schatten");
  return FiniteNormedSpace(SchattenKind{p, side});
}

FiniteNormedSpace FiniteNormedSpace::euclid(std::size_t d) {
  check_dim(d, "euclid");
  return FiniteNormedSpace(EuclidKind{d});
}

FiniteNormedSpace FiniteNormedSpace::custom(std::size_t d, NormOracle oracle, std::string label) {
  check_dim(d, "custom");
  if (!oracle) throw DomainError("custom: empty norm oracle");
  return FiniteNormedSpace(CustomKind{d, std::move(oracle), std::move(label)});
}

FiniteNormedSpace FiniteNormedSpace::two_sum(std::vector<FiniteNormedSpace> parts) {
  if (parts.empty()) throw DomainError("two_sum: at least one part is required");
  return FiniteNormedSpace(TwoSumKind{std::move(parts)});
}

std::optional<double> FiniteNormedSpace::exponent() const {
  if (const auto* lp = std::get_if<LpKind>(kind_.get())) return lp->p;
  if (const auto* s = std::get_if<SchattenKind>(kind_.get())) return s->p;
  if (std::holds_alternative<EuclidKind>(*kind_)) return 2.0;
  return std::nullopt;
}

std::string FiniteNormedSpace::describe() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LpKind>)
          return "lp(" + format_exponent(v.p) + "," + std::to_string(v.d) + ")";
        else if constexpr (std::is_same_v<T, SchattenKind>)
          return "schatten(" + format_exponent(v.p) + "," + std::to_string(v.side) + ")";
        else if constexpr (std::is_same_v<T, EuclidKind>)
          return "euclid(" + std::to_string(v.d) + ")";
        else if constexpr (std::is_same_v<T, CustomKind>)
          return v.label + "(" + std::to_string(v.d) + ")";
        else {
          std::string s = "sum2(";
          for (std::size_t i = 0; i < v.parts.size(); ++i) s += (i ? "," : "") + v.parts[i].describe();
          return s + ")";
        }
      },
      *kind_);
}

double FiniteNormedSpace::norm(const Vector& x) const {
  if (x.dim() != dim_)
    throw DimensionError("norm: vector of dimension " + std::to_string(x.dim()) + " in " + describe());
  if (!x.all_finite()) throw DomainError("norm: non-finite entries");
  if (x.is_complex() && !accepts_complex()) throw DomainError("norm: complex entries outside a Schatten space");

  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LpKind>) {
          return lp_norm_of_magnitudes(x.real(), v.p);
        } else if constexpr (std::is_same_v<T, EuclidKind>) {
          return lp_norm_of_magnitudes(x.real(), 2.0);
        } else if constexpr (std::is_same_v<T, SchattenKind>) {
          if (!x.is_complex()) {
            Matrix m(v.side, v.side, std::vector<double>(x.real().begin(), x.real().end()));
            return lp_norm_of_magnitudes(singular_values(m), v.p);
          }
          return lp_norm_of_magnitudes(singular_values(as_matrix(x, v.side)), v.p);
        } else if constexpr (std::is_same_v<T, CustomKind>) {
          const double n = v.oracle(x);
          if (!(n >= 0.0) || !std::isfinite(n)) throw NumericalError("norm: custom oracle returned " + std::to_string(n));
          return n;
        } else {
          std::vector<double> part_norms;
          part_norms.reserve(v.parts.size());
          std::size_t offset = 0;
          for (const auto& part : v.parts) {
            std::vector<double> chunk(x.real().begin() + offset, x.real().begin() + offset + part.dim());
            part_norms.push_back(part.norm(Vector(std::move(chunk))));
            offset += part.dim();
          }
          return lp_norm_of_magnitudes(part_norms, 2.0);
        }
      },
      *kind_);
}

double norm(const FiniteNormedSpace& space, const Vector& x) { return space.norm(x); }

ComplexMatrix as_matrix(const Vector& x, std::size_t side) {
  if (x.dim() != side * side) throw DimensionError("as_matrix: vector length is not side^2");
  ComplexMatrix m(side, side);
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) m(i, j) = x.entry(i * side + j);
  return m;
}

namespace {

std::vector<double> roots_of_clamped(std::vector<double> eig) {
  // Round-off can leave eigenvalues of m^* m slightly negative.
  for (double& e : eig) e = std::sqrt(std::max(e, 0.0));
  return eig;
}

void check_finite(std::span<const double> data) {
  for (double v : data)
    if (!std::isfinite(v)) throw DomainError("singular_values: non-finite entry");
}

}  // namespace

std::vector<double> singular_values(const Matrix& m) {
  if (!m.square()) throw DimensionError("singular_values: matrix is not square");
  check_finite(m.data());
  return roots_of_clamped(symmetric_eigenvalues(m.transpose() * m));
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  if (!m.square()) throw DimensionError("singular_values: matrix is not square");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        throw DomainError("singular_values: non-finite entry");
  return roots_of_clamped(hermitian_eigenvalues(m.gram()));
}

double dual_exponent(double p) {
  if (!(p >= 1.0)) throw DomainError("dual_exponent: exponent must lie in [1, inf]");
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double banach_mazur_lp_vs_hilbert(double p, std::size_t d) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("banach_mazur_lp_vs_hilbert: exponent must lie in [1, inf)");
  check_dim(d, "banach_mazur_lp_vs_hilbert");
  return std::pow(static_cast<double>(d), std::abs(0.5 - 1.0 / p));
}

}  // namespace modbanach
