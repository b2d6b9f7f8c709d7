#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace modbanach {

// Small dense row-major matrices. Everything in this library works at
// d <= 16 or so, so there is no blocking and no BLAS.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::span<const double> data() const { return a_; }
  std::span<double> data() { return a_; }

  Matrix transpose() const;
  std::vector<double> apply(std::span<const double> x) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

class ComplexMatrix {
 public:
  using value_type = std::complex<double>;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  explicit ComplexMatrix(const Matrix& real);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  value_type& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  // m^* m, Hermitian and positive semidefinite.
  ComplexMatrix gram() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> a_;
};

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted
// nonincreasing. Only the upper triangle is read.
std::vector<double> symmetric_eigenvalues(const Matrix& a);

// Eigenvalues of a Hermitian matrix, via the real symmetric embedding
// [[Re, -Im], [Im, Re]] whose spectrum is that of `a` with every eigenvalue
// doubled.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

// Orthonormal basis (as columns) of the column span of `a`, by modified
// Gram-Schmidt with one reorthogonalization pass. Columns whose residual
// norm falls below rank_tol times the largest column norm are dropped.
Matrix orthonormal_columns(const Matrix& a, double rank_tol = 1e-12);

}  // namespace modbanach
