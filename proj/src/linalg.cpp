#include "modbanach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "modbanach/error.hpp"

namespace modbanach {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), a_(std::move(data)) {
  if (a_.size() != rows_ * cols_) throw DimensionError("Matrix: data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("Matrix::apply: dimension mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("Matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexMatrix::ComplexMatrix(const Matrix& real) : rows_(real.rows()), cols_(real.cols()), a_(rows_ * cols_) {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = real(i, j);
}

ComplexMatrix ComplexMatrix::gram() const {
  ComplexMatrix g(cols_, cols_);
  for (std::size_t i = 0; i < cols_; ++i)
    for (std::size_t j = i; j < cols_; ++j) {
      value_type s{};
      for (std::size_t k = 0; k < rows_; ++k) s += std::conj((*this)(k, i)) * (*this)(k, j);
      g(i, j) = s;
      g(j, i) = std::conj(s);
    }
  for (std::size_t i = 0; i < cols_; ++i) g(i, i) = g(i, i).real();
  return g;
}

std::vector<double> symmetric_eigenvalues(const Matrix& input) {
  if (!input.square()) throw DimensionError("symmetric_eigenvalues: matrix is not square");
  const std::size_t n = input.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = input(i, j);

  double total = 0.0;
  for (double v : a.data()) total += v * v;
  const double eps = 1e-32 * total;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off <= eps) break;

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  if (!h.square()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  const std::size_t n = h.rows();
  Matrix big(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = h(i, j).real();
      const double im = h(i, j).imag();
      big(i, j) = re;
      big(n + i, n + j) = re;
      big(i, n + j) = -im;
      big(n + i, j) = im;
    }
  const auto doubled = symmetric_eigenvalues(big);
  // Each eigenvalue appears twice; average the pair to cancel rotation noise.
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return eig;
}

Matrix orthonormal_columns(const Matrix& a, double rank_tol) {
  const std::size_t m = a.rows();
  double scale = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
    scale = std::max(scale, std::sqrt(s));
  }
  std::vector<std::vector<double>> basis;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = a(i, j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += q[i] * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= dot * q[i];
      }
    double len = 0.0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
    if (scale == 0.0 || len <= rank_tol * scale) continue;
    for (double& x : v) x /= len;
    basis.push_back(std::move(v));
  }
  Matrix q(m, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < m; ++i) q(i, j) = basis[j][i];
  return q;
}

}  // namespace modbanach
