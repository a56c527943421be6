#include "discrepancy/matrix.hpp"

#include <cmath>
#include <string>

#include "discrepancy/errors.hpp"
#include "discrepancy/kernels.hpp"

namespace discrepancy {

namespace {

void require_finite(std::span<const double> data) {
  for (double v : data) {
    if (!std::isfinite(v)) throw InvalidMatrix("matrix has non-finite entries");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix shapes differ");
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw ShapeError("matrix data has wrong size");
  require_finite(data_);
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

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  kernels::gemm_acc(a.data().data(), b.data().data(), c.data().data(), a.rows(), a.cols(), b.cols());
  return c;
}

Matrix multiply_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("multiply_nt: inner dimensions differ");
  Matrix c(a.rows(), b.rows());
  kernels::gemm_nt(a.data().data(), b.data().data(), c.data().data(), a.rows(), a.cols(), b.rows());
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  kernels::axpy(1.0, b.data(), c.data());
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  kernels::axpy(-1.0, b.data(), c.data());
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  kernels::scale(s, a.data(), c.data());
  return c;
}

double frobenius_norm(const Matrix& a) { return std::sqrt(kernels::dot(a.data(), a.data())); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

std::vector<double> apply(const Matrix& a, std::span<const double> v) {
  if (v.size() != a.cols()) throw ShapeError("apply: vector length differs from column count");
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = kernels::dot(a.row(i), v);
  return out;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix::SymMatrix(std::size_t dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {
  if (data_.size() != dim_ * dim_) throw ShapeError("symmetric matrix data has wrong size");
  require_finite(data_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j) data_[j * dim_ + i] = data_[i * dim_ + j];
}

SymMatrix::SymMatrix(const Matrix& m) : SymMatrix(m.rows(), std::vector<double>(m.data().begin(), m.data().end())) {
  if (!m.square()) throw ShapeError("symmetric matrix must be square");
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  std::vector<double> d(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) d[i * dim + i] = 1.0;
  return SymMatrix(dim, std::move(d));
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = diag[i];
  return SymMatrix(n, std::move(d));
}

SymMatrix SymMatrix::outer(std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = u[i] * u[j];
  return SymMatrix(n, std::move(d));
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

Matrix SymMatrix::to_matrix() const { return Matrix(dim_, dim_, data_); }

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  std::vector<double> d(a.data().begin(), a.data().end());
  kernels::axpy(1.0, b.data(), d);
  return SymMatrix(a.dim(), std::move(d));
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  std::vector<double> d(a.data().begin(), a.data().end());
  kernels::axpy(-1.0, b.data(), d);
  return SymMatrix(a.dim(), std::move(d));
}

SymMatrix operator*(double s, const SymMatrix& a) {
  std::vector<double> d(a.data().size());
  kernels::scale(s, a.data(), d);
  return SymMatrix(a.dim(), std::move(d));
}

SymMatrix operator-(const SymMatrix& a) { return -1.0 * a; }

double inner(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return kernels::dot(a.data(), b.data());
}

double frobenius_norm(const SymMatrix& a) { return std::sqrt(kernels::dot(a.data(), a.data())); }

SymMatrix square(const SymMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> out(n * n, 0.0);
  kernels::gemm_acc(a.data().data(), a.data().data(), out.data(), n, n, n);
  return SymMatrix(n, std::move(out));
}

SymMatrix linear_combination(std::span<const double> coeffs, std::span<const SymMatrix> mats) {
  if (coeffs.size() != mats.size()) throw ShapeError("linear_combination: coefficient count differs");
  if (mats.empty()) throw ShapeError("linear_combination: no matrices");
  const std::size_t n = mats.front().dim();
  std::vector<double> acc(n * n, 0.0);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].dim() != n) throw ShapeError("linear_combination: dimension mismatch");
    if (coeffs[i] != 0.0) kernels::axpy(coeffs[i], mats[i].data(), acc);
  }
  return SymMatrix(n, std::move(acc));
}

double quadratic_form(const SymMatrix& a, std::span<const double> v) {
  if (v.size() != a.dim()) throw ShapeError("quadratic_form: vector length differs from dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += v[i] * kernels::dot(a.row(i), v);
  return s;
}

std::vector<double> apply(const SymMatrix& a, std::span<const double> v) {
  if (v.size() != a.dim()) throw ShapeError("apply: vector length differs from dimension");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = kernels::dot(a.row(i), v);
  return out;
}

SymMatrix congruence(const Matrix& s, const SymMatrix& a) {
  if (s.cols() != a.dim()) throw ShapeError("congruence: sketch width differs from dimension");
  const std::size_t r = s.rows();
  const std::size_t d = a.dim();
  std::vector<double> sa(r * d, 0.0);
  kernels::gemm_acc(s.data().data(), a.data().data(), sa.data(), r, d, d);
  std::vector<double> out(r * r);
  kernels::gemm_nt(sa.data(), s.data().data(), out.data(), r, d, r);
  return SymMatrix(r, std::move(out));
}

SymMatrix kron_identity(const SymMatrix& a, std::size_t t) {
  const std::size_t d = a.dim();
  const std::size_t n = d * t;
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double v = a(i, j);
      for (std::size_t k = 0; k < t; ++k) out[(i * t + k) * n + (j * t + k)] = v;
    }
  return SymMatrix(n, std::move(out));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
  return kernels::dot(a, b);
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

}  // namespace discrepancy
