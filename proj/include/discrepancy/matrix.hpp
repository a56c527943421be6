#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace discrepancy {

/// Dense row-major real matrix of arbitrary shape.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  /// Throws ShapeError if data.size() != rows * cols, InvalidMatrix on non-finite entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
/// a * b^T
Matrix multiply_nt(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
double frobenius_norm(const Matrix& a);
/// Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);
/// a * v
std::vector<double> apply(const Matrix& a, std::span<const double> v);

/// Dense real symmetric d x d matrix. Storage is the full row-major square;
/// on construction the upper triangle is canonical and is mirrored into the
/// lower one, so entries(i, j) == entries(j, i) holds bit for bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);
  /// Throws ShapeError on size mismatch and InvalidMatrix on non-finite entries.
  SymMatrix(std::size_t dim, std::vector<double> data);
  /// Throws ShapeError if m is not square.
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// u u^T
  static SymMatrix outer(std::span<const double> u);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }

  double trace() const noexcept;
  Matrix to_matrix() const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);
SymMatrix operator-(const SymMatrix& a);

/// <A, B> = Tr(A B) for symmetric operands.
double inner(const SymMatrix& a, const SymMatrix& b);
double frobenius_norm(const SymMatrix& a);
/// A^2
SymMatrix square(const SymMatrix& a);
/// Σ coeffs[i] * mats[i]; all matrices must share dimension (ShapeError otherwise).
SymMatrix linear_combination(std::span<const double> coeffs, std::span<const SymMatrix> mats);
/// v^T A v
double quadratic_form(const SymMatrix& a, std::span<const double> v);
/// A v
std::vector<double> apply(const SymMatrix& a, std::span<const double> v);
/// S A S^T for S of shape r x d.
SymMatrix congruence(const Matrix& s, const SymMatrix& a);
/// A ⊗ I_t
SymMatrix kron_identity(const SymMatrix& a, std::size_t t);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

}  // namespace discrepancy
