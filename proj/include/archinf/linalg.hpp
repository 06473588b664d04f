#pragma once

#include <cstddef>
#include <vector>

namespace archinf {

// Dense row-major matrix. Everything in this project is tiny (dimension is
// the number of free parameters plus two), so the routines below favor
// clarity over blocking.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(double s) const;

  std::vector<double> operator*(const std::vector<double>& v) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

double frobenius_norm(const Matrix& m);

struct SymEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns are eigenvectors
};

// Cyclic Jacobi rotations; input must be symmetric.
SymEigen sym_eigen(const Matrix& a);

// Inverse of a symmetric positive definite matrix through its
// eigendecomposition. Caller is responsible for checking the spectrum first.
Matrix sym_inverse(const SymEigen& e);

// Determinant via partial-pivot LU.
double determinant(Matrix a);

// Singular values (descending) of a general rows x cols matrix with
// rows >= cols, from the eigenvalues of A'A.
std::vector<double> singular_values(const Matrix& a);

}  // namespace archinf
