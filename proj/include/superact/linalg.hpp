#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace superact {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Sized for the few-qubit operators used
/// throughout the engine (at most 2^8 x 2^8).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  /// Largest entrywise |A_ij - conj(A_ji)|.
  double hermiticity_defect() const;
  /// (A + A^dagger)/2
  Matrix hermitian_part() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix hadamard_product(const Matrix& a, const Matrix& b);
/// Frobenius inner product tr(A^dagger B).
Complex frobenius_inner(const Matrix& a, const Matrix& b);
/// max |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Spectral decomposition A = V diag(values) V^dagger with ascending values
/// and eigenvectors stored as the columns of `vectors`.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
/// Throws std::invalid_argument if the input is not Hermitian within 1e-8.
EigenDecomposition hermitian_eigen(const Matrix& a);

/// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const Matrix& a);

/// Nearest positive semidefinite matrix in Frobenius norm (negative
/// eigenvalues clipped to zero).
Matrix project_psd(const Matrix& a);

/// Single-qubit operators.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

}  // namespace superact
