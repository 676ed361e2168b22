#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "superact/linalg.hpp"
#include "superact/quantum_state.hpp"

namespace testing {

using superact::Complex;
using superact::Matrix;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Complex{g(rng), g(rng)};
  return m;
}

inline Matrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  Matrix a = random_matrix(n, n, rng);
  return (a + a.adjoint()) * Complex{0.5, 0.0};
}

// G G^dagger / tr, a full-rank random state.
inline superact::DensityMatrix random_density(std::size_t n_qubits, std::mt19937_64& rng) {
  const std::size_t d = std::size_t{1} << n_qubits;
  Matrix g = random_matrix(d, d, rng);
  Matrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return superact::DensityMatrix::from_matrix(m.hermitian_part());
}

inline superact::PureState random_pure(std::size_t n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> a(std::size_t{1} << n_qubits);
  double norm = 0.0;
  for (auto& z : a) {
    z = Complex{g(rng), g(rng)};
    norm += std::norm(z);
  }
  for (auto& z : a) z /= std::sqrt(norm);
  return superact::PureState(std::move(a));
}

// Haar-ish 2x2 unitary from Euler angles.
inline Matrix random_unitary2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  const double a = u(rng), b = u(rng), c = u(rng), t = u(rng) / 4.0;
  const Complex ea = std::exp(Complex{0.0, a}), eb = std::exp(Complex{0.0, b}), ec = std::exp(Complex{0.0, c});
  return Matrix{{ea * std::cos(t), eb * std::sin(t)}, {-std::conj(eb) * ec * std::sin(t), std::conj(ea) * ec * std::cos(t)}};
}

inline double trace_of_product(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

}  // namespace testing
