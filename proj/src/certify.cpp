#include "superact/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "superact/errors.hpp"

namespace superact {

namespace {
constexpr double kXLeakageGate = 1e-8;
// Eigenvalues of the partial transpose above this (relative) level are
// treated as round-off of a PSD spectrum.
constexpr double kNegativeEigenvalueFloor = 1e-14;
}  // namespace

Matrix XShapeView::reconstruct() const {
  const std::size_t l = a.size();
  const std::size_t d = 2 * l;
  Matrix m(d, d);
  for (std::size_t i = 0; i < l; ++i) {
    m(i, i) = a[i];
    m(d - 1 - i, d - 1 - i) = b[i];
    m(i, d - 1 - i) = c[i];
    m(d - 1 - i, i) = std::conj(c[i]);
  }
  return m;
}

XShapeView x_shape_view(const Matrix& m, double tolerance) {
  if (!m.is_square() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw std::invalid_argument("x_shape_view needs a square matrix of even dimension");
  }
  const std::size_t d = m.rows();
  const std::size_t l = d / 2;
  XShapeView v;
  v.a.resize(l);
  v.b.resize(l);
  v.c.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    v.a[i] = m(i, i).real();
    v.b[i] = m(d - 1 - i, d - 1 - i).real();
    v.c[i] = m(i, d - 1 - i);
  }
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      if (c == r || c == d - 1 - r) continue;
      const double mag = std::abs(m(r, c));
      if (mag > tolerance) v.max_off_pattern_magnitude = std::max(v.max_off_pattern_magnitude, mag);
    }
  return v;
}

XShapeView x_shape_view(const DensityMatrix& rho, double tolerance) {
  return x_shape_view(rho.matrix(), tolerance);
}

std::vector<double> gme_concurrence_terms(const DensityMatrix& rho) {
  const XShapeView v = x_shape_view(rho);
  if (v.max_off_pattern_magnitude > kXLeakageGate) throw NotXShaped(v.max_off_pattern_magnitude);
  const std::size_t l = v.a.size();
  std::vector<double> roots(l);
  for (std::size_t j = 0; j < l; ++j) roots[j] = std::sqrt(std::max(0.0, v.a[j] * v.b[j]));
  std::vector<double> terms(l);
  for (std::size_t i = 0; i < l; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < l; ++j)
      if (j != i) s += roots[j];
    terms[i] = std::abs(v.c[i]) - s;
  }
  return terms;
}

double gme_concurrence_x(const DensityMatrix& rho) {
  const auto terms = gme_concurrence_terms(rho);
  return 2.0 * std::max(0.0, *std::max_element(terms.begin(), terms.end()));
}

double negativity(const DensityMatrix& rho, const SubsystemPartition& bipartition) {
  const auto ev = hermitian_eigenvalues(partial_transpose(rho, bipartition));
  const double tr = rho.trace();
  if (tr <= 0.0) return 0.0;
  double neg = 0.0;
  for (double x : ev)
    if (x < -kNegativeEigenvalueFloor * tr) neg += -x;
  return std::log2(1.0 + 2.0 * neg / tr);
}

double min_eig_after_pt(const DensityMatrix& rho, const SubsystemPartition& bipartition) {
  return hermitian_eigenvalues(partial_transpose(rho, bipartition)).front();
}

double ghz_witness_expectation(const DensityMatrix& rho) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("GHZ witness expects three qubits");
  return 0.5 * rho.trace() - fidelity_with_pure(rho, make_ghz(0, 1));
}

double w_witness_expectation(const DensityMatrix& rho) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("W witness expects three qubits");
  return 2.0 / 3.0 * rho.trace() - fidelity_with_pure(rho, make_w());
}

double fidelity_from_settings(const std::map<std::string, double>& e, FidelityTarget target) {
  auto get = [&](const char* key) {
    auto it = e.find(key);
    if (it == e.end()) throw std::invalid_argument(std::string("missing setting \"") + key + "\"");
    return it->second;
  };
  if (target == FidelityTarget::GHZ3) {
    return 0.5 * get("pop") + (get("m0") - get("m1") + get("m2")) / 6.0;
  }
  return 0.5 * get("pop") + 0.25 * (get("xx") - get("yy"));
}

}  // namespace superact
