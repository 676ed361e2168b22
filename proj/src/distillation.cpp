#include "superact/distillation.hpp"

#include <cmath>
#include <stdexcept>

#include "superact/errors.hpp"

namespace superact {

namespace {

constexpr double kMinSuccess = 1e-14;

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

// Interleaves two n-qubit copies as (A1, A2, B1, B2, ...).
std::vector<std::size_t> interleave_order(std::size_t n) {
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < n; ++k) {
    order.push_back(k);
    order.push_back(n + k);
  }
  return order;
}

Matrix two_copy_state(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.n_qubits() != rho2.n_qubits()) {
    throw std::invalid_argument("distillation inputs must have equal qubit counts");
  }
  if (2 * rho1.n_qubits() > DensityMatrix::kMaxQubits) {
    throw std::invalid_argument("distillation inputs are too large");
  }
  const auto order = interleave_order(rho1.n_qubits());
  return permute_qubits(kron(rho1.matrix(), rho2.matrix()), order);
}

}  // namespace

Matrix pbs_projector() {
  Matrix p(4, 4);
  p(0, 0) = 1.0;
  p(3, 3) = 1.0;
  return p;
}

ParityOperators parity_operators() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix plus(2, 4), minus(2, 4);
  plus(0, 0) = s;
  plus(1, 3) = s;
  minus(0, 0) = s;
  minus(1, 3) = -s;
  return {plus, minus};
}

DistillationOutcome distill_tripartite(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.n_qubits() != 3 || rho2.n_qubits() != 3) {
    throw std::invalid_argument("distill_tripartite expects two three-qubit states");
  }
  const Matrix joint = two_copy_state(rho1, rho2);
  const auto ops = parity_operators();
  const Matrix z0 = embed_local(pauli_z(), 0, 3);

  Matrix sum(8, 8);
  std::vector<std::pair<std::string, double>> branches;
  for (int code = 0; code < 8; ++code) {
    std::string label;
    Matrix k = Matrix::identity(1);
    int minus_count = 0;
    for (int party = 0; party < 3; ++party) {
      const bool minus = (code >> (2 - party)) & 1;
      minus_count += minus ? 1 : 0;
      label += minus ? '-' : '+';
      k = kron(k, minus ? ops.minus : ops.plus);
    }
    Matrix branch = k * joint * k.adjoint();
    if (minus_count % 2 == 1) branch = z0 * branch * z0;
    branches.emplace_back(label, branch.trace().real());
    sum += branch;
  }
  const double success = sum.trace().real();
  if (success < kMinSuccess) throw DistillationImpossible(success);
  sum *= 1.0 / success;
  return {detail::assume_valid(sum.hermitian_part(), Normalization::Normalized), success,
          std::move(branches)};
}

DistillationOutcome distill_cnot(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const std::size_t n = rho1.n_qubits();
  const Matrix joint = two_copy_state(rho1, rho2);
  Matrix p0(2, 4);
  p0(0, 0) = 1.0;
  p0(1, 3) = 1.0;
  Matrix k = Matrix::identity(1);
  for (std::size_t party = 0; party < n; ++party) k = kron(k, p0);
  Matrix out = k * joint * k.adjoint();
  const double success = out.trace().real();
  if (success < kMinSuccess) throw DistillationImpossible(success);
  out *= 1.0 / success;
  return {detail::assume_valid(out.hermitian_part(), Normalization::Normalized), success,
          {{std::string(n, '0'), success}}};
}

Projection localize(const DensityMatrix& rho, std::size_t measured_qubit, LocalizationBasis basis,
                    int outcome) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("localize expects a three-qubit state");
  if (measured_qubit > 2) throw std::invalid_argument("localize: qubit index out of range");
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("localize: outcome must be 0 or 1");
  const double s = 1.0 / std::sqrt(2.0);
  const PureState psi = basis == LocalizationBasis::X
                            ? PureState({s, outcome == 0 ? s : -s})
                            : PureState::basis(1, static_cast<std::size_t>(outcome));
  auto proj = project_subsystem(rho, psi, SubsystemPartition::measure(3, {measured_qubit}), true);
  if (basis == LocalizationBasis::X && outcome == 1) {
    proj.state = apply_local(proj.state, pauli_z(), 0);
  }
  return proj;
}

DensityMatrix analytic_distilled_noisy_ghz(double p) {
  check_p(p);
  const double norm = 3.0 * p * p + 1.0;
  Matrix m(8, 8);
  const double corner = (3.0 * p + 1.0) * (3.0 * p + 1.0) / 8.0 / norm;
  const double inner = (1.0 - p) * (1.0 - p) / 8.0 / norm;
  for (std::size_t i = 1; i < 7; ++i) m(i, i) = inner;
  m(0, 0) = corner;
  m(7, 7) = corner;
  m(0, 7) = 2.0 * p * p / norm;
  m(7, 0) = 2.0 * p * p / norm;
  return detail::assume_valid(std::move(m), Normalization::Normalized);
}

double analytic_fidelity_after(double p) {
  check_p(p);
  return (25.0 * p * p + 6.0 * p + 1.0) / (24.0 * p * p + 8.0);
}

std::array<double, 8> component_fidelity_update(const std::array<double, 8>& f) {
  double total = 0.0;
  for (double x : f) {
    if (!(x >= -1e-12)) throw std::invalid_argument("component fidelities must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("component fidelities must sum to 1");
  }
  std::array<double, 8> out{};
  double survival = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double plus = f[2 * i];
    const double minus = f[2 * i + 1];
    out[2 * i] = plus * plus + minus * minus;
    out[2 * i + 1] = 2.0 * plus * minus;
    survival += (plus + minus) * (plus + minus);
  }
  if (survival < kMinSuccess) throw DistillationImpossible(survival);
  for (double& x : out) x /= survival;
  return out;
}

}  // namespace superact
