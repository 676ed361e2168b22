#include "superact/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "superact/errors.hpp"

namespace superact {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kDegenerateWeight = 1e-14;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

// Bit mask (within the full basis index) of qubit q of an n-qubit register.
std::size_t bit_of(std::size_t q, std::size_t n) { return std::size_t{1} << (n - 1 - q); }

// Scatters the bits of `sub` (big-endian over `qubits`) into a full index.
std::size_t scatter(std::size_t sub, std::span<const std::size_t> qubits, std::size_t n) {
  std::size_t full = 0;
  const std::size_t k = qubits.size();
  for (std::size_t i = 0; i < k; ++i) {
    if ((sub >> (k - 1 - i)) & 1U) full |= bit_of(qubits[i], n);
  }
  return full;
}

std::vector<std::size_t> complement(std::span<const std::size_t> qubits, std::size_t n) {
  std::vector<std::size_t> rest;
  for (std::size_t q = 0; q < n; ++q) {
    if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) rest.push_back(q);
  }
  return rest;
}

void check_qubits(std::span<const std::size_t> qubits, std::size_t n) {
  std::vector<bool> seen(n, false);
  for (std::size_t q : qubits) {
    if (q >= n) throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
    if (seen[q]) throw std::invalid_argument("qubit index " + std::to_string(q) + " repeated");
    seen[q] = true;
  }
}

}  // namespace

std::size_t qubits_for_dimension(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  n_qubits_ = qubits_for_dimension(amplitudes_.size());
  if (n_qubits_ == 0) throw std::invalid_argument("PureState needs at least one qubit");
  double norm2 = 0.0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw std::invalid_argument("PureState amplitudes have squared norm " +
                                std::to_string(norm2));
  }
}

PureState PureState::basis(std::size_t n_qubits, std::size_t index) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return PureState(std::move(amps));
}

Matrix PureState::projector() const {
  const std::size_t d = dimension();
  Matrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
  return m;
}

Matrix PureState::as_column() const {
  Matrix m(dimension(), 1);
  for (std::size_t r = 0; r < dimension(); ++r) m(r, 0) = amplitudes_[r];
  return m;
}

Complex inner_product(const PureState& a, const PureState& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("inner_product: dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<Complex> amps(a.dimension() * b.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i)
    for (std::size_t j = 0; j < b.dimension(); ++j) amps[i * b.dimension() + j] = a[i] * b[j];
  return PureState(std::move(amps));
}

namespace detail {
DensityMatrix assume_valid(Matrix m, Normalization norm) {
  const std::size_t n = qubits_for_dimension(m.rows());
  return DensityMatrix(std::move(m), n, norm);
}
}  // namespace detail

DensityMatrix DensityMatrix::from_matrix(Matrix m, Normalization norm) {
  if (!m.is_square()) throw std::invalid_argument("density matrix must be square");
  const std::size_t n = qubits_for_dimension(m.rows());
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument("density matrix must describe 1 to 8 qubits");
  }
  for (const auto& z : m.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("density matrix has non-finite entries");
    }
  }
  const double defect = m.hermiticity_defect();
  if (defect > kHermitianTolerance) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (defect " << defect << ")";
    throw std::invalid_argument(os.str());
  }
  m = m.hermitian_part();
  const double tr = m.trace().real();
  if (norm == Normalization::Normalized && std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  if (tr < -kTraceTolerance) throw std::invalid_argument("density matrix has negative trace");
  const double lmin = hermitian_eigenvalues(m).front();
  if (lmin < kPsdTolerance) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite (min eigenvalue " << lmin << ")";
    throw std::invalid_argument(os.str());
  }
  return DensityMatrix(std::move(m), n, norm);
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return detail::assume_valid(psi.projector(), Normalization::Normalized);
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (tr < kDegenerateWeight) throw DegenerateProjection(tr);
  Matrix m = m_;
  m *= 1.0 / tr;
  return DensityMatrix(m.hermitian_part(), n_qubits_, Normalization::Normalized);
}

std::vector<double> DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(m_); }

SubsystemPartition::SubsystemPartition(std::size_t n_qubits, std::vector<Group> groups)
    : n_qubits_(n_qubits), groups_(std::move(groups)) {
  std::vector<bool> seen(n_qubits, false);
  std::size_t covered = 0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (std::size_t h = 0; h < g; ++h) {
      if (groups_[h].first == groups_[g].first) {
        throw std::invalid_argument("SubsystemPartition: party label used twice");
      }
    }
    for (std::size_t q : groups_[g].second) {
      if (q >= n_qubits) {
        throw std::invalid_argument("SubsystemPartition: qubit " + std::to_string(q) +
                                    " out of range");
      }
      if (seen[q]) {
        throw std::invalid_argument("SubsystemPartition: qubit " + std::to_string(q) +
                                    " assigned twice");
      }
      seen[q] = true;
      ++covered;
    }
  }
  if (covered != n_qubits) {
    throw std::invalid_argument("SubsystemPartition: parties do not cover every qubit");
  }
}

SubsystemPartition SubsystemPartition::keep(std::size_t n_qubits, std::vector<std::size_t> kept) {
  check_qubits(kept, n_qubits);
  auto rest = complement(kept, n_qubits);
  return SubsystemPartition(n_qubits, {{Party::Kept, std::move(kept)}, {Party::Measured, rest}});
}

SubsystemPartition SubsystemPartition::measure(std::size_t n_qubits,
                                               std::vector<std::size_t> measured) {
  check_qubits(measured, n_qubits);
  auto rest = complement(measured, n_qubits);
  return SubsystemPartition(n_qubits,
                            {{Party::Kept, std::move(rest)}, {Party::Measured, std::move(measured)}});
}

SubsystemPartition SubsystemPartition::bipartite(std::size_t n_qubits,
                                                 std::vector<std::size_t> side_b) {
  check_qubits(side_b, n_qubits);
  auto rest = complement(side_b, n_qubits);
  return SubsystemPartition(n_qubits, {{Party::A, std::move(rest)}, {Party::B, std::move(side_b)}});
}

SubsystemPartition SubsystemPartition::tripartite() {
  return SubsystemPartition(3, {{Party::A, {0}}, {Party::B, {1}}, {Party::C, {2}}});
}

const std::vector<std::size_t>& SubsystemPartition::qubits(Party label) const {
  static const std::vector<std::size_t> empty;
  for (const auto& g : groups_)
    if (g.first == label) return g.second;
  return empty;
}

bool SubsystemPartition::has(Party label) const {
  return std::any_of(groups_.begin(), groups_.end(),
                     [&](const Group& g) { return g.first == label; });
}

PureState make_ghz(int index, int sign) {
  if (index < 0 || index > 3) {
    throw std::invalid_argument("GHZ index must be 0..3, got " + std::to_string(index));
  }
  if (sign != 1 && sign != -1) throw std::invalid_argument("GHZ sign must be +1 or -1");
  static constexpr std::size_t kFirst[4] = {0b000, 0b001, 0b010, 0b100};
  const std::size_t first = kFirst[index];
  const std::size_t second = first ^ 0b111;
  std::vector<Complex> amps(8);
  amps[first] = 1.0 / std::sqrt(2.0);
  amps[second] = static_cast<double>(sign) / std::sqrt(2.0);
  return PureState(std::move(amps));
}

PureState make_w() {
  std::vector<Complex> amps(8);
  const double a = 1.0 / std::sqrt(3.0);
  amps[0b001] = a;
  amps[0b010] = a;
  amps[0b100] = a;
  return PureState(std::move(amps));
}

PureState bell_phi_plus() {
  const double a = 1.0 / std::sqrt(2.0);
  return PureState({a, 0.0, 0.0, a});
}

DensityMatrix maximally_mixed(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > DensityMatrix::kMaxQubits) {
    throw std::invalid_argument("maximally_mixed: qubit count out of range");
  }
  const std::size_t d = std::size_t{1} << n_qubits;
  Matrix m = Matrix::identity(d);
  m *= 1.0 / static_cast<double>(d);
  return detail::assume_valid(std::move(m), Normalization::Normalized);
}

namespace {
DensityMatrix white_noise_mixture(const PureState& psi, double p) {
  const std::size_t d = psi.dimension();
  Matrix m = psi.projector();
  m *= p;
  for (std::size_t i = 0; i < d; ++i) m(i, i) += (1.0 - p) / static_cast<double>(d);
  return detail::assume_valid(std::move(m), Normalization::Normalized);
}
}  // namespace

DensityMatrix noisy_ghz(double p) {
  check_probability(p, "noisy_ghz: p");
  return white_noise_mixture(make_ghz(0, 1), p);
}

DensityMatrix noise_model_state(double p, double q, double r) {
  check_probability(p, "noise_model_state: p");
  check_probability(q, "noise_model_state: q");
  check_probability(r, "noise_model_state: r");
  Matrix m(8, 8);
  const double corner_diag = (1.0 - p) / 8.0 + 0.5 * p * r;
  const double inner_diag = 1.0 / 8.0 + (p - 4.0 * p * r) / 24.0;
  const double corner_off = p * r * (q - 0.5);
  const double inner_off = (1.0 - r) / 3.0 * p * (q - 0.5);
  for (std::size_t i = 0; i < 8; ++i) {
    const bool corner = i == 0 || i == 7;
    m(i, i) = corner ? corner_diag : inner_diag;
    m(i, 7 - i) = corner ? corner_off : inner_off;
  }
  return detail::assume_valid(std::move(m), Normalization::Normalized);
}

DensityMatrix noisy_w(double p) {
  check_probability(p, "noisy_w: p");
  return white_noise_mixture(make_w(), p);
}

DensityMatrix noisy_bell(double p) {
  check_probability(p, "noisy_bell: p");
  return white_noise_mixture(bell_phi_plus(), p);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.n_qubits() + b.n_qubits() > DensityMatrix::kMaxQubits) {
    throw std::invalid_argument("tensor: result exceeds 8 qubits");
  }
  const auto norm = a.is_normalized() && b.is_normalized() ? Normalization::Normalized
                                                           : Normalization::Unnormalized;
  return detail::assume_valid(kron(a.matrix(), b.matrix()), norm);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemPartition& keep) {
  const std::size_t n = rho.n_qubits();
  if (keep.n_qubits() != n) throw std::invalid_argument("partial_trace: partition size mismatch");
  const auto& kept = keep.qubits(Party::Kept);
  if (kept.empty()) throw std::invalid_argument("partial_trace: no kept qubits");
  const auto traced = complement(kept, n);
  const std::size_t dk = std::size_t{1} << kept.size();
  const std::size_t dt = std::size_t{1} << traced.size();
  std::vector<std::size_t> kept_idx(dk), traced_idx(dt);
  for (std::size_t i = 0; i < dk; ++i) kept_idx[i] = scatter(i, kept, n);
  for (std::size_t t = 0; t < dt; ++t) traced_idx[t] = scatter(t, traced, n);
  Matrix out(dk, dk);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      Complex s{0.0, 0.0};
      for (std::size_t t = 0; t < dt; ++t) s += rho(kept_idx[i] | traced_idx[t], kept_idx[j] | traced_idx[t]);
      out(i, j) = s;
    }
  return detail::assume_valid(out.hermitian_part(), rho.is_normalized()
                                                        ? Normalization::Normalized
                                                        : Normalization::Unnormalized);
}

Matrix partial_transpose(const Matrix& m, std::span<const std::size_t> qubits) {
  if (!m.is_square()) throw std::invalid_argument("partial_transpose: matrix not square");
  const std::size_t n = qubits_for_dimension(m.rows());
  check_qubits(qubits, n);
  std::size_t mask = 0;
  for (std::size_t q : qubits) mask |= bit_of(q, n);
  const std::size_t d = m.rows();
  Matrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t i2 = (i & ~mask) | (j & mask);
      const std::size_t j2 = (j & ~mask) | (i & mask);
      out(i2, j2) = m(i, j);
    }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, const SubsystemPartition& party) {
  if (party.n_qubits() != rho.n_qubits()) {
    throw std::invalid_argument("partial_transpose: partition size mismatch");
  }
  const auto& b = party.qubits(Party::B);
  if (b.empty()) throw std::invalid_argument("partial_transpose: partition has no party B");
  return partial_transpose(rho.matrix(), b);
}

Projection project_subsystem(const DensityMatrix& rho, const PureState& psi,
                             const SubsystemPartition& measured, bool normalize) {
  const std::size_t n = rho.n_qubits();
  if (measured.n_qubits() != n) {
    throw std::invalid_argument("project_subsystem: partition size mismatch");
  }
  const auto& meas = measured.qubits(Party::Measured);
  if (meas.size() != psi.n_qubits()) {
    throw std::invalid_argument("project_subsystem: psi does not match the measured qubits");
  }
  if (meas.size() >= n) throw std::invalid_argument("project_subsystem: nothing left to keep");
  const auto rest = complement(meas, n);
  const std::size_t dr = std::size_t{1} << rest.size();
  const std::size_t dm = psi.dimension();
  std::vector<std::size_t> rest_idx(dr), meas_idx(dm);
  for (std::size_t i = 0; i < dr; ++i) rest_idx[i] = scatter(i, rest, n);
  for (std::size_t k = 0; k < dm; ++k) meas_idx[k] = scatter(k, meas, n);

  Matrix out(dr, dr);
  for (std::size_t i = 0; i < dr; ++i)
    for (std::size_t j = 0; j < dr; ++j) {
      Complex s{0.0, 0.0};
      for (std::size_t k = 0; k < dm; ++k) {
        if (psi[k] == Complex{0.0, 0.0}) continue;
        for (std::size_t l = 0; l < dm; ++l) {
          if (psi[l] == Complex{0.0, 0.0}) continue;
          s += std::conj(psi[k]) * rho(rest_idx[i] | meas_idx[k], rest_idx[j] | meas_idx[l]) * psi[l];
        }
      }
      out(i, j) = s;
    }
  out = out.hermitian_part();
  const double weight = std::max(0.0, out.trace().real());
  if (normalize) {
    if (weight < kDegenerateWeight) throw DegenerateProjection(weight);
    out *= 1.0 / weight;
    return {detail::assume_valid(std::move(out), Normalization::Normalized), weight};
  }
  return {detail::assume_valid(std::move(out), Normalization::Unnormalized), weight};
}

double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dimension() != psi.dimension()) {
    throw std::invalid_argument("fidelity_with_pure: dimension mismatch");
  }
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    if (psi[i] == Complex{0.0, 0.0}) continue;
    for (std::size_t j = 0; j < psi.dimension(); ++j) s += std::conj(psi[i]) * rho(i, j) * psi[j];
  }
  return s.real();
}

Matrix embed_local(const Matrix& op, std::size_t qubit, std::size_t n_qubits) {
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("local operator must be 2x2");
  if (qubit >= n_qubits) throw std::invalid_argument("qubit index out of range");
  Matrix full = Matrix::identity(1);
  for (std::size_t q = 0; q < n_qubits; ++q) full = kron(full, q == qubit ? op : Matrix::identity(2));
  return full;
}

DensityMatrix apply_local(const DensityMatrix& rho, const Matrix& op, std::size_t qubit) {
  const Matrix u = embed_local(op, qubit, rho.n_qubits());
  Matrix out = (u * rho.matrix() * u.adjoint()).hermitian_part();
  const bool unitary = max_abs_diff(op.adjoint() * op, Matrix::identity(2)) < 1e-12;
  return detail::assume_valid(std::move(out), unitary && rho.is_normalized()
                                                   ? Normalization::Normalized
                                                   : Normalization::Unnormalized);
}

Matrix permute_qubits(const Matrix& m, std::span<const std::size_t> order) {
  const std::size_t n = qubits_for_dimension(m.rows());
  if (order.size() != n) throw std::invalid_argument("permute_qubits: order has wrong length");
  check_qubits(order, n);
  const std::size_t d = m.rows();
  std::vector<std::size_t> map(d);
  for (std::size_t i = 0; i < d; ++i) map[i] = scatter(i, order, n);
  Matrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

DensityMatrix permute_qubits(const DensityMatrix& rho, std::span<const std::size_t> order) {
  return detail::assume_valid(permute_qubits(rho.matrix(), order),
                              rho.is_normalized() ? Normalization::Normalized
                                                  : Normalization::Unnormalized);
}

Matrix apply_kraus(const Matrix& rho, std::span<const Matrix> kraus) {
  if (kraus.empty()) throw std::invalid_argument("apply_kraus: no operators");
  Matrix out(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out.hermitian_part();
}

}  // namespace superact
