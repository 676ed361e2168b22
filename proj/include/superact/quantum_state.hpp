#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "superact/linalg.hpp"

namespace superact {

/// Amplitudes over a qubit register. Qubit 0 is the most significant bit of
/// the basis index, so |q0 q1 q2> sits at index 4*q0 + 2*q1 + q2.
class PureState {
 public:
  /// Throws std::invalid_argument unless the length is a power of two and
  /// the squared norm is 1 within 1e-12.
  explicit PureState(std::vector<Complex> amplitudes);

  static PureState basis(std::size_t n_qubits, std::size_t index);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  /// |psi><psi|
  Matrix projector() const;
  Matrix as_column() const;

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

/// <a|b>
Complex inner_product(const PureState& a, const PureState& b);
PureState tensor(const PureState& a, const PureState& b);

enum class Normalization { Normalized, Unnormalized };

class DensityMatrix;
namespace detail {
// Wraps a matrix produced by an operation that preserves the invariants by
// construction. No checks are performed.
DensityMatrix assume_valid(Matrix m, Normalization norm);
}  // namespace detail

class DensityMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kPsdTolerance = -1e-9;
  static constexpr std::size_t kMaxQubits = 8;

  /// Validates shape, Hermiticity, trace and positivity. Throws
  /// std::invalid_argument with a description of the first violation.
  static DensityMatrix from_matrix(Matrix m, Normalization norm = Normalization::Normalized);
  static DensityMatrix from_pure(const PureState& psi);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  bool is_normalized() const { return norm_ == Normalization::Normalized; }
  double trace() const { return m_.trace().real(); }

  /// Rescales to unit trace. Throws DegenerateProjection for trace < 1e-14.
  DensityMatrix normalized() const;
  std::vector<double> eigenvalues() const;

 private:
  DensityMatrix(Matrix m, std::size_t n, Normalization norm)
      : m_(std::move(m)), n_qubits_(n), norm_(norm) {}
  friend DensityMatrix detail::assume_valid(Matrix, Normalization);

  Matrix m_;
  std::size_t n_qubits_;
  Normalization norm_;
};

enum class Party { A, B, C, Kept, Measured };

/// Assignment of every qubit of an n-qubit register to a party label.
class SubsystemPartition {
 public:
  using Group = std::pair<Party, std::vector<std::size_t>>;

  /// Throws std::invalid_argument unless the groups form a disjoint cover of
  /// 0..n_qubits-1 and no label repeats.
  SubsystemPartition(std::size_t n_qubits, std::vector<Group> groups);

  /// `kept` in the given order; every other qubit is Measured.
  static SubsystemPartition keep(std::size_t n_qubits, std::vector<std::size_t> kept);
  /// `measured` qubits are Measured; the rest are Kept in ascending order.
  static SubsystemPartition measure(std::size_t n_qubits, std::vector<std::size_t> measured);
  /// Qubits in `side_b` form party B, the rest party A.
  static SubsystemPartition bipartite(std::size_t n_qubits, std::vector<std::size_t> side_b);
  /// A = {0}, B = {1}, C = {2}.
  static SubsystemPartition tripartite();

  std::size_t n_qubits() const { return n_qubits_; }
  /// Qubits carrying `label`, empty when the label is absent.
  const std::vector<std::size_t>& qubits(Party label) const;
  bool has(Party label) const;

 private:
  std::size_t n_qubits_;
  std::vector<Group> groups_;
};

PureState make_ghz(int index, int sign);
PureState make_w();
PureState bell_phi_plus();

DensityMatrix maximally_mixed(std::size_t n_qubits);
DensityMatrix noisy_ghz(double p);
DensityMatrix noise_model_state(double p, double q, double r);
DensityMatrix noisy_w(double p);
/// p|Phi+><Phi+| + (1-p) I/4
DensityMatrix noisy_bell(double p);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on the Kept qubits, in the order they are listed.
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemPartition& keep);

/// Transposes the qubits listed in `qubits`. Works on any square matrix of
/// qubit dimension; the result is a plain matrix because it need not be PSD.
Matrix partial_transpose(const Matrix& m, std::span<const std::size_t> qubits);
/// Transposes party B of the partition.
Matrix partial_transpose(const DensityMatrix& rho, const SubsystemPartition& party);

struct Projection {
  DensityMatrix state;
  double weight;
};

/// <psi|rho|psi> with psi living on the Measured qubits. The remaining qubits
/// keep their relative order. Throws DegenerateProjection when `normalize` is
/// set and the weight is below 1e-14.
Projection project_subsystem(const DensityMatrix& rho, const PureState& psi,
                             const SubsystemPartition& measured, bool normalize);

double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi);

/// Conjugates by op acting on a single qubit.
DensityMatrix apply_local(const DensityMatrix& rho, const Matrix& op, std::size_t qubit);

/// Embeds a 2x2 operator acting on `qubit` into the full register.
Matrix embed_local(const Matrix& op, std::size_t qubit, std::size_t n_qubits);

/// New qubit k is old qubit order[k].
Matrix permute_qubits(const Matrix& m, std::span<const std::size_t> order);
DensityMatrix permute_qubits(const DensityMatrix& rho, std::span<const std::size_t> order);

/// sum_k K_k rho K_k^dagger, unnormalized.
Matrix apply_kraus(const Matrix& rho, std::span<const Matrix> kraus);

/// Qubit count for a power-of-two dimension; throws otherwise.
std::size_t qubits_for_dimension(std::size_t dim);

}  // namespace superact
