#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "superact/quantum_state.hpp"

namespace superact {

struct DistillationOutcome {
  DensityMatrix state;
  double success_probability;
  /// Unnormalized weight of every post-selected branch, in a fixed order.
  std::vector<std::pair<std::string, double>> parity_branch_weights;
};

/// |00><00| + |11><11|
Matrix pbs_projector();

struct ParityOperators {
  Matrix plus;   // (|0><00| + |1><11|)/sqrt2, 2x4
  Matrix minus;  // (|0><00| - |1><11|)/sqrt2, 2x4
};
ParityOperators parity_operators();

/// Two-copy parity-check protocol on three-qubit states. Party k of the first
/// copy and party k of the second copy meet at a parity check; the first
/// output photon is kept and the second is measured in the X basis. Branches
/// with an odd number of minus outcomes are corrected by Z on party A.
/// Throws DistillationImpossible when nothing survives.
DistillationOutcome distill_tripartite(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Bilateral CNOT from copy 1 to copy 2 at every party, keeping only runs
/// where every target reads 0.
DistillationOutcome distill_cnot(const DensityMatrix& rho1, const DensityMatrix& rho2);

enum class LocalizationBasis { X, Computational };

/// Measures one qubit of a three-qubit state and post-selects `outcome`.
/// For the X-basis minus outcome the first remaining qubit receives Z.
Projection localize(const DensityMatrix& rho, std::size_t measured_qubit, LocalizationBasis basis,
                    int outcome);

/// Closed-form two-copy output for noisy GHZ inputs.
DensityMatrix analytic_distilled_noisy_ghz(double p);
/// (25p^2 + 6p + 1) / (24p^2 + 8)
double analytic_fidelity_after(double p);

/// Weights over (G0+, G0-, G1+, G1-, G2+, G2-, G3+, G3-) after one round of
/// the parity-check protocol on two identical GHZ-diagonal inputs.
std::array<double, 8> component_fidelity_update(const std::array<double, 8>& fidelities);

}  // namespace superact
