#pragma once

#include <map>
#include <string>
#include <vector>

#include "superact/quantum_state.hpp"

namespace superact {

/// Diagonal, mirrored diagonal and anti-diagonal of an even-dimensional
/// matrix: a_i = m(i,i), b_i = m(D-1-i, D-1-i), c_i = m(i, D-1-i).
struct XShapeView {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<Complex> c;
  double max_off_pattern_magnitude = 0.0;

  /// The X matrix carried by (a, b, c); off-pattern entries are zero.
  Matrix reconstruct() const;
};

/// Never rejects; entries off the X pattern with magnitude above `tolerance`
/// only contribute to max_off_pattern_magnitude (smaller ones are ignored).
XShapeView x_shape_view(const Matrix& m, double tolerance = 0.0);
XShapeView x_shape_view(const DensityMatrix& rho, double tolerance = 0.0);

/// |c_i| - sum_{j != i} sqrt(a_j b_j) for every i.
std::vector<double> gme_concurrence_terms(const DensityMatrix& rho);

/// 2 max(0, max_i term_i). Throws NotXShaped when off-pattern entries exceed
/// 1e-8.
double gme_concurrence_x(const DensityMatrix& rho);

/// log2 of the trace norm of the partial transpose over party B, computed as
/// log2(1 + 2 |sum of negative eigenvalues| / tr rho).
double negativity(const DensityMatrix& rho, const SubsystemPartition& bipartition);

/// Smallest eigenvalue of the partial transpose over party B.
double min_eig_after_pt(const DensityMatrix& rho, const SubsystemPartition& bipartition);

/// tr(W rho) with W = I/2 - |G0+><G0+|.
double ghz_witness_expectation(const DensityMatrix& rho);

/// tr(W rho) with W = (2/3) I - |W><W|.
double w_witness_expectation(const DensityMatrix& rho);

enum class FidelityTarget { GHZ3, EPR };

/// GHZ3 needs "pop", "m0", "m1", "m2"; EPR needs "pop", "xx", "yy".
/// "pop" is the probability of an all-equal computational outcome.
/// Throws std::invalid_argument naming the first missing key.
double fidelity_from_settings(const std::map<std::string, double>& expectations,
                              FidelityTarget target);

}  // namespace superact
