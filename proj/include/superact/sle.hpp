#pragma once

#include "superact/quantum_state.hpp"

namespace superact {

enum class SleQuantifier { Negativity, MinEigenvalueAfterPT };

const char* to_string(SleQuantifier q);

struct SleConfig {
  int theta_points = 64;  // on [0, pi/2], endpoints included
  int phi_points = 64;    // on [0, 2pi)
  int refine_starts = 3;
  int refine_steps = 500;
  double parameter_tolerance = 1e-9;
};

struct SLEResult {
  double value;
  double theta;
  double phi;
  SleQuantifier quantifier;
  DensityMatrix localized_state;
};

/// cos(theta)|0> + sin(theta) e^{i phi}|1>
PureState bloch_state(double theta, double phi);

/// Normalized state on the Kept pair after projecting the single Measured
/// qubit onto bloch_state(theta, phi). Throws DegenerateProjection.
DensityMatrix localized_pair(const DensityMatrix& rho, const SubsystemPartition& pair, double theta,
                             double phi);

/// Quantifier of localized_pair(...), with the transpose on the second kept qubit.
double sle_objective(const DensityMatrix& rho, const SubsystemPartition& pair,
                     SleQuantifier quantifier, double theta, double phi);

/// Negativity is maximized; the minimum eigenvalue after partial
/// transposition is minimized. Grid search, then simplex refinement from the
/// best grid points. Degenerate projections are skipped; throws
/// DegenerateProjection when every grid point is degenerate.
SLEResult sle_quantify(const DensityMatrix& rho, const SubsystemPartition& pair,
                       SleQuantifier quantifier, const SleConfig& config = {});

}  // namespace superact
