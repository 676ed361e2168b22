#pragma once

#include <array>

#include "superact/quantum_state.hpp"

namespace superact {

struct PptMixerConfig {
  double feasibility_tolerance = 1e-7;
  double stagnation_tolerance = 1e-9;
  int stagnation_window = 100;
  int max_iterations = 200000;
  double over_relaxation = 1.6;
  double initial_penalty = 1.0;
  int rebalance_interval = 50;
  /// Values within this distance of zero are not given a sign.
  double sign_margin = 1e-5;
};

enum class CertifiedSign { Entangled, NotDetected, Indeterminate };

const char* to_string(CertifiedSign s);

struct WitnessResult {
  double optimal_value = 0.0;
  Matrix witness;
  /// Index 0, 1, 2 is the cut that isolates qubit 0, 1, 2.
  std::array<Matrix, 3> p;
  std::array<Matrix, 3> q;
  /// ||W - P_i - Q_i^{T_i}||_F
  std::array<double, 3> certificate_residuals{};
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  CertifiedSign sign = CertifiedSign::Indeterminate;
};

/// min tr(W rho) over tr W = 1 and W = P_i + Q_i^{T_i}, P_i, Q_i >= 0 for
/// the three single-qubit cuts, solved by over-relaxed ADMM between the
/// affine constraints and six PSD cones.
WitnessResult ppt_mixer_witness(const DensityMatrix& rho, const PptMixerConfig& config = {});

}  // namespace superact
