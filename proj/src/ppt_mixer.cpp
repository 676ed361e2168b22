#include "superact/ppt_mixer.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace superact {

const char* to_string(CertifiedSign s) {
  switch (s) {
    case CertifiedSign::Entangled: return "entangled";
    case CertifiedSign::NotDetected: return "not-detected";
    case CertifiedSign::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

Matrix transpose_qubit(const Matrix& m, std::size_t qubit) {
  const std::size_t q[1] = {qubit};
  return partial_transpose(m, q);
}

}  // namespace

WitnessResult ppt_mixer_witness(const DensityMatrix& rho, const PptMixerConfig& cfg) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("ppt_mixer_witness expects three qubits");
  if (cfg.feasibility_tolerance <= 0.0 || cfg.max_iterations < 1 || cfg.initial_penalty <= 0.0 ||
      cfg.over_relaxation <= 0.0 || cfg.over_relaxation >= 2.0 || cfg.stagnation_window < 1 ||
      cfg.rebalance_interval < 1) {
    throw std::invalid_argument("ppt_mixer_witness: invalid solver configuration");
  }
  constexpr std::size_t n = 8;
  constexpr std::size_t kBlocks = 6;  // P_0, Q_0, P_1, Q_1, P_2, Q_2
  const Matrix& r = rho.matrix();
  const Matrix identity = Matrix::identity(n);

  std::array<Matrix, kBlocks> x, z, u, v, zprev;
  for (std::size_t j = 0; j < kBlocks; ++j) {
    z[j] = Matrix(n, n);
    u[j] = Matrix(n, n);
  }
  double sigma = cfg.initial_penalty;
  const double alpha = cfg.over_relaxation;
  Matrix w(n, n);
  std::deque<double> history;
  WitnessResult out;

  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    // Projection onto the affine set, in closed form.
    std::array<Matrix, 3> m;
    Matrix mean(n, n);
    for (std::size_t j = 0; j < kBlocks; ++j) v[j] = z[j] - u[j];
    for (std::size_t i = 0; i < 3; ++i) {
      m[i] = v[2 * i] + transpose_qubit(v[2 * i + 1], i);
      mean += m[i];
    }
    mean *= 1.0 / 3.0;
    w = mean - (2.0 / (3.0 * sigma)) * r;
    const double shift = (1.0 - w.trace().real()) / static_cast<double>(n);
    w += shift * identity;
    for (std::size_t i = 0; i < 3; ++i) {
      Matrix lambda = w - m[i];
      lambda *= 0.5;
      x[2 * i] = v[2 * i] + lambda;
      x[2 * i + 1] = v[2 * i + 1] + transpose_qubit(lambda, i);
    }

    zprev = z;
    double r2 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < kBlocks; ++j) {
      Matrix relaxed = alpha * x[j] + (1.0 - alpha) * zprev[j];
      z[j] = project_psd(relaxed + u[j]);
      u[j] += relaxed - z[j];
      r2 += std::pow((x[j] - z[j]).frobenius_norm(), 2);
      s2 += std::pow((z[j] - zprev[j]).frobenius_norm(), 2);
    }
    const double primal = std::sqrt(r2);
    const double dual = sigma * std::sqrt(s2);
    const double objective = frobenius_inner(w, r).real();

    history.push_back(objective);
    if (history.size() > static_cast<std::size_t>(cfg.stagnation_window) + 1) history.pop_front();

    out.primal_residual = primal;
    out.dual_residual = dual;

    if (primal <= cfg.feasibility_tolerance && dual <= cfg.feasibility_tolerance &&
        history.size() == static_cast<std::size_t>(cfg.stagnation_window) + 1 &&
        std::abs(history.back() - history.front()) < cfg.stagnation_tolerance) {
      double worst = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        worst = std::max(worst, (w - z[2 * i] - transpose_qubit(z[2 * i + 1], i)).frobenius_norm());
      }
      if (worst <= cfg.feasibility_tolerance) {
        out.converged = true;
        ++it;
        break;
      }
    }

    if ((it + 1) % cfg.rebalance_interval == 0) {
      if (primal > 10.0 * dual) {
        sigma *= 2.0;
        for (auto& uj : u) uj *= 0.5;
      } else if (dual > 10.0 * primal) {
        sigma *= 0.5;
        for (auto& uj : u) uj *= 2.0;
      }
    }
  }

  out.iterations = it;
  out.witness = w;
  for (std::size_t i = 0; i < 3; ++i) {
    out.p[i] = z[2 * i];
    out.q[i] = z[2 * i + 1];
    out.certificate_residuals[i] = (w - out.p[i] - transpose_qubit(out.q[i], i)).frobenius_norm();
  }
  out.optimal_value = frobenius_inner(w, r).real();
  if (!out.converged) {
    out.sign = CertifiedSign::Indeterminate;
  } else if (out.optimal_value < -cfg.sign_margin) {
    out.sign = CertifiedSign::Entangled;
  } else if (out.optimal_value > cfg.sign_margin) {
    out.sign = CertifiedSign::NotDetected;
  } else {
    out.sign = CertifiedSign::Indeterminate;
  }
  return out;
}

}  // namespace superact
