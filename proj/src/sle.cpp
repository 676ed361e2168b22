#include "superact/sle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "superact/certify.hpp"
#include "superact/errors.hpp"
#include "superact/nelder_mead.hpp"

namespace superact {

const char* to_string(SleQuantifier q) {
  return q == SleQuantifier::Negativity ? "negativity" : "min-eigenvalue-after-pt";
}

PureState bloch_state(double theta, double phi) {
  const Complex a{std::cos(theta), 0.0};
  const Complex b = std::sin(theta) * std::exp(Complex{0.0, phi});
  // Renormalize to absorb the last ulp of cos^2 + sin^2.
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return PureState({a / norm, b / norm});
}

namespace {

void check_pair(const DensityMatrix& rho, const SubsystemPartition& pair) {
  if (rho.n_qubits() != 3 || pair.n_qubits() != 3) {
    throw std::invalid_argument("SLE analysis expects a three-qubit state");
  }
  if (pair.qubits(Party::Measured).size() != 1 || pair.qubits(Party::Kept).size() != 2) {
    throw std::invalid_argument("SLE partition must keep two qubits and measure one");
  }
}

const SubsystemPartition& second_qubit_cut() {
  static const SubsystemPartition cut = SubsystemPartition::bipartite(2, {1});
  return cut;
}

// The sign convention makes every objective a minimization.
double signed_objective(const DensityMatrix& rho, const SubsystemPartition& pair,
                        SleQuantifier quantifier, double theta, double phi) {
  const double v = sle_objective(rho, pair, quantifier, theta, phi);
  return quantifier == SleQuantifier::Negativity ? -v : v;
}

double wrap_phi(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

}  // namespace

DensityMatrix localized_pair(const DensityMatrix& rho, const SubsystemPartition& pair, double theta,
                             double phi) {
  check_pair(rho, pair);
  const auto measured = SubsystemPartition::measure(3, pair.qubits(Party::Measured));
  DensityMatrix state = project_subsystem(rho, bloch_state(theta, phi), measured, true).state;
  // project_subsystem keeps ascending order; reorder to the pair's listing.
  const auto& kept = pair.qubits(Party::Kept);
  if (kept[0] > kept[1]) {
    const std::size_t swap[2] = {1, 0};
    state = permute_qubits(state, swap);
  }
  return state;
}

double sle_objective(const DensityMatrix& rho, const SubsystemPartition& pair,
                     SleQuantifier quantifier, double theta, double phi) {
  const DensityMatrix local = localized_pair(rho, pair, theta, phi);
  return quantifier == SleQuantifier::Negativity ? negativity(local, second_qubit_cut())
                                                 : min_eig_after_pt(local, second_qubit_cut());
}

SLEResult sle_quantify(const DensityMatrix& rho, const SubsystemPartition& pair,
                       SleQuantifier quantifier, const SleConfig& cfg) {
  check_pair(rho, pair);
  if (cfg.theta_points < 2 || cfg.phi_points < 1 || cfg.refine_starts < 0 || cfg.refine_steps < 0) {
    throw std::invalid_argument("sle_quantify: invalid configuration");
  }
  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  const double dtheta = half_pi / (cfg.theta_points - 1);
  const double dphi = two_pi / cfg.phi_points;

  struct GridPoint {
    double value;
    int i, j;
  };
  std::vector<GridPoint> grid;
  grid.reserve(static_cast<std::size_t>(cfg.theta_points * cfg.phi_points));
  for (int i = 0; i < cfg.theta_points; ++i) {
    for (int j = 0; j < cfg.phi_points; ++j) {
      try {
        grid.push_back({signed_objective(rho, pair, quantifier, i * dtheta, j * dphi), i, j});
      } catch (const DegenerateProjection&) {
      }
    }
  }
  if (grid.empty()) throw DegenerateProjection(0.0);
  const auto by_rank = [](const GridPoint& a, const GridPoint& b) {
    return std::tie(a.value, a.i, a.j) < std::tie(b.value, b.i, b.j);
  };
  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(cfg.refine_starts), grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(starts, 1)),
                    grid.end(), by_rank);

  double best_value = grid.front().value;
  double best_theta = grid.front().i * dtheta;
  double best_phi = grid.front().j * dphi;

  const auto f = [&](const std::vector<double>& x) {
    try {
      return signed_objective(rho, pair, quantifier, x[0], x[1]);
    } catch (const DegenerateProjection&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  for (std::size_t s = 0; s < starts; ++s) {
    const auto r = nelder_mead(f, {grid[s].i * dtheta, grid[s].j * dphi}, {dtheta / 2, dphi / 2},
                               cfg.refine_steps, cfg.parameter_tolerance);
    const double theta = r.x[0];
    const double phi = wrap_phi(r.x[1]);
    const double v = f({theta, phi});
    if (v < best_value) {
      best_value = v;
      best_theta = theta;
      best_phi = phi;
    }
  }

  const double value = quantifier == SleQuantifier::Negativity ? 0.0 - best_value : best_value;
  return {value, best_theta, best_phi, quantifier,
          localized_pair(rho, pair, best_theta, best_phi)};
}

}  // namespace superact
