#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "superact/certify.hpp"
#include "superact/distillation.hpp"
#include "superact/errors.hpp"

using namespace superact;

namespace {
const double kS = 1.0 / std::sqrt(2.0);

std::vector<double> grid21() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

// Entries of the normalized two-copy output written out by hand.
Matrix distilled_ghz_oracle(double p) {
  const double norm = (3 * p * p + 1) / 8;
  Matrix m(8, 8);
  for (std::size_t i = 1; i < 7; ++i) m(i, i) = (1 - p) * (1 - p) / 64 / norm;
  m(0, 0) = m(7, 7) = (1 + 3 * p) * (1 + 3 * p) / 64 / norm;
  m(0, 7) = m(7, 0) = p * p / 4 / norm;
  return m;
}

DensityMatrix ghz_diagonal(const std::array<double, 8>& w) {
  Matrix m(8, 8);
  for (int i = 0; i < 4; ++i) {
    m += w[2 * i] * make_ghz(i, 1).projector();
    m += w[2 * i + 1] * make_ghz(i, -1).projector();
  }
  return DensityMatrix::from_matrix(m.hermitian_part());
}

void check_state_invariants(const DensityMatrix& rho) {
  CHECK(rho.matrix().hermiticity_defect() <= 1e-10);
  CHECK(std::abs(rho.trace() - 1.0) <= 1e-10);
  CHECK(rho.eigenvalues().front() >= -1e-9);
}
}  // namespace

TEST_CASE("parity-check projector") {
  const Matrix p = pbs_projector();
  CHECK(max_abs_diff(p * PureState::basis(2, 0b01).as_column(), Matrix(4, 1)) == 0.0);
  CHECK(max_abs_diff(p * p, p) == 0.0);
  // Two different GHZ components never survive the three parity checks.
  const auto pair = tensor(make_ghz(0, 1), make_ghz(1, 1));
  const std::size_t order[6] = {0, 3, 1, 4, 2, 5};
  const Matrix col = permute_qubits(pair.projector(), order);
  const Matrix ppp = kron(kron(p, p), p);
  CHECK((ppp * col * ppp.adjoint()).max_abs() < 1e-15);
}

TEST_CASE("parity operators") {
  const auto ops = parity_operators();
  const Matrix plus00 = ops.plus * PureState::basis(2, 0).as_column();
  CHECK(std::abs(plus00(0, 0) - kS) < 1e-15);
  CHECK(std::abs(plus00(1, 0)) < 1e-15);
  const Matrix minus11 = ops.minus * PureState::basis(2, 3).as_column();
  CHECK(std::abs(minus11(1, 0) + kS) < 1e-15);
  CHECK(std::abs(minus11(0, 0)) < 1e-15);
  // P+^dag P+ + P-^dag P- = P
  CHECK(max_abs_diff(ops.plus.adjoint() * ops.plus + ops.minus.adjoint() * ops.minus, pbs_projector()) < 1e-15);
}

TEST_CASE("two-copy parity-check protocol on pure GHZ") {
  const auto g = noisy_ghz(1.0);
  const auto out = distill_tripartite(g, g);
  CHECK(std::abs(out.success_probability - 0.5) < 1e-14);
  CHECK(max_abs_diff(out.state.matrix(), make_ghz(0, 1).projector()) < 1e-14);
  CHECK(out.parity_branch_weights.size() == 8);
  double total = 0.0;
  for (const auto& [label, w] : out.parity_branch_weights) {
    CHECK(label.size() == 3);
    total += w;
  }
  CHECK(std::abs(total - out.success_probability) < 1e-14);
}

TEST_CASE("two-copy parity-check protocol matches the closed form on a 21-point grid") {
  for (double p : grid21()) {
    CAPTURE(p);
    const auto rho = noisy_ghz(p);
    const auto out = distill_tripartite(rho, rho);
    CHECK(max_abs_diff(out.state.matrix(), distilled_ghz_oracle(p)) <= 1e-12);
    CHECK(max_abs_diff(out.state.matrix(), analytic_distilled_noisy_ghz(p).matrix()) <= 1e-12);
    CHECK(std::abs(out.success_probability - (3 * p * p + 1) / 8) <= 1e-12);
    const double f = fidelity_with_pure(out.state, make_ghz(0, 1));
    CHECK(std::abs(f - analytic_fidelity_after(p)) <= 1e-12);
    CHECK(std::abs(f - (25 * p * p + 6 * p + 1) / (24 * p * p + 8)) <= 1e-12);
    check_state_invariants(out.state);
  }
  CHECK(std::abs(distill_tripartite(noisy_ghz(0.5), noisy_ghz(0.5)).state(0, 7).real() - 2 * 0.25 / (3 * 0.25 + 1)) <
        1e-14);
}

TEST_CASE("parity-check output on X-shaped inputs is the X-restricted elementwise product") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = noise_model_state(u(rng), u(rng), u(rng));
    const auto b = noise_model_state(u(rng), u(rng), u(rng));
    Matrix h = hadamard_product(a.matrix(), b.matrix());
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c)
        if (c != r && c != 7 - r) h(r, c) = 0.0;
    const double tr = h.trace().real();
    const auto out = distill_tripartite(a, b);
    CHECK(std::abs(out.success_probability - tr) < 1e-13);
    CHECK(max_abs_diff(out.state.matrix(), h * (1.0 / tr)) < 1e-12);
  }
}

TEST_CASE("parity-check protocol rejects unusable inputs") {
  const auto zero = DensityMatrix::from_pure(PureState::basis(3, 0));
  const auto one = DensityMatrix::from_pure(PureState::basis(3, 7));
  CHECK_THROWS_AS(distill_tripartite(zero, one), DistillationImpossible);
  CHECK_THROWS_AS(distill_tripartite(noisy_bell(0.5), noisy_bell(0.5)), std::invalid_argument);
}

TEST_CASE("bilateral CNOT protocol keeps the elementwise square") {
  std::mt19937_64 rng(43);
  for (std::size_t n : {1U, 2U, 3U}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = testing::random_density(n, rng);
      const auto b = testing::random_density(n, rng);
      const Matrix h = hadamard_product(a.matrix(), b.matrix());
      const double tr = h.trace().real();
      const auto out = distill_cnot(a, b);
      CHECK(std::abs(out.success_probability - tr) < 1e-13);
      CHECK(max_abs_diff(out.state.matrix(), h * (1.0 / tr)) < 1e-12);
      check_state_invariants(out.state);
    }
  }
  const auto e0 = DensityMatrix::from_pure(PureState::basis(3, 0));
  const auto out = distill_cnot(e0, e0);
  CHECK(out.success_probability == doctest::Approx(1.0));
  CHECK(max_abs_diff(out.state.matrix(), e0.matrix()) < 1e-15);
}

TEST_CASE("bilateral CNOT on noisy W") {
  for (double p : {0.2, 0.5, 0.6, 0.9}) {
    const auto w = noisy_w(p);
    const auto out = distill_cnot(w, w);
    const double tr = (5 * p * p + 3) / 24;
    CHECK(std::abs(out.success_probability - tr) < 1e-13);
    CHECK(std::abs(out.state(0b001, 0b010).real() - (p / 3) * (p / 3) / tr) < 1e-13);
    const double d1 = (3 + 5 * p) / 24;
    CHECK(std::abs(out.state(0b100, 0b100).real() - d1 * d1 / tr) < 1e-13);
  }
}

TEST_CASE("localization") {
  for (double p : grid21()) {
    CAPTURE(p);
    const auto x = localize(noisy_ghz(p), 2, LocalizationBasis::X, 0);
    CHECK(max_abs_diff(x.state.matrix(), noisy_bell(p).matrix()) < 1e-14);
    const auto xm = localize(noisy_ghz(p), 2, LocalizationBasis::X, 1);
    CHECK(max_abs_diff(xm.state.matrix(), noisy_bell(p).matrix()) < 1e-14);

    const auto c = localize(noisy_w(p), 2, LocalizationBasis::Computational, 0);
    const auto flipped = apply_local(c.state, pauli_x(), 1);
    Matrix expected = 4 * p / (p + 3) * bell_phi_plus().projector();
    for (std::size_t i = 0; i < 4; ++i) expected(i, i) += 3 * (1 - p) / (4 * (p + 3));
    CHECK(max_abs_diff(flipped.matrix(), expected) < 1e-14);

    const auto d = distill_tripartite(noisy_ghz(p), noisy_ghz(p)).state;
    const double f2 = fidelity_with_pure(localize(d, 2, LocalizationBasis::X, 0).state, bell_phi_plus());
    CHECK(std::abs(f2 - (13 * p * p + 2 * p + 1) / (4 * (3 * p * p + 1))) < 1e-12);
  }
  CHECK_THROWS_AS(localize(noisy_ghz(0.5), 3, LocalizationBasis::X, 0), std::invalid_argument);
  CHECK_THROWS_AS(localize(noisy_ghz(0.5), 0, LocalizationBasis::X, 2), std::invalid_argument);
}

TEST_CASE("closed-form distilled state") {
  CHECK(max_abs_diff(analytic_distilled_noisy_ghz(1.0).matrix(), make_ghz(0, 1).projector()) < 1e-15);
  CHECK(max_abs_diff(analytic_distilled_noisy_ghz(0.0).matrix(), maximally_mixed(3).matrix()) < 1e-15);
  CHECK(analytic_distilled_noisy_ghz(0.5)(0, 0).real() == doctest::Approx(2.5 * 2.5 / 8 / 1.75).epsilon(1e-14));
  CHECK(analytic_distilled_noisy_ghz(0.5)(0, 0).real() == doctest::Approx(0.4464).epsilon(1e-4));
  CHECK(analytic_fidelity_after(1.0) == doctest::Approx(1.0));
  CHECK(std::abs(analytic_fidelity_after(0.5) - 10.25 / 14) < 1e-15);
}

TEST_CASE("component fidelity update") {
  for (double p : grid21()) {
    std::array<double, 8> f;
    f.fill((1 - p) / 8);
    f[0] = (1 + 7 * p) / 8;
    CHECK(std::abs(component_fidelity_update(f)[0] - analytic_fidelity_after(p)) < 1e-12);
  }
  const std::array<double, 8> pure{1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(component_fidelity_update(pure) == pure);
  std::array<double, 8> uniform;
  uniform.fill(0.125);
  for (double x : component_fidelity_update(uniform)) CHECK(std::abs(x - 0.125) < 1e-15);

  // Operational route: GHZ-diagonal inputs through the full protocol.
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::array<double, 8> w;
    double s = 0.0;
    for (auto& x : w) s += (x = u(rng));
    for (auto& x : w) x /= s;
    const auto rule = component_fidelity_update(w);
    const auto out = distill_tripartite(ghz_diagonal(w), ghz_diagonal(w)).state;
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(fidelity_with_pure(out, make_ghz(i, 1)) - rule[2 * i]) < 1e-12);
      CHECK(std::abs(fidelity_with_pure(out, make_ghz(i, -1)) - rule[2 * i + 1]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(component_fidelity_update({0.5, 0, 0, 0, 0, 0, 0, 0}), std::invalid_argument);
}
