#include "superact/thresholds.hpp"

#include <cmath>
#include <stdexcept>

#include "superact/certify.hpp"
#include "superact/distillation.hpp"
#include "superact/errors.hpp"
#include "superact/ppt_mixer.hpp"
#include "superact/quantum_state.hpp"
#include "superact/sle.hpp"

namespace superact {

namespace {

struct PropertyInfo {
  Property property;
  std::string_view name;
  double lo, hi;
  double tolerance;
};

constexpr PropertyInfo kInfo[] = {
    {Property::GME, "GME", 0.3, 0.6, 1e-6},
    {Property::SLE, "SLE", 0.2, 0.5, 1e-6},
    {Property::GMEAfterDistill, "GME-after-distill", 0.2, 0.4, 1e-6},
    {Property::SLEAfterDistill, "SLE-after-distill", 0.2, 0.35, 1e-6},
    {Property::WGME, "W-GME", 0.4, 0.6, 1e-3},
    {Property::WGMEAfterDistill, "W-GME-after-distill", 0.45, 0.6, 1e-3},
    {Property::WSLE, "W-SLE", 0.1, 0.5, 1e-6},
};

const PropertyInfo& info(Property p) {
  for (const auto& i : kInfo)
    if (i.property == p) return i;
  throw std::invalid_argument("unknown property");
}

double max_term(const DensityMatrix& rho) {
  const auto t = gme_concurrence_terms(rho);
  double m = t.front();
  for (double x : t) m = std::max(m, x);
  return m;
}

const SubsystemPartition& pair_01() {
  static const SubsystemPartition part = SubsystemPartition::keep(3, {0, 1});
  return part;
}

double sle_signed(const DensityMatrix& rho) {
  return 0.0 - sle_quantify(rho, pair_01(), SleQuantifier::MinEigenvalueAfterPT).value;
}

}  // namespace

std::string_view property_name(Property p) { return info(p).name; }

Property parse_property(std::string_view name) {
  for (const auto& i : kInfo)
    if (i.name == name) return i.property;
  throw std::invalid_argument("unknown property \"" + std::string(name) + "\"");
}

const std::vector<Property>& all_properties() {
  static const std::vector<Property> all = [] {
    std::vector<Property> v;
    for (const auto& i : kInfo) v.push_back(i.property);
    return v;
  }();
  return all;
}

double certifying_quantity(Property property, double p) {
  switch (property) {
    case Property::GME:
      return max_term(noisy_ghz(p));
    case Property::SLE:
      return sle_signed(noisy_ghz(p));
    case Property::GMEAfterDistill:
      return max_term(distill_tripartite(noisy_ghz(p), noisy_ghz(p)).state);
    case Property::SLEAfterDistill:
      return sle_signed(distill_tripartite(noisy_ghz(p), noisy_ghz(p)).state);
    case Property::WGME:
      return 0.0 - ppt_mixer_witness(noisy_w(p)).optimal_value;
    case Property::WGMEAfterDistill:
      return 0.0 - ppt_mixer_witness(distill_cnot(noisy_w(p), noisy_w(p)).state).optimal_value;
    case Property::WSLE: {
      const auto local = localize(noisy_w(p), 2, LocalizationBasis::Computational, 0);
      const auto flipped = apply_local(local.state, pauli_x(), 1);
      return 0.0 - min_eig_after_pt(flipped, SubsystemPartition::bipartite(2, {1}));
    }
  }
  throw std::invalid_argument("unknown property");
}

std::pair<double, double> default_range(Property property) {
  const auto& i = info(property);
  return {i.lo, i.hi};
}

double default_tolerance(Property property) { return info(property).tolerance; }

ThresholdReport find_threshold(Property property, std::pair<double, double> range,
                               double tolerance) {
  auto [lo, hi] = range;
  if (!(tolerance > 0.0)) throw std::invalid_argument("find_threshold: tolerance must be positive");
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw std::invalid_argument("find_threshold: range must satisfy 0 <= lo < hi <= 1");
  }
  int evaluations = 0;
  auto present = [&](double p) {
    ++evaluations;
    return certifying_quantity(property, p) > 0.0;
  };
  const bool at_lo = present(lo);
  const bool at_hi = present(hi);
  if (at_lo == at_hi) {
    throw NoSignChange(std::string(property_name(property)) + ": certifying quantity has the same sign at " +
                       std::to_string(lo) + " and " + std::to_string(hi));
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (present(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {property, 0.5 * (lo + hi), 0.5 * (hi - lo), evaluations};
}

ThresholdReport find_threshold(Property property) {
  return find_threshold(property, default_range(property), default_tolerance(property));
}

const std::vector<AnalyticConstant>& analytic_constants() {
  static const std::vector<AnalyticConstant> constants = {
      {"GME", 3.0 / 7.0, "3/7", true},
      {"SLE", 1.0 / 3.0, "1/3", true},
      {"GME-after-distill", (4.0 * std::sqrt(3.0) - 3.0) / 13.0, "(4*sqrt(3)-3)/13", true},
      {"SLE-after-distill", (2.0 * std::sqrt(2.0) - 1.0) / 7.0, "(2*sqrt(2)-1)/7", true},
      {"W-SLE", 3.0 / 11.0, "3/11", true},
      {"GME-infinite-copy", 0.2, "0.2", false},
  };
  return constants;
}

const AnalyticConstant& lookup(std::string_view name) {
  for (const auto& c : analytic_constants())
    if (c.name == name) return c;
  throw std::out_of_range("no analytic constant named \"" + std::string(name) + "\"");
}

std::vector<FidelityRow> fidelity_curves(const std::vector<double>& p_grid) {
  std::vector<FidelityRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("fidelity_curves: p must lie in [0, 1]");
    const double d = 3.0 * p * p + 1.0;
    rows.push_back({p, (1.0 + 7.0 * p) / 8.0, (25.0 * p * p + 6.0 * p + 1.0) / (8.0 * d),
                    (13.0 * p * p + 2.0 * p + 1.0) / (4.0 * d)});
  }
  return rows;
}

}  // namespace superact
