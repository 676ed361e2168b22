#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superact {

enum class Property {
  GME,
  SLE,
  GMEAfterDistill,
  SLEAfterDistill,
  WGME,
  WGMEAfterDistill,
  WSLE,
};

std::string_view property_name(Property p);
/// Accepts the names returned by property_name; throws std::invalid_argument.
Property parse_property(std::string_view name);
const std::vector<Property>& all_properties();

/// Signed quantity that is positive exactly when the property is certified
/// at noise parameter p:
///   GME, GME-after-distill: largest inner term of the X-state concurrence
///   SLE, SLE-after-distill: minus the smallest post-projection PT eigenvalue
///   W-GME, W-GME-after-distill: minus the PPT-mixer optimum
///   W-SLE: minus the PT eigenvalue of the computational-basis localized pair
double certifying_quantity(Property property, double p);

struct ThresholdReport {
  Property property;
  double crossing_p;
  /// Half-width of the final bracket.
  double bracket_width;
  int evaluations;
};

std::pair<double, double> default_range(Property property);
double default_tolerance(Property property);

/// Bisection on the sign of certifying_quantity until the bracket is no
/// wider than `tolerance`. Throws NoSignChange when both ends agree.
ThresholdReport find_threshold(Property property, std::pair<double, double> p_range,
                               double tolerance);
ThresholdReport find_threshold(Property property);

struct AnalyticConstant {
  std::string name;
  double value;
  std::string expression;
  /// False for constants quoted from outside results rather than derived here.
  bool computed;
};

const std::vector<AnalyticConstant>& analytic_constants();
/// Throws std::out_of_range for unknown names.
const AnalyticConstant& lookup(std::string_view name);

struct FidelityRow {
  double p;
  double f_initial;  // (1+7p)/8
  double f1;         // two-copy parity-check output vs GHZ
  double f2;         // after localization vs Phi+
};

std::vector<FidelityRow> fidelity_curves(const std::vector<double>& p_grid);

}  // namespace superact
