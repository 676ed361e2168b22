#pragma once

#include <string>

namespace superact {

/// Decimal form with 17 significant digits (exact round trip) and '.' as the
/// separator, independent of the global locale.
std::string format_double(double x);

}  // namespace superact
