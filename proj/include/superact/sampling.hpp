#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "superact/quantum_state.hpp"

namespace superact {

/// splitmix64 applied to seed + counter * golden ratio constant. Output
/// depends only on (seed, counter), so streams are reproducible everywhere.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_double();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// M0, M1, M2 are cos(k pi/3) X + sin(k pi/3) Y.
enum class Observable { X, Y, Z, M0, M1, M2 };

/// Parses per-qubit tokens x, y, z, m0, m1, m2 written back to back, e.g.
/// "zzz" or "m1m1m1". Case-insensitive. Throws std::invalid_argument.
std::vector<Observable> parse_setting(std::string_view setting);
std::string setting_name(const std::vector<Observable>& setting);

/// Outcome probabilities of measuring every qubit in the eigenbasis of its
/// observable. Outcome bit 0 is the +1 eigenvalue; index is big-endian.
std::vector<double> born_probabilities(const DensityMatrix& rho, const std::vector<Observable>& setting);

struct Histogram {
  std::string setting;
  std::uint64_t shots;
  std::uint64_t seed;
  /// counts[outcome index]
  std::vector<std::uint64_t> counts;
  std::size_t n_qubits;

  std::string to_json() const;
};

/// Throws std::invalid_argument for shots == 0 or a setting of the wrong length.
Histogram sample_counts(const DensityMatrix& rho, const std::vector<Observable>& setting,
                        std::uint64_t shots, std::uint64_t seed);

/// Mean of the product of the +-1 outcomes.
double correlation(const Histogram& h);
/// Fraction of all-zero and all-one outcomes.
double population(const Histogram& h);

/// Exact tr(rho O_1 x ... x O_n).
double exact_correlation(const DensityMatrix& rho, const std::vector<Observable>& setting);

}  // namespace superact
