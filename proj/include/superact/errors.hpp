#pragma once

#include <stdexcept>
#include <string>

namespace superact {

/// Post-selection branch whose weight is too small to normalize.
class DegenerateProjection : public std::runtime_error {
 public:
  explicit DegenerateProjection(double weight)
      : std::runtime_error("degenerate projection (weight " + std::to_string(weight) + ")"),
        weight_(weight) {}
  double weight() const { return weight_; }

 private:
  double weight_;
};

class NotXShaped : public std::runtime_error {
 public:
  explicit NotXShaped(double leakage)
      : std::runtime_error("matrix is not X-shaped (off-pattern magnitude " +
                           std::to_string(leakage) + ")"),
        leakage_(leakage) {}
  double leakage() const { return leakage_; }

 private:
  double leakage_;
};

class DistillationImpossible : public std::runtime_error {
 public:
  explicit DistillationImpossible(double probability)
      : std::runtime_error("distillation success probability " + std::to_string(probability) +
                           " is below 1e-14"),
        probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace superact
