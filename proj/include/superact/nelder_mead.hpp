#pragma once

#include <functional>
#include <vector>

namespace superact {

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  int steps;
};

/// Downhill simplex minimization. The initial simplex is x0 plus one vertex
/// per coordinate displaced by step[k]. Stops after `max_steps` iterations or
/// once every vertex lies within `x_tolerance` (max norm) of the best one.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& step,
                             int max_steps, double x_tolerance);

}  // namespace superact
