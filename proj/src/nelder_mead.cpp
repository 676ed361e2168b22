#include "superact/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace superact {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& step,
                             int max_steps, double x_tolerance) {
  const std::size_t n = x0.size();
  if (n == 0 || step.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) pts[k + 1][k] += step[k];
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> idx(n + 1);
  auto order = [&] {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& worst, double t) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (c[k] - worst[k]);
    return p;
  };

  int steps = 0;
  for (; steps < max_steps; ++steps) {
    order();
    const auto& best = pts[idx[0]];
    double spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(pts[idx[i]][k] - best[k]));
    if (spread <= x_tolerance) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[idx[i]][k] / static_cast<double>(n);
    const std::size_t worst = idx[n];

    const auto xr = along(centroid, pts[worst], kReflect);
    const double fr = f(xr);
    if (fr < vals[idx[0]]) {
      const auto xe = along(centroid, pts[worst], kExpand);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[idx[n - 1]]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const auto xc = along(centroid, pts[worst], outside ? kContract : -kContract);
    const double fc = f(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = pts[idx[i]];
      for (std::size_t k = 0; k < n; ++k) p[k] = best[k] + kShrink * (p[k] - best[k]);
      vals[idx[i]] = f(p);
    }
  }
  order();
  return {pts[idx[0]], vals[idx[0]], steps};
}

}  // namespace superact
