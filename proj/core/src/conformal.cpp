#include "lorlab/conformal.hpp"

#include <algorithm>

#include "lorlab/waist.hpp"

namespace lorlab {

double annulus_causal_bound(const SpacetimeModel& m, const Window& outer,
                            const Window& inner) {
  // Time budget of the box under the base metric: the proper length of any
  // future causal curve is at most this.
  double budget;
  if (m.base == BaseMetric::Minkowski) {
    budget = outer.t1 - outer.t0;
  } else {
    // integral of 1/sqrt(s) over the t-range, split at the waist.
    double below = outer.t0 < 0.0
                       ? waist_max_proper_time(m.waist, outer.t0) -
                             waist_max_proper_time(m.waist, std::min(outer.t1, 0.0))
                       : 0.0;
    double above = outer.t1 > 0.0
                       ? waist_max_proper_time(m.waist, -outer.t1) -
                             waist_max_proper_time(m.waist, std::min(-outer.t0, 0.0))
                       : 0.0;
    budget = below + above;
  }

  // Sampled max of the existing weight on the annulus.
  double wmax = 0.0;
  const int n = 64;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      Point p{outer.x0 + (outer.x1 - outer.x0) * i / n,
              outer.t0 + (outer.t1 - outer.t0) * j / n};
      bool in_inner = p.x > inner.x0 && p.x < inner.x1 && p.t > inner.t0 &&
                      p.t < inner.t1;
      if (in_inner) continue;
      wmax = std::max(wmax, m.conformal.omega(p));
    }
  }
  return std::max(wmax, 1e-6) * budget;
}

ConformalFactor make_suppressor(const SpacetimeModel& m,
                                CompactExhaustion boxes, double ramp) {
  std::vector<double> scale(boxes.boxes.size(), 1.0);
  for (size_t i = 1; i < boxes.boxes.size(); ++i) {
    double bound = annulus_causal_bound(m, boxes.boxes[i], boxes.boxes[i - 1]);
    scale[i] = 1.1 * bound + 1.0;
  }
  return ConformalFactor::suppressor(std::move(boxes), std::move(scale), ramp);
}

}  // namespace lorlab
