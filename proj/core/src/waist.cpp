#include "lorlab/waist.hpp"

#include <cmath>
#include <limits>

namespace lorlab {
namespace {

constexpr double kGlNodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

}  // namespace

double waist_max_proper_time(const WaistParams& w, double t0) {
  if (t0 >= 0.0) return 0.0;
  // The quadratic profile has s ~ t^2 near the waist, so 1/sqrt(s) ~ 1/|t|
  // and the proper time to the waist diverges.
  if (w.profile == WaistParams::Profile::ArctanSq)
    return std::numeric_limits<double>::infinity();
  // t = -u^2, dt = -2u du: integral over u in [0, sqrt(-t0)] of
  // 2u / sqrt(s(-u^2)) du; the integrand extends smoothly to u = 0.
  double umax = std::sqrt(-t0);
  auto integrand = [&](double u) {
    if (u <= 0.0) return std::sqrt(2.0 * M_PI);  // lim with s(t)~(2/pi)|t|
    return 2.0 * u / std::sqrt(w.s_of_t(-u * u));
  };
  // Composite 64-panel GL8 is plenty for these smooth profiles.
  const int panels = 64;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = umax * p / panels, b = umax * (p + 1) / panels;
    double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int k = 0; k < 8; ++k)
      total += kGlWeights[k] * integrand(mid + hw * kGlNodes[k]) * hw;
  }
  return total;
}

}  // namespace lorlab
