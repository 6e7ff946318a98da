#include "lorlab/phimap.hpp"

#include <cmath>

namespace lorlab {

double bump_h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double ramp_k(double t) {
  double a = bump_h(0.5 - t);
  double b = bump_h(0.5 + t);
  double denom = a + b;
  if (denom <= 0.0) return t >= 0.0 ? -1.0 : 1.0;
  return 2.0 * a / denom - 1.0;
}

Point SlitImageMap::to_image(Point p) const {
  double scale = std::fabs(p.x) + 1.0;
  double u = p.t / scale;
  return {p.x, p.t + ramp_k(u)};
}

double SlitImageMap::jacobian_det(Point p) const {
  // dY/dy = 1 + k'(u)/scale, computed by central difference on the smooth
  // ramp; dX/dx = 1 and dY/dx does not enter the determinant's diagonal
  // product since dX/dt = 0.
  double scale = std::fabs(p.x) + 1.0;
  double u = p.t / scale;
  double eps = 1e-6;
  double kp = (ramp_k(u + eps) - ramp_k(u - eps)) / (2.0 * eps);
  return 1.0 + kp / scale;
}

Point SlitImageMap::to_model(Point image) const {
  double X = image.x, Y = image.t;
  double ax = std::fabs(X);
  // Closed-set priority: the diagonals belong to the shifted outer sheets.
  if (Y >= ax) return {X, Y + 1.0};
  if (Y <= -ax) return {X, Y - 1.0};
  // Inner wedge |Y| < |X|: solve y + k(y/(|X|+1)) = Y by bisection. The
  // bracket endpoints straddle a root; with multiple roots the bisection
  // limit is still an exact preimage, which is all the model needs.
  double scale = ax + 1.0;
  double lo = -scale, hi = scale;
  auto f = [&](double y) { return y + ramp_k(y / scale) - Y; };
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {X, 0.5 * (lo + hi)};
}

}  // namespace lorlab
