#pragma once

// Plane map between "image" coordinates and the slit-plane model chart. The
// model is flat spacetime minus the vertical slit {0} x [-1, 1]; the image
// chart squeezes the slit to a point at the origin. Points with |Y| >= |X|
// shift by one unit in t (closed-set priority on the diagonals); in between,
// the shift is ramped and the model height solves y + k(y/(|X|+1)) = Y.

#include "lorlab/geometry.hpp"

namespace lorlab {

// exp(-1/t) for t > 0, else 0. Smooth, flat at 0.
double bump_h(double t);

// Odd-ish smooth ramp: +1 for t <= -1/2, -1 for t >= 1/2, built from bump_h.
double ramp_k(double t);

struct SlitImageMap {
  // Image chart -> model chart (the map users' probe points go through).
  Point to_model(Point image) const;
  // Model chart -> image chart.
  Point to_image(Point model) const;
  // Jacobian determinant of to_image at a model point (dY/dy; dX/dx == 1).
  double jacobian_det(Point model) const;
};

}  // namespace lorlab
