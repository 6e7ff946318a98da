#pragma once

// Closed-form reference values for the waist cylinder: the maximal proper
// time from a point below the waist up to the waist row is the integral of
// 1/sqrt(s(t)), independent of the angular coordinate.

#include "lorlab/geometry.hpp"

namespace lorlab {

// Maximal proper time along future timelike curves from (theta, t0), t0 < 0,
// to the waist row t = 0. Evaluated as integral_{t0}^{0} dt / sqrt(s(t))
// with the substitution t = -u^2 removing the endpoint singularity.
double waist_max_proper_time(const WaistParams& w, double t0);

}  // namespace lorlab
