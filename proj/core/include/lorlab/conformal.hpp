#pragma once

// Conformal-weight constructions beyond the raw factor type: per-annulus
// damping that caps the total timelike diameter of a model.

#include "lorlab/geometry.hpp"

namespace lorlab {

// Conservative upper bound on the weighted proper length of any future
// causal curve staying inside `outer` minus the interior of `inner`:
// (sampled max of the current weight) x (base-metric time budget of the
// box). For flat models the budget is the t-extent; for the waist it is the
// integral of 1/sqrt(s) over the box's t-range.
double annulus_causal_bound(const SpacetimeModel& m, const Window& outer,
                            const Window& inner);

// Suppressor sized from the model: annulus i >= 2 is damped to the target
// value 1 / (2^i k_i) with k_i = margin x annulus_causal_bound, so the
// damped length of any causal curve beyond the innermost box is bounded by
// sum 2^-i. The innermost box keeps weight 1.
ConformalFactor make_suppressor(const SpacetimeModel& m,
                                CompactExhaustion boxes, double ramp);

}  // namespace lorlab
