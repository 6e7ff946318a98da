#pragma once

// The model catalog: named 2D spacetimes with curated probe data and the
// causal-ladder verdicts the diagnostics are expected to reproduce. Variants
// derive new models from a base scenario by adding an excision or a
// conformal weight with a known qualitative effect.

#include <optional>
#include <string>

#include "lorlab/geometry.hpp"

namespace lorlab {

// Ladder rungs the grid diagnostics evaluate, strongest condition last.
struct LadderFlags {
  bool chronological = true;    // no closed timelike chain
  bool causal = true;           // no closed causal chain
  bool distinguishing = true;   // distinct points have distinct I+/I-
  bool strongly_causal = true;  // no causal excursion returns near its start
  bool stably_causal = true;    // no cycle under widened cones
  bool outer_continuous = true; // no limit-miss set at sampled points
};

// Rungs above stable causality; recorded as catalog metadata (they concern
// properties the desk-scale diagnostics do not decide).
enum class UpperRung { None, CausallyContinuous, CausallySimple,
                       GloballyHyperbolic };

struct ProbePair {
  Point p, q;
};

struct Scenario {
  std::string name;
  std::string summary;
  SpacetimeModel model;
  bool image_coords = false;  // user points pass through the slit-image map
  LadderFlags expected;
  UpperRung upper = UpperRung::None;
  std::vector<double> grids;       // recommended spacings, coarse to fine
  std::vector<Point> miss_probes;  // curated points for limit-miss checks
  std::vector<ProbePair> pairs;    // curated distance probes
};

const std::vector<std::string>& scenario_names();
bool has_scenario(const std::string& name);
Scenario make_scenario(const std::string& name);

// Variant kinds: "vslit" (extra vertical slit), "pole" (blended inverse-
// square weight at a puncture), "blowup" (diverging weight along a vertical
// spine), "suppressed" (exhaustion damping making the diameter finite).
const std::vector<std::string>& variant_kinds();
Scenario apply_variant(const Scenario& base, const std::string& kind);

// Resolve "name" or "name_variant" into a scenario.
std::optional<Scenario> find_scenario(const std::string& name);

// Map a user-supplied probe point into model coordinates (identity unless
// the scenario declares image coordinates).
Point scenario_input_point(const Scenario& sc, Point p);

}  // namespace lorlab
