#pragma once

// Lorentzian distance on a grid: the longest proper length over future
// causal chains of admissible straight segments. Chains run point-seed ->
// lattice nodes -> point-sink, with stencil arcs and per-row winding arcs in
// between. When the time axis is glued the lattice is unrolled into winding
// layers; distance growth across layers is reported for divergence checks.
//
// Grid values approach the true distance from below as the spacing shrinks
// (every chain is an admissible causal curve).

#include "lorlab/grid.hpp"

namespace lorlab {

struct DistanceOptions {
  int winding_layers = 8;   // unrolled t-periods on time-glued models
  bool want_witness = true;
};

struct DistanceResult {
  bool reachable = false;      // q reachable from p by an admissible chain
  double value = 0.0;          // best chain length (0 when unreachable)
  std::vector<Point> witness;  // chain chart points p ... q (canonical)
  int winding_used = 0;        // t-periods wrapped by the best chain
  std::vector<double> layer_max;  // per-layer best length (diagnostics)
  bool winding_saturated = false; // still improving at the layer cap
};

DistanceResult grid_distance(const Grid& g, Point p, Point q,
                             const DistanceOptions& opt = {});

// Multi-resolution classification.
enum class DistanceClass { Unreachable, Finite, Infinite, Unresolved };

struct DistanceEstimate {
  DistanceClass cls = DistanceClass::Unreachable;
  double value = 0.0;             // finest-grid value
  std::vector<double> per_grid;   // value at each spacing (-1 unreachable)
  DistanceResult fine;            // finest-grid detail
};

// Run the grid solver at each spacing (coarse to fine) and classify:
// values that grow by kGrowthFactor twice in a row (or keep growing at the
// winding cap) count as infinite; values whose last refinement moved by
// under kConvergeRel (relative) count as finite; anything else is
// unresolved. The thresholds are engineering choices and are quoted here so
// reports can name them.
constexpr double kGrowthFactor = 1.8;
constexpr double kConvergeRel = 0.02;

DistanceEstimate estimate_distance(const SpacetimeModel& m, Point p, Point q,
                                   const std::vector<double>& grids,
                                   const DistanceOptions& opt = {});

// ---------------------------------------------------------------------------
// Continuity probe: compare d(p, q) against the limit of d(p - eps e_t,
// q + eps e_t) over a shrinking offset schedule. The approach values decay
// toward the limit like sqrt(eps) when the limit chain has a null leg, so
// the limit estimate extrapolates the last two reachable values on that
// scale: L = (sqrt(2) v_k - v_{k-1}) / (sqrt(2) - 1).

struct ProbeVerdict {
  double d = 0.0;               // distance at the pair itself
  double limit_estimate = 0.0;  // extrapolated approach limit
  double gap = 0.0;             // max(0, limit_estimate - d)
  double gap_raw = 0.0;         // unclamped limit - d (can be negative)
  bool discontinuous = false;   // gap above threshold at this resolution
  std::vector<double> offsets;        // offsets actually used
  std::vector<double> approach;       // d at each offset (-1 unreachable)
  double sub_future_len = 0.0;  // last-witness length outside I+(p)
  double sub_past_len = 0.0;    // last-witness length outside I-(q)
  std::vector<Point> witness;   // witness at the smallest reachable offset
  std::vector<std::vector<Point>> witnesses;  // one per reachable offset
  std::vector<double> sub_future;  // per-witness length outside I+(p)
  std::vector<double> sub_past;    // per-witness length outside I-(q)
};

struct ProbeOptions {
  std::vector<double> offsets;  // empty: {8h, 4h, 2h, h}
  double flag_factor = 3.0;     // flag when gap > flag_factor * tol
  double tol = 0.0;             // 0: use kTolCoeff * h
  DistanceOptions dist;
};

// Calibrated tolerance coefficient: |grid value - exact| <= kTolCoeff * h
// on random diamond pairs (see the calibration test).
constexpr double kTolCoeff = 1.0;
inline double grid_tolerance(double h) { return kTolCoeff * h; }

ProbeVerdict continuity_probe(const Grid& g, Point p, Point q,
                              const ProbeOptions& opt = {});

}  // namespace lorlab
