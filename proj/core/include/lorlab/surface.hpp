#pragma once

// Achronal boundaries on a grid and the signed time functions they induce.
//
// A boundary is a set of grid nodes no two of which are grid-chronologically
// related (enforced by pruning to the minimal antichain). The induced field
// tau assigns each node the longest-chain proper time from the boundary
// (positive strictly above it, negative below, zero on it), computed with
// two multi-source longest-path sweeps.
//
// Field jumps: tau picks up sqrt(h)-sized steps across null cone edges even
// when the underlying function is continuous, so raw per-cell jump flags
// overfire near cones. A genuine discontinuity keeps its jump size when the
// spacing halves while the cone artifact decays by ~1/sqrt(2); the
// persistence test across a refinement pair separates the two.

#include <optional>
#include <utility>
#include <vector>

#include "lorlab/distance.hpp"
#include "lorlab/grid.hpp"

namespace lorlab {

struct BoundaryCurve {
  std::vector<int> nodes;   // grid node ids, sorted by (t, x)
  std::vector<Point> pts;   // chart points of those nodes
  bool achronal = true;     // no node chronologically reaches another
  int pruned = 0;           // nodes removed to restore achronality
  double cover = 0.0;       // fraction of valid nodes in I+(S) | S | I-(S)
};

// All valid nodes of the lattice row nearest to t = t0.
BoundaryCurve boundary_level_line(const Grid& g, double t0);

// Achronal boundary through x: with S1 the boundary of the past of the
// window's top edge, form S2 = bd(I-(y) | I-(S1)) and return
// S = bd(I+(x) | I+(S2)). x lands on S; every timelike chain from S to y
// enters through the part of S on the cone of x.
BoundaryCurve boundary_construct(const Grid& g, Point x, Point y);

struct SurfaceField {
  const Grid* grid = nullptr;
  double jump_threshold = 0.0;
  double max_jump = 0.0;
  std::vector<double> tau;     // signed value; meaningful when side != -2
  std::vector<int8_t> side;    // +1 future, 0 on S, -1 past, -2 unreached
  std::vector<double> jump;    // max |tau| difference across 8-neighbors
  std::vector<uint8_t> flagged;  // jump above threshold (raw, per cell)

  bool any_flagged() const {
    for (uint8_t f : flagged)
      if (f) return true;
    return false;
  }
};

SurfaceField surface_function_field(const Grid& g, const BoundaryCurve& S);

// tau at a chart point: the field value at the nearest node, improved by
// direct admissible chords to the sampled boundary points.
double distance_to_surface(const Grid& g, const BoundaryCurve& S, Point x);

// True when some flagged jump of the coarse field survives, at 80% of its
// size, within one coarse cell of the same location in the fine field.
bool surface_jump_persists(const SurfaceField& coarse,
                           const SurfaceField& fine,
                           Point* where = nullptr);

// Distance-formula check: over seed points z (p is always added), build the
// boundary of the grid causal future of z and its field, and return
//   min_z |tau_z(q) - tau_z(p)| - d(p, q).
// Steepness makes every term >= -tol; the z = p term makes the result ~ 0.
double distance_formula_gap(const Grid& g, Point p, Point q,
                            const std::vector<Point>& seeds = {});

}  // namespace lorlab
