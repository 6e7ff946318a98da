#pragma once

// Discretization of a model spacetime: a rectangular node lattice over the
// chart window, a primitive stencil of straight arcs between nearby nodes,
// and per-node admissibility bitmasks for the stencil. Glued axes wrap; the
// lattice spacing along a glued axis is adjusted so the period is an exact
// multiple of it.

#include <cstdint>

#include "lorlab/geometry.hpp"

namespace lorlab {

struct GridSpec {
  double h = 0.1;          // requested chart spacing
  int stencil_radius = 6;  // Chebyshev radius of the primitive stencil
  int winding_cap = 8;     // winding layers explored by the distance solver
};

// Straight arc between lattice nodes, in cell units (dt >= 0 for primitive
// stencil arcs; long probe arcs may have any sign).
struct Arc {
  int dx = 0;
  int dt = 0;
};

// All coprime (dx, dt) with 0 <= dt <= radius, |dx| <= radius. For radius 6
// this is 49 arcs, which fits one bitmask word per node.
std::vector<Arc> primitive_stencil(int radius);

struct Grid {
  const SpacetimeModel* model = nullptr;
  GridSpec spec;
  bool glue_x = false, glue_t = false;
  int nx = 0, nt = 0;       // node counts per axis
  double hx = 0.0, ht = 0.0;
  std::vector<Arc> arcs;    // primitive stencil
  std::vector<uint8_t> valid;      // node not excised
  std::vector<uint8_t> near_exc;   // stencil arcs from node may meet excision
  std::vector<uint64_t> tmask;     // arc k strictly timelike-future from node
  std::vector<uint64_t> cmask;     // arc k future-causal from node
  // Leftward winding arcs for waist models, shared by every node of a row:
  // (-k, dt) with dt in {1, 2} and k beyond the stencil radius, lengths and
  // admissibility depending only on the row.
  std::vector<std::vector<Arc>> row_winding;

  int num_nodes() const { return nx * nt; }
  int idx(int i, int j) const { return j * nx + i; }
  int col(int id) const { return id % nx; }
  int row(int id) const { return id / nx; }

  Point point(int i, int j) const {
    return {model->window.x0 + i * hx, model->window.t0 + j * ht};
  }
  Point point_of(int id) const { return point(col(id), row(id)); }

  // Chart displacement of an arc in chart units.
  Vec2 arc_vec(Arc a) const { return {a.dx * hx, a.dt * ht}; }

  // Target node of an arc, wrapping glued axes. False when the target falls
  // off a non-glued edge. `wrapped_t` reports how many upward t-periods the
  // arc crossed (negative for downward), for winding-aware solvers.
  bool target(int id, Arc a, int& out, int* wrapped_t = nullptr) const;

  // Nearest lattice node to a chart point (glued axes wrap). False when the
  // point lies outside the window walls.
  bool nearest_node(Point p, int& i, int& j) const;

  // Nodes within Chebyshev cell radius `rad` of chart point p, as node ids
  // (wrap-aware). Off-wall candidates are skipped.
  std::vector<int> nodes_near(Point p, int rad) const;
};

// Build the lattice and admissibility masks. Point excisions invalidate
// their nearest node in addition to exact pass-through blocking; nodes lying
// on excised segments or inside excised regions are invalid.
Grid build_grid(const SpacetimeModel& m, const GridSpec& spec);

// Admissibility of one arc from a given node against the true cones
// (delta = 0) or widened cones. Convenience wrapper over the geometry test,
// used for long probe arcs that are not part of the stored masks.
CausalClass grid_arc_class(const Grid& g, int id, Arc a, double widen_delta);

// Recompute the stencil masks with cones widened by `delta` (the stored
// masks correspond to delta = 0).
void widened_masks(const Grid& g, double delta, std::vector<uint64_t>& tmask,
                   std::vector<uint64_t>& cmask);

}  // namespace lorlab
