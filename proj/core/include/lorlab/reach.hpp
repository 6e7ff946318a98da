#pragma once

// Chronological and causal reachability floods on a grid, and the
// limit-miss sets of approach sequences.
//
// A flood tracks two layers per node: causal (reachable by a future causal
// chain) and chron (reachable by a chain containing at least one strictly
// timelike arc). Push-up closure: any causal arc taken after a chron state
// stays chron. This captures chronological reach through degenerate regions
// (e.g. null rows) where pure timelike floods are blind.

#include "lorlab/grid.hpp"

namespace lorlab {

struct FloodResult {
  std::vector<uint8_t> causal;  // per node
  std::vector<uint8_t> chron;   // per node (subset of causal)

  bool any_chron() const {
    for (uint8_t v : chron)
      if (v) return true;
    return false;
  }
};

// Reachability from / to an exact chart point. `future` = true explores the
// future of the seed; false explores its past (arcs reversed).
FloodResult flood_point(const Grid& g, Point seed, bool future);

// Reachability from a set of nodes. `seeds_chron` seeds the chron layer
// directly (true) or only the causal layer (false).
FloodResult flood_nodes(const Grid& g, const std::vector<int>& seed_nodes,
                        bool future, bool seeds_chron);

// Whether the flood covers the grid node nearest to p (false when p is off
// the window or its nearest node is excised).
bool flood_contains(const Grid& g, const std::vector<uint8_t>& layer, Point p);

// Interior points of the future cone missed in the limit: nodes chronologically
// reachable from every member of a past approach sequence x_i -> x but not
// from x itself, eroded by one cell to approximate the interior. Two offset
// schedules are run; `agree` reports whether they produce the same verdict.
struct MissResult {
  std::vector<uint8_t> nodes;   // indicator on the grid (first schedule)
  bool nonempty = false;
  bool agree = true;
  std::vector<Point> witnesses;  // up to a few surviving chart points
};

MissResult miss_future(const Grid& g, Point x);
MissResult miss_past(const Grid& g, Point x);

// Reduced single-schedule miss probe used by the ladder scan: true when the
// eroded limit set is nonempty; optionally reports one surviving point.
bool miss_nonempty(const Grid& g, Point x, bool future, int levels,
                   Point* witness = nullptr);

// The timelike unit-ish direction used to build approach sequences at x
// (the cone bisector; negated for past approach).
Vec2 cone_bisector(const SpacetimeModel& m, Point x);

}  // namespace lorlab
